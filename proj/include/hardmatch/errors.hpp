#pragma once

#include <stdexcept>
#include <string>

namespace hardmatch {

// Malformed arguments: wrong lengths, unknown indices, inconsistent models.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance exceeds the bound of an exhaustive routine.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Minor embedding heuristic gave up.
class EmbeddingError : public std::runtime_error {
 public:
  EmbeddingError(const std::string& what, std::size_t best_overlap,
                 std::size_t best_qubits)
      : std::runtime_error(what),
        best_overlap_(best_overlap),
        best_qubits_(best_qubits) {}

  // Smallest number of over-used qubits reached by any restart.
  std::size_t best_overlap() const noexcept { return best_overlap_; }
  std::size_t best_qubits() const noexcept { return best_qubits_; }

 private:
  std::size_t best_overlap_;
  std::size_t best_qubits_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hardmatch
