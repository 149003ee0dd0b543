#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardmatch/qubo.hpp"

namespace hardmatch {

using Qubit = std::uint32_t;

// Chimera graph: an M x N grid of K_{L,L} unit cells. Qubit (row r, col c,
// shore u, index k) has id ((r*N + c)*2 + u)*L + k. Shore 0 qubits couple
// vertically to the same k in the cell below, shore 1 qubits horizontally
// to the same k in the cell to the right. This matches the linear indices
// used by D-Wave 2X qubit maps.
class ChimeraTopology {
 public:
  ChimeraTopology() = default;
  ChimeraTopology(std::uint32_t rows, std::uint32_t cols, std::uint32_t shore,
                  std::set<Qubit> dead = {});

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::uint32_t shore() const noexcept { return shore_; }
  const std::set<Qubit>& dead_qubits() const noexcept { return dead_; }

  // Size of the id range, dead qubits included.
  std::size_t index_range() const noexcept { return alive_.size(); }
  std::size_t num_qubits() const noexcept { return num_alive_; }
  std::size_t num_couplers() const noexcept { return couplers_.size(); }

  bool alive(Qubit q) const { return q < alive_.size() && alive_[q]; }
  bool has_coupler(Qubit a, Qubit b) const;
  const std::vector<Qubit>& neighbors(Qubit q) const { return adj_.at(q); }
  // Sorted (a < b) pairs.
  const std::vector<std::pair<Qubit, Qubit>>& couplers() const noexcept {
    return couplers_;
  }

  Qubit id(std::uint32_t row, std::uint32_t col, std::uint32_t side,
           std::uint32_t k) const;

 private:
  std::uint32_t rows_ = 0, cols_ = 0, shore_ = 0;
  std::set<Qubit> dead_;
  std::vector<bool> alive_;
  std::size_t num_alive_ = 0;
  std::vector<std::vector<Qubit>> adj_;  // sorted
  std::vector<std::pair<Qubit, Qubit>> couplers_;
};

ChimeraTopology build_chimera(std::uint32_t rows, std::uint32_t cols,
                              std::uint32_t shore,
                              const std::set<Qubit>& dead = {});

// Logical variable -> chain of physical qubits (each chain sorted).
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::vector<std::vector<Qubit>> chains);

  std::size_t num_variables() const noexcept { return chains_.size(); }
  const std::vector<std::vector<Qubit>>& chains() const noexcept {
    return chains_;
  }
  const std::vector<Qubit>& chain(std::size_t v) const { return chains_.at(v); }

  // Sorted union of all chains: the physical variable order used by
  // PhysicalModel samples and unembed().
  const std::vector<Qubit>& physical_qubits() const noexcept {
    return qubits_;
  }
  std::size_t num_physical() const noexcept { return qubits_.size(); }
  // Position of q in physical_qubits(); throws InputError if absent.
  std::size_t local_index(Qubit q) const;

  double average_chain_length() const;
  std::size_t max_chain_length() const;

 private:
  std::vector<std::vector<Qubit>> chains_;
  std::vector<Qubit> qubits_;
};

struct EmbeddingCheck {
  bool valid = true;
  std::vector<std::string> problems;
};

// Checks chains are nonempty, on live qubits, pairwise disjoint and
// connected, and that every logical edge has a coupler between its chains.
EmbeddingCheck check_embedding(const Embedding& e,
                               const std::vector<std::vector<std::uint32_t>>& logical_adjacency,
                               const ChimeraTopology& t);

struct EmbedOptions {
  std::uint64_t seed = 1;
  std::size_t max_restarts = 16;
  std::size_t rounds_per_restart = 64;  // rip-up-and-reroute passes
  std::size_t tightening_rounds = 4;    // chain shortening once disjoint
};

// Chain-growth heuristic: variables are placed breadth-first from a
// high-degree variable by routing shortest (usage-weighted) paths from a root
// qubit to every placed neighbor chain. Overlaps are then removed by repeated
// rip-up-and-reroute under escalating overuse and history penalties; chains
// boxed in by other chains are re-placed alongside the variable that needs
// them, and redundant or shared qubits are trimmed. Restart r uses seed
// `seed + r`; the first successful restart wins. Throws EmbeddingError.
Embedding find_embedding(const Qubo& q, const ChimeraTopology& t,
                         const EmbedOptions& options = {});

struct PhysicalModel {
  Embedding embedding;
  // Minimization QUBO over embedding.physical_qubits() order, before
  // renormalization. Its energy on a chain-consistent state equals the
  // logical minimization energy.
  Qubo qubo;
  // Renormalized Ising model over the same variables.
  IsingModel ising;
  double chain_penalty = 0.0;
  double scale_factor = 1.0;
  bool logical_negated = false;  // logical QUBO was a maximization

  // Ising energy mapped back to physical QUBO units.
  double unscaled_energy(std::span<const std::int8_t> spins) const;
};

// Embeds q: diagonals split evenly over each chain (integer split with the
// remainder on the lowest qubits when the coefficient is integral), each
// logical coupling on the lexicographically smallest coupler between the two
// chains, and phi * (a + b - 2ab) on every coupler inside a chain. phi
// defaults to |energy of the all-ones assignment|, raised to the largest
// absolute row sum of q when it does not exceed half of that (the bound that
// guarantees chain-consistent optima).
PhysicalModel embed_qubo(const Qubo& q, const Embedding& e,
                         const ChimeraTopology& t,
                         std::optional<double> phi = {});

struct Renormalized {
  IsingModel model;
  double scale_factor = 1.0;
};

inline constexpr double kMaxAbsField = 2.0;
inline constexpr double kMaxAbsCoupling = 1.0;

// Scales the model (offset included) by
// min(2 / max|h|, 1 / max|J|). Throws InputError on an all-zero model.
Renormalized renormalize(const IsingModel& m);

enum class RepairPolicy { strict, majority };

struct Unembedded {
  BitVector logical;
  std::size_t chain_break_count = 0;
  std::vector<std::size_t> broken_variables;
};

// Maps a physical sample (ordered as e.physical_qubits()) to a logical
// assignment. Disagreeing chains are counted as broken. Majority policy
// resolves exact ties by keeping the completion that is better for
// `logical`, trying ties in ascending variable order and preferring 0 on
// equal energy; strict policy takes the majority without that repair (ties
// go to the chain's lowest qubit).
Unembedded unembed(std::span<const std::uint8_t> sample, const Embedding& e,
                   RepairPolicy policy, const Qubo* logical = nullptr);

}  // namespace hardmatch
