#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hardmatch/instances.hpp"

namespace hardmatch {

using BitVector = std::vector<std::uint8_t>;
using SpinVector = std::vector<std::int8_t>;
using VarPair = std::pair<std::uint32_t, std::uint32_t>;

enum class Sense : std::uint8_t { minimize, maximize };

// Upper-triangular QUBO. Q(i,i) is the linear term of x_i, Q(i,j) with i<j
// the coefficient of x_i x_j. Zero coefficients are never stored.
class Qubo {
 public:
  Qubo() = default;
  explicit Qubo(std::size_t num_vars, Sense sense = Sense::minimize)
      : num_vars_(num_vars), sense_(sense) {}

  std::size_t num_vars() const noexcept { return num_vars_; }
  Sense sense() const noexcept { return sense_; }

  // Accumulates into (min(i,j), max(i,j)).
  void add(std::uint32_t i, std::uint32_t j, double value);
  void set(std::uint32_t i, std::uint32_t j, double value);
  double get(std::uint32_t i, std::uint32_t j) const;

  const std::map<VarPair, double>& terms() const noexcept { return terms_; }
  std::size_t num_off_diagonal() const;

  // Constant left out of the matrix (e.g. -lambda|V| of the matching
  // penalty). Not included by evaluate_qubo.
  double offset() const noexcept { return offset_; }
  void set_offset(double offset) noexcept { offset_ = offset; }

  // True when every stored coefficient is an integer.
  bool integral() const;

  // Same objective in the opposite sense, coefficients negated.
  Qubo negated() const;
  // This QUBO as a minimization problem (negated if it maximizes).
  Qubo as_minimization() const;

  // Adjacency of the interaction graph (nonzero off-diagonals).
  std::vector<std::vector<std::uint32_t>> adjacency() const;

 private:
  std::size_t num_vars_ = 0;
  Sense sense_ = Sense::minimize;
  std::map<VarPair, double> terms_;
  double offset_ = 0.0;
};

// Ising model sum h_i s_i + sum_{i<j} J_ij s_i s_j + offset, minimized.
struct IsingModel {
  std::vector<double> h;
  std::map<VarPair, double> J;  // keys with first < second
  double offset = 0.0;
  // Set when built from a maximizing QUBO: energies are the negated
  // QUBO objective.
  bool negated = false;

  IsingModel() = default;
  explicit IsingModel(std::size_t num_spins) : h(num_spins, 0.0) {}

  std::size_t num_spins() const noexcept { return h.size(); }
  void add_coupling(std::uint32_t i, std::uint32_t j, double value);
  double max_abs_h() const;
  double max_abs_J() const;
};

// One variable per edge, Q_ee = 1 + 2 lambda, Q_ee' = -2 lambda for edges
// sharing a vertex, maximization sense. lambda defaults to |E|. The dropped
// constant -lambda |V| is stored as the QUBO offset.
Qubo matching_to_qubo(const Graph& g, std::optional<double> lambda = {});

double evaluate_qubo(const Qubo& q, std::span<const std::uint8_t> x);

IsingModel qubo_to_ising(const Qubo& q);
// Minimization QUBO with the same energies under x = (s + 1) / 2.
Qubo ising_to_qubo(const IsingModel& m);

double ising_energy(const IsingModel& m, std::span<const std::int8_t> spins);

SpinVector spins_from_bits(std::span<const std::uint8_t> x);
BitVector bits_from_spins(std::span<const std::int8_t> s);

inline constexpr std::size_t kMaxBruteForceVars = 28;

struct QuboOptimum {
  double optimum = 0.0;                 // in the QUBO's own sense
  BitVector witness;                    // smallest code among optima
  std::optional<double> second_best;    // best strictly worse energy
};

// Exhaustive Gray-code enumeration. Throws SizeError above
// kMaxBruteForceVars variables. Workers only change wall time, not results.
QuboOptimum brute_force_qubo(const Qubo& q, unsigned workers = 0);

// Dense symmetric form used by the enumeration and batch evaluation kernels:
// energy(x) = sum_i diag[i] x_i + 1/2 sum_ij W_ij x_i x_j, W zero on the
// diagonal, rows padded to `stride` doubles.
struct DenseQubo {
  std::size_t n = 0;
  std::size_t stride = 0;
  std::vector<double> diag;
  std::vector<double> weights;  // n * stride

  explicit DenseQubo(const Qubo& q);
  std::span<const double> row(std::size_t i) const {
    return {weights.data() + i * stride, stride};
  }
  // x as 0/1 doubles, length >= stride with zero padding.
  double energy(std::span<const double> x) const;
};

}  // namespace hardmatch
