#include "hardmatch/qubo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "hardmatch/errors.hpp"
#include "hardmatch/kernels.hpp"

namespace hardmatch {

void Qubo::add(std::uint32_t i, std::uint32_t j, double value) {
  if (i >= num_vars_ || j >= num_vars_)
    throw InputError("QUBO index out of range");
  if (i > j) std::swap(i, j);
  if (value == 0.0) return;
  auto [it, inserted] = terms_.try_emplace({i, j}, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Qubo::set(std::uint32_t i, std::uint32_t j, double value) {
  if (i >= num_vars_ || j >= num_vars_)
    throw InputError("QUBO index out of range");
  if (i > j) std::swap(i, j);
  if (value == 0.0)
    terms_.erase({i, j});
  else
    terms_[{i, j}] = value;
}

double Qubo::get(std::uint32_t i, std::uint32_t j) const {
  if (i > j) std::swap(i, j);
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

std::size_t Qubo::num_off_diagonal() const {
  return static_cast<std::size_t>(std::count_if(
      terms_.begin(), terms_.end(),
      [](const auto& t) { return t.first.first != t.first.second; }));
}

bool Qubo::integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
    return std::nearbyint(t.second) == t.second;
  });
}

Qubo Qubo::negated() const {
  Qubo out(num_vars_,
           sense_ == Sense::minimize ? Sense::maximize : Sense::minimize);
  for (const auto& [key, value] : terms_) out.terms_.emplace(key, -value);
  out.offset_ = -offset_;
  return out;
}

Qubo Qubo::as_minimization() const {
  return sense_ == Sense::maximize ? negated() : *this;
}

std::vector<std::vector<std::uint32_t>> Qubo::adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(num_vars_);
  for (const auto& [key, value] : terms_) {
    if (key.first == key.second) continue;
    adj[key.first].push_back(key.second);
    adj[key.second].push_back(key.first);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

void IsingModel::add_coupling(std::uint32_t i, std::uint32_t j, double value) {
  if (i == j) throw InputError("Ising coupling needs two distinct spins");
  if (i >= num_spins() || j >= num_spins())
    throw InputError("Ising index out of range");
  if (i > j) std::swap(i, j);
  if (value == 0.0) return;
  auto [it, inserted] = J.try_emplace({i, j}, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) J.erase(it);
  }
}

double IsingModel::max_abs_h() const {
  double m = 0.0;
  for (double v : h) m = std::max(m, std::abs(v));
  return m;
}

double IsingModel::max_abs_J() const {
  double m = 0.0;
  for (const auto& [key, v] : J) m = std::max(m, std::abs(v));
  return m;
}

Qubo matching_to_qubo(const Graph& g, std::optional<double> lambda) {
  const double lam = lambda.value_or(static_cast<double>(g.num_edges()));
  if (!(lam > 0.0)) throw InputError("matching penalty lambda must be > 0");

  Qubo q(g.num_edges(), Sense::maximize);
  for (std::uint32_t e = 0; e < g.num_edges(); ++e) q.set(e, e, 1.0 + 2.0 * lam);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto& inc = g.incident(v);
    for (std::size_t a = 0; a < inc.size(); ++a)
      for (std::size_t b = a + 1; b < inc.size(); ++b)
        // Two distinct edges of a simple graph share at most one vertex.
        q.set(static_cast<std::uint32_t>(inc[a]),
              static_cast<std::uint32_t>(inc[b]), -2.0 * lam);
  }
  q.set_offset(-lam * static_cast<double>(g.num_vertices()));
  return q;
}

double evaluate_qubo(const Qubo& q, std::span<const std::uint8_t> x) {
  if (x.size() != q.num_vars())
    throw InputError("evaluate_qubo: assignment has " +
                     std::to_string(x.size()) + " bits, model has " +
                     std::to_string(q.num_vars()));
  double energy = 0.0;
  for (const auto& [key, value] : q.terms())
    if (x[key.first] && x[key.second]) energy += value;
  return energy;
}

IsingModel qubo_to_ising(const Qubo& q) {
  const double sign = q.sense() == Sense::maximize ? -1.0 : 1.0;
  IsingModel m(q.num_vars());
  m.negated = q.sense() == Sense::maximize;
  // x_i = (s_i + 1) / 2
  for (const auto& [key, raw] : q.terms()) {
    const double value = sign * raw;
    const auto [i, j] = key;
    if (i == j) {
      m.h[i] += value / 2.0;
      m.offset += value / 2.0;
    } else {
      m.add_coupling(i, j, value / 4.0);
      m.h[i] += value / 4.0;
      m.h[j] += value / 4.0;
      m.offset += value / 4.0;
    }
  }
  return m;
}

Qubo ising_to_qubo(const IsingModel& m) {
  // s_i = 2 x_i - 1
  Qubo q(m.num_spins(), Sense::minimize);
  double offset = m.offset;
  for (std::uint32_t i = 0; i < m.num_spins(); ++i) {
    q.add(i, i, 2.0 * m.h[i]);
    offset -= m.h[i];
  }
  for (const auto& [key, value] : m.J) {
    q.add(key.first, key.second, 4.0 * value);
    q.add(key.first, key.first, -2.0 * value);
    q.add(key.second, key.second, -2.0 * value);
    offset += value;
  }
  q.set_offset(offset);
  return q;
}

double ising_energy(const IsingModel& m, std::span<const std::int8_t> spins) {
  if (spins.size() != m.num_spins())
    throw InputError("ising_energy: spin vector has " +
                     std::to_string(spins.size()) + " entries, model has " +
                     std::to_string(m.num_spins()));
  double energy = m.offset;
  for (std::size_t i = 0; i < spins.size(); ++i) energy += m.h[i] * spins[i];
  for (const auto& [key, value] : m.J)
    energy += value * spins[key.first] * spins[key.second];
  return energy;
}

SpinVector spins_from_bits(std::span<const std::uint8_t> x) {
  SpinVector s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
  return s;
}

BitVector bits_from_spins(std::span<const std::int8_t> s) {
  BitVector x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] > 0 ? 1 : 0;
  return x;
}

DenseQubo::DenseQubo(const Qubo& q)
    : n(q.num_vars()),
      stride(kernels::padded(q.num_vars())),
      diag(kernels::padded(q.num_vars()), 0.0),
      weights(q.num_vars() * kernels::padded(q.num_vars()), 0.0) {
  for (const auto& [key, value] : q.terms()) {
    const auto [i, j] = key;
    if (i == j) {
      diag[i] = value;
    } else {
      weights[i * stride + j] = value;
      weights[j * stride + i] = value;
    }
  }
}

double DenseQubo::energy(std::span<const double> x) const {
  const auto& k = kernels::active();
  double quadratic = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != 0.0) quadratic += x[i] * k.dot(row(i).data(), x.data(), stride);
  return k.dot(diag.data(), x.data(), stride) + 0.5 * quadratic;
}

namespace {

// Best and second-best distinct minimization energies with the smallest
// assignment code among optima.
struct Extremes {
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_code = 0;
  double second = std::numeric_limits<double>::infinity();

  static bool same(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
  }

  void offer(double energy, std::uint64_t code) {
    if (same(energy, best)) {
      best_code = std::min(best_code, code);
    } else if (energy < best) {
      second = best;
      best = energy;
      best_code = code;
    } else if (energy < second && !same(energy, second)) {
      second = energy;
    }
  }

  void merge(const Extremes& other) {
    if (other.best != std::numeric_limits<double>::infinity())
      offer(other.best, other.best_code);
    if (other.second != std::numeric_limits<double>::infinity())
      offer(other.second, std::numeric_limits<std::uint64_t>::max());
  }
};

// Enumerates the sub-cube whose top `prefix_bits` bits equal `block`.
Extremes enumerate_block(const DenseQubo& dq, std::size_t low_bits,
                         std::uint64_t block, const kernels::KernelTable& k) {
  std::vector<double> x(dq.stride, 0.0);
  std::uint64_t code = block << low_bits;
  for (std::size_t i = low_bits; i < dq.n; ++i)
    x[i] = static_cast<double>((code >> i) & 1U);

  std::vector<double> field(dq.stride, 0.0);
  for (std::size_t i = low_bits; i < dq.n; ++i)
    if (x[i] != 0.0) k.axpy(1.0, dq.row(i).data(), field.data(), dq.stride);
  double energy = dq.energy(x);

  Extremes ext;
  ext.offer(energy, code);
  const std::uint64_t steps = std::uint64_t{1} << low_bits;
  for (std::uint64_t t = 1; t < steps; ++t) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(t));
    const double* row = dq.row(bit).data();
    if (x[bit] == 0.0) {
      energy += dq.diag[bit] + field[bit];
      x[bit] = 1.0;
      k.axpy(1.0, row, field.data(), dq.stride);
    } else {
      energy -= dq.diag[bit] + field[bit];
      x[bit] = 0.0;
      k.axpy(-1.0, row, field.data(), dq.stride);
    }
    code ^= std::uint64_t{1} << bit;
    ext.offer(energy, code);
  }
  return ext;
}

}  // namespace

QuboOptimum brute_force_qubo(const Qubo& q, unsigned workers) {
  if (q.num_vars() > kMaxBruteForceVars)
    throw SizeError("brute_force_qubo: " + std::to_string(q.num_vars()) +
                    " variables exceeds limit " +
                    std::to_string(kMaxBruteForceVars));
  const Qubo minq = q.as_minimization();
  const DenseQubo dq(minq);
  const auto& k = kernels::active();

  // The partition depends only on n, so results do not depend on `workers`.
  const std::size_t prefix_bits = std::min<std::size_t>(dq.n, 6);
  const std::size_t low_bits = dq.n - prefix_bits;
  const std::uint64_t num_blocks = std::uint64_t{1} << prefix_bits;

  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, num_blocks));

  std::vector<Extremes> per_block(num_blocks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < num_blocks; b = next++)
      per_block[b] = enumerate_block(dq, low_bits, b, k);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  Extremes total;
  for (const auto& e : per_block) total.merge(e);

  QuboOptimum out;
  const double sign = q.sense() == Sense::maximize ? -1.0 : 1.0;
  out.optimum = sign * total.best;
  out.witness.assign(q.num_vars(), 0);
  for (std::size_t i = 0; i < q.num_vars(); ++i)
    out.witness[i] = static_cast<std::uint8_t>((total.best_code >> i) & 1U);
  if (total.second != std::numeric_limits<double>::infinity())
    out.second_best = sign * total.second;
  return out;
}

}  // namespace hardmatch
