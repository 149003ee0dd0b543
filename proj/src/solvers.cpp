#include "hardmatch/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hardmatch/errors.hpp"
#include "hardmatch/kernels.hpp"

namespace hardmatch {

Schedule Schedule::geometric(double t0, double t_final, std::size_t sweeps) {
  return {ScheduleKind::geometric, t0, t_final, sweeps};
}

Schedule Schedule::linear(double t0, double t_final, std::size_t sweeps) {
  return {ScheduleKind::linear, t0, t_final, sweeps};
}

Schedule Schedule::logarithmic(double c, std::size_t sweeps) {
  const double t0 = c / std::log(2.0);
  return {ScheduleKind::logarithmic, t0, c / std::log(static_cast<double>(sweeps) + 1.0),
          sweeps};
}

void Schedule::validate() const {
  if (sweeps == 0) throw InputError("schedule needs at least one sweep");
  if (!(initial_temperature > 0.0) || !(final_temperature > 0.0))
    throw InputError("schedule temperatures must be > 0");
  if (kind != ScheduleKind::logarithmic &&
      !(final_temperature < initial_temperature))
    throw InputError("schedule must cool: final temperature < initial");
}

double Schedule::temperature(std::size_t sweep) const {
  const double frac =
      sweeps <= 1 ? 0.0
                  : static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
  switch (kind) {
    case ScheduleKind::geometric:
      return initial_temperature *
             std::pow(final_temperature / initial_temperature, frac);
    case ScheduleKind::linear:
      return initial_temperature +
             (final_temperature - initial_temperature) * frac;
    case ScheduleKind::logarithmic:
      return initial_temperature * std::log(2.0) /
             std::log(static_cast<double>(sweep) + 2.0);
  }
  return final_temperature;
}

void SqaParams::validate() const {
  if (trotter_slices == 0) throw InputError("SQA needs at least one slice");
  if (sweeps == 0) throw InputError("SQA needs at least one sweep");
  if (!(temperature > 0.0)) throw InputError("SQA temperature must be > 0");
  if (!(gamma_final > 0.0) || !(gamma_initial > gamma_final))
    throw InputError("SQA field schedule needs gamma0 > gamma_final > 0");
}

double SqaParams::replica_coupling(double gamma) const {
  const double pt = static_cast<double>(trotter_slices) * temperature;
  return -0.5 * pt * std::log(std::tanh(gamma / pt));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index) {
  // splitmix64 over the pair
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (run_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

using Clock = std::chrono::steady_clock;

// Compressed adjacency of an Ising model.
struct SparseIsing {
  std::size_t n = 0;
  std::vector<double> h;
  std::vector<std::size_t> start;
  std::vector<std::uint32_t> neighbor;
  std::vector<double> weight;

  explicit SparseIsing(const IsingModel& m) : n(m.num_spins()), h(m.h) {
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [key, v] : m.J) {
      ++degree[key.first];
      ++degree[key.second];
    }
    start.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) start[i + 1] = start[i] + degree[i];
    neighbor.resize(start[n]);
    weight.resize(start[n]);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& [key, v] : m.J) {
      neighbor[fill[key.first]] = key.second;
      weight[fill[key.first]++] = v;
      neighbor[fill[key.second]] = key.first;
      weight[fill[key.second]++] = v;
    }
  }

  // h_i + sum_j J_ij s_j
  void fields(const std::int8_t* s, double* out) const {
    for (std::size_t i = 0; i < n; ++i) {
      double f = h[i];
      for (std::size_t p = start[i]; p < start[i + 1]; ++p)
        f += weight[p] * s[neighbor[p]];
      out[i] = f;
    }
  }

  void flip(std::int8_t* s, double* f, std::size_t i) const {
    s[i] = static_cast<std::int8_t>(-s[i]);
    const double delta = 2.0 * s[i];
    for (std::size_t p = start[i]; p < start[i + 1]; ++p)
      f[neighbor[p]] += delta * weight[p];
  }
};

void random_spins(std::mt19937_64& rng, std::int8_t* s, std::size_t n) {
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t i = 0; i < n; ++i) s[i] = coin(rng) ? 1 : -1;
}

Sample finish(const IsingModel& model, const SpinVector& best,
              std::uint64_t seed, Clock::time_point started) {
  Sample out;
  out.assignment = bits_from_spins(best);
  out.energy = ising_energy(model, best);
  out.seed = seed;
  out.wall_time =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - started);
  return out;
}

// Energy of a QUBO-sourced sample in the QUBO's minimization sense.
Sample rescore(Sample s, const Qubo& q) {
  s.energy = evaluate_qubo(q.as_minimization(), s.assignment);
  return s;
}

}  // namespace

Sample simulated_annealing(const IsingModel& model, const Schedule& schedule,
                           std::uint64_t seed) {
  schedule.validate();
  const auto started = Clock::now();
  const SparseIsing sp(model);
  const std::size_t n = sp.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  SpinVector s(n);
  random_spins(rng, s.data(), n);
  std::vector<double> f(n);
  sp.fields(s.data(), f.data());
  double energy = ising_energy(model, s);
  SpinVector best = s;
  double best_energy = energy;

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double beta = 1.0 / schedule.temperature(sweep);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::uint32_t i : order) {
      const double delta = -2.0 * s[i] * f[i];
      if (delta <= 0.0 || uniform(rng) < std::exp(-delta * beta)) {
        sp.flip(s.data(), f.data(), i);
        energy += delta;
        if (energy < best_energy) {
          best_energy = energy;
          best = s;
        }
      }
    }
  }
  return finish(model, best, seed, started);
}

Sample simulated_annealing(const Qubo& model, const Schedule& schedule,
                           std::uint64_t seed) {
  return rescore(simulated_annealing(qubo_to_ising(model), schedule, seed), model);
}

Sample simulated_quantum_annealing(const IsingModel& model,
                                   const SqaParams& params, std::uint64_t seed) {
  params.validate();
  const auto started = Clock::now();
  const SparseIsing sp(model);
  const std::size_t n = sp.n;
  const std::size_t slices = params.trotter_slices;
  const double inv_p = 1.0 / static_cast<double>(slices);
  const double beta = 1.0 / params.temperature;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<std::int8_t> s(slices * n);
  std::vector<double> f(slices * n);
  std::vector<double> energy(slices);
  for (std::size_t k = 0; k < slices; ++k) {
    random_spins(rng, s.data() + k * n, n);
    sp.fields(s.data() + k * n, f.data() + k * n);
    energy[k] = ising_energy(model, {s.data() + k * n, n});
  }
  const std::size_t first = static_cast<std::size_t>(
      std::min_element(energy.begin(), energy.end()) - energy.begin());
  SpinVector best(s.begin() + static_cast<std::ptrdiff_t>(first * n),
                  s.begin() + static_cast<std::ptrdiff_t>((first + 1) * n));
  double best_energy = energy[first];

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  for (std::size_t sweep = 0; sweep < params.sweeps; ++sweep) {
    const double frac = params.sweeps <= 1
                            ? 1.0
                            : static_cast<double>(sweep) /
                                  static_cast<double>(params.sweeps - 1);
    const double gamma =
        params.gamma_initial + (params.gamma_final - params.gamma_initial) * frac;
    const double jperp = slices > 1 ? params.replica_coupling(gamma) : 0.0;
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t k = 0; k < slices; ++k) {
      std::int8_t* sk = s.data() + k * n;
      double* fk = f.data() + k * n;
      const std::int8_t* prev = s.data() + ((k + slices - 1) % slices) * n;
      const std::int8_t* next = s.data() + ((k + 1) % slices) * n;
      for (std::uint32_t i : order) {
        const double classical = -2.0 * sk[i] * fk[i];
        const double quantum = 2.0 * jperp * sk[i] * (prev[i] + next[i]);
        const double delta = classical * inv_p + quantum;
        if (delta <= 0.0 || uniform(rng) < std::exp(-delta * beta)) {
          sp.flip(sk, fk, i);
          energy[k] += classical;
        }
      }
    }

    if (params.global_moves && slices > 1) {
      for (std::uint32_t i : order) {
        double classical = 0.0;
        for (std::size_t k = 0; k < slices; ++k)
          classical += -2.0 * s[k * n + i] * f[k * n + i];
        const double delta = classical * inv_p;
        if (delta <= 0.0 || uniform(rng) < std::exp(-delta * beta)) {
          for (std::size_t k = 0; k < slices; ++k) {
            energy[k] += -2.0 * s[k * n + i] * f[k * n + i];
            sp.flip(s.data() + k * n, f.data() + k * n, i);
          }
        }
      }
    }

    for (std::size_t k = 0; k < slices; ++k) {
      if (energy[k] < best_energy) {
        best_energy = energy[k];
        std::copy_n(s.begin() + static_cast<std::ptrdiff_t>(k * n), n, best.begin());
      }
    }
  }
  return finish(model, best, seed, started);
}

Sample simulated_quantum_annealing(const Qubo& model, const SqaParams& params,
                                   std::uint64_t seed) {
  return rescore(simulated_quantum_annealing(qubo_to_ising(model), params, seed),
                 model);
}

std::vector<Sample> random_baseline(const IsingModel& model,
                                    std::size_t num_samples, std::uint64_t seed) {
  if (num_samples == 0) throw InputError("random_baseline needs num_samples >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  out.reserve(num_samples);
  SpinVector s(model.num_spins());
  for (std::size_t r = 0; r < num_samples; ++r) {
    const auto started = Clock::now();
    random_spins(rng, s.data(), s.size());
    Sample sample = finish(model, s, seed, started);
    sample.run_index = r;
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<Sample> random_baseline(const Qubo& model, std::size_t num_samples,
                                    std::uint64_t seed) {
  if (num_samples == 0) throw InputError("random_baseline needs num_samples >= 1");
  const DenseQubo dense(model.as_minimization());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Sample> out;
  out.reserve(num_samples);
  std::vector<double> x(dense.stride, 0.0);
  for (std::size_t r = 0; r < num_samples; ++r) {
    const auto started = Clock::now();
    Sample sample;
    sample.assignment.resize(model.num_vars());
    for (std::size_t i = 0; i < model.num_vars(); ++i) {
      sample.assignment[i] = static_cast<std::uint8_t>(coin(rng));
      x[i] = sample.assignment[i];
    }
    sample.energy = dense.energy(x);
    sample.run_index = r;
    sample.seed = seed;
    sample.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(
        Clock::now() - started);
    out.push_back(std::move(sample));
  }
  return out;
}

Sample exhaustive(const IsingModel& model) {
  const auto started = Clock::now();
  const QuboOptimum opt = brute_force_qubo(ising_to_qubo(model));
  return finish(model, spins_from_bits(opt.witness), 0, started);
}

Sample exhaustive(const Qubo& model) {
  const auto started = Clock::now();
  const QuboOptimum opt = brute_force_qubo(model);
  Sample out;
  out.assignment = opt.witness;
  out.energy = evaluate_qubo(model.as_minimization(), opt.witness);
  out.wall_time =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - started);
  return out;
}

}  // namespace hardmatch
