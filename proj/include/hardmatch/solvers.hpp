#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hardmatch/qubo.hpp"

namespace hardmatch {

enum class ScheduleKind { geometric, logarithmic, linear };

// Temperature law for simulated annealing over `sweeps` sweeps.
//   geometric:   T_k = T0 * (T_final / T0)^(k / (sweeps - 1))
//   linear:      T_k = T0 + (T_final - T0) * k / (sweeps - 1)
//   logarithmic: T_k = c / ln(k + 2), with c = T0 * ln 2 so T_0 = T0
struct Schedule {
  ScheduleKind kind = ScheduleKind::geometric;
  double initial_temperature = 5.0;
  double final_temperature = 0.05;
  std::size_t sweeps = 1000;

  static Schedule geometric(double t0, double t_final, std::size_t sweeps);
  static Schedule linear(double t0, double t_final, std::size_t sweeps);
  static Schedule logarithmic(double c, std::size_t sweeps);

  // Throws InputError when temperatures are not positive, a geometric or
  // linear schedule does not cool, or sweeps is 0.
  void validate() const;
  double temperature(std::size_t sweep) const;
};

// Path-integral simulated quantum annealing: P Trotter replicas at fixed
// temperature T, transverse field annealed linearly from gamma0 to
// gamma_final.
struct SqaParams {
  std::size_t trotter_slices = 16;
  double temperature = 0.05;
  double gamma_initial = 3.0;
  double gamma_final = 1e-3;
  std::size_t sweeps = 1000;
  bool global_moves = true;

  // P >= 1 (P = 1 has no inter-replica coupling), gamma0 > gamma_f > 0.
  void validate() const;
  // Ferromagnetic coupling between adjacent slices at field gamma:
  // -(P T / 2) ln tanh(gamma / (P T)).
  double replica_coupling(double gamma) const;
};

// One solver run. `assignment` is over {0,1} (spin = 2x - 1) and `energy`
// is the minimization-sense energy of the model it was produced for.
struct Sample {
  BitVector assignment;
  double energy = 0.0;
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::chrono::microseconds wall_time{0};
};

// Per-run seed derived from a campaign master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index);

// Single-spin-flip Metropolis annealing; returns the best state seen.
Sample simulated_annealing(const IsingModel& model, const Schedule& schedule,
                           std::uint64_t seed);
Sample simulated_annealing(const Qubo& model, const Schedule& schedule,
                           std::uint64_t seed);

Sample simulated_quantum_annealing(const IsingModel& model,
                                   const SqaParams& params, std::uint64_t seed);
Sample simulated_quantum_annealing(const Qubo& model, const SqaParams& params,
                                   std::uint64_t seed);

// Uniform random assignments; sample i gets run_index i.
std::vector<Sample> random_baseline(const IsingModel& model,
                                    std::size_t num_samples, std::uint64_t seed);
std::vector<Sample> random_baseline(const Qubo& model, std::size_t num_samples,
                                    std::uint64_t seed);

// Global optimum by enumeration. Throws SizeError above kMaxBruteForceVars.
Sample exhaustive(const IsingModel& model);
Sample exhaustive(const Qubo& model);

}  // namespace hardmatch
