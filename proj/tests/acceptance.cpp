// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hardmatch/bench.hpp"
#include "hardmatch/embedding.hpp"
#include "hardmatch/instances.hpp"
#include "hardmatch/qubo.hpp"
#include "hardmatch/solvers.hpp"

using namespace hardmatch;
namespace fs = std::filesystem;

namespace {

constexpr double kRoundTripTol = 1e-9;   // absolute, criterion 4
constexpr double kLiftTol = 1e-6;        // relative, criterion 5
constexpr double kTieTol = 1e-9;         // relative, argmin ties in criterion 6
constexpr double kHitRateG1 = 0.9;       // criterion 8

struct Outcome {
  bool pass = true;
  std::string detail;
};

BitVector bits_of(std::uint64_t code, std::size_t n) {
  BitVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((code >> i) & 1U);
  return x;
}

double naive_qubo(const Qubo& q, const BitVector& x) {
  double e = 0.0;
  for (const auto& [key, v] : q.terms()) e += v * x[key.first] * x[key.second];
  return e;
}

double naive_ising(const IsingModel& m, const BitVector& x) {
  auto s = [&](std::size_t i) { return x[i] ? 1.0 : -1.0; };
  double e = m.offset;
  for (std::size_t i = 0; i < m.h.size(); ++i) e += m.h[i] * s(i);
  for (const auto& [key, v] : m.J) e += v * s(key.first) * s(key.second);
  return e;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome golden_matrix() {
  const double expected[8][8] = {
      {17, 0, -16, -16, 0, 0, 0, 0},   {0, 17, 0, 0, -16, -16, 0, 0},
      {0, 0, 17, -16, -16, 0, -16, 0}, {0, 0, 0, 17, 0, -16, 0, -16},
      {0, 0, 0, 0, 17, -16, -16, 0},   {0, 0, 0, 0, 0, 17, 0, -16},
      {0, 0, 0, 0, 0, 0, 17, 0},       {0, 0, 0, 0, 0, 0, 0, 17}};
  const Qubo q = matching_to_qubo(generate_gn(1).graph);
  Outcome o;
  for (std::uint32_t i = 0; i < 8; ++i)
    for (std::uint32_t j = i; j < 8; ++j)
      if (q.get(i, j) != expected[i][j]) o.pass = false;
  o.pass = o.pass && q.num_off_diagonal() == 12;
  o.detail = "8x8 matrix, 12 off-diagonals";
  return o;
}

Outcome oracle_costs() {
  const auto g1 = matching_to_qubo(generate_gn(1).graph);
  const auto r1 = brute_force_qubo(g1);
  const auto r2 = brute_force_qubo(matching_to_qubo(generate_gn(2).graph));
  const double ones = evaluate_qubo(g1, BitVector(8, 1));
  Outcome o;
  o.pass = r1.optimum == 68.0 && r1.second_best == 53.0 && r2.optimum == 495.0 &&
           ones == -56.0;
  std::ostringstream d;
  d << "G_1 opt " << r1.optimum << " second " << r1.second_best.value_or(NAN)
    << ", G_2 opt " << r2.optimum << ", all-ones " << ones;
  o.detail = d.str();
  return o;
}

Outcome closed_form() {
  Outcome o;
  std::ostringstream d;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    const auto inst = generate_gn(n);
    const double m = n + 1;
    const double got = evaluate_qubo(matching_to_qubo(inst.graph),
                                     bits_from_matching(Matching(inst.canonical_matching),
                                                        inst.graph.num_edges()));
    if (got != (1 + 2 * m * m * m) * m * m) o.pass = false;
    d << got << (n < 4 ? " " : "");
  }
  o.detail = d.str();
  return o;
}

Outcome round_trip() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    Qubo q(n, trial % 2 ? Sense::maximize : Sense::minimize);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i; j < n; ++j)
        if (rng() % 3 == 0) q.add(i, j, val(rng));
    const double sign = q.sense() == Sense::maximize ? -1.0 : 1.0;
    const IsingModel m = qubo_to_ising(q);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      const auto x = bits_of(code, n);
      worst = std::max(worst, std::abs(naive_ising(m, x) - sign * naive_qubo(q, x)));
    }
  }
  Outcome o;
  o.pass = worst <= kRoundTripTol;
  std::ostringstream d;
  d << "100 models, max abs diff " << worst;
  o.detail = d.str();
  return o;
}

Outcome embedding_lifting() {
  const auto t = build_chimera(12, 12, 4);
  Outcome o;
  std::ostringstream d;
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (std::uint32_t n = 1; n <= 2; ++n) {
    const auto inst = generate_gn(n);
    const Qubo q = matching_to_qubo(inst.graph);
    const Qubo minq = q.as_minimization();
    const Embedding e = find_embedding(q, t);
    if (!check_embedding(e, q.adjacency(), t).valid) o.pass = false;
    const PhysicalModel pm = embed_qubo(q, e, t);
    const std::size_t nv = q.num_vars();
    const bool exhaustive = nv <= 16;
    const std::size_t states = exhaustive ? (std::size_t{1} << nv) : 20000;
    for (std::size_t s = 0; s < states; ++s) {
      const BitVector x = exhaustive ? bits_of(s, nv) : bits_of(rng(), nv);
      BitVector phys(e.num_physical(), 0);
      for (std::size_t v = 0; v < nv; ++v)
        for (Qubit qb : e.chain(v)) phys[e.local_index(qb)] = x[v];
      const double logical = evaluate_qubo(minq, x);
      const double lifted = pm.unscaled_energy(spins_from_bits(phys));
      worst = std::max(worst, std::abs(lifted - logical) / std::max(1.0, std::abs(logical)));
    }
    d << "G_" << n << " " << e.num_physical() << " qubits; ";
  }
  o.pass = o.pass && worst <= kLiftTol;
  d << "max rel diff " << worst;
  o.detail = d.str();
  return o;
}

Outcome renormalization() {
  std::mt19937_64 rng(99);
  Outcome o;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    IsingModel m(n);
    std::uniform_int_distribution<int> val(-40, 40);
    for (auto& h : m.h) h = val(rng);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (rng() % 2) m.J[{i, j}] = val(rng);
    if (m.max_abs_h() == 0.0 && m.max_abs_J() == 0.0) m.h[0] = 1.0;
    const Renormalized r = renormalize(m);
    if (r.model.max_abs_h() > 2.0 || r.model.max_abs_J() > 1.0) o.pass = false;
    double best_a = std::numeric_limits<double>::infinity(), best_b = best_a;
    std::vector<double> ea, eb;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      const auto x = bits_of(code, n);
      ea.push_back(naive_ising(m, x));
      eb.push_back(naive_ising(r.model, x));
      best_a = std::min(best_a, ea.back());
      best_b = std::min(best_b, eb.back());
    }
    for (std::size_t k = 0; k < ea.size(); ++k) {
      const bool in_a = ea[k] == best_a;  // integer energies: exact
      const bool in_b = std::abs(eb[k] - best_b) <= kTieTol * std::max(1.0, std::abs(best_b));
      if (in_a != in_b) o.pass = false;
    }
  }
  o.detail = "60 models up to 16 spins";
  return o;
}

Outcome majority_repair() {
  const auto inst = generate_gn(1, EdgeOrder::sparse_first);
  const Qubo q = matching_to_qubo(inst.graph);
  const Embedding e = fixtures::dw2x_g1_embedding();
  const auto t = build_chimera(12, 12, 4);
  Outcome o;
  if (!check_embedding(e, q.adjacency(), t).valid) {
    o.pass = false;
    o.detail = "reference embedding rejected";
    return o;
  }
  const auto sample = fixtures::dw2x_g1_worst_sample();
  std::size_t ones6 = 0;
  for (Qubit qb : e.chain(6)) ones6 += sample[e.local_index(qb)];
  const Unembedded u = unembed(sample, e, RepairPolicy::majority, &q);
  const double energy = evaluate_qubo(q.as_minimization(), u.logical);
  o.pass = ones6 == 2 && e.chain(6).size() == 6 && u.logical[6] == 0 && energy == -68.0;
  std::ostringstream d;
  d << "chain 6 has " << ones6 << "/6 ones, repaired to " << int(u.logical[6])
    << ", energy " << energy;
  o.detail = d.str();
  return o;
}

CampaignConfig sa_campaign(std::uint32_t n) {
  CampaignConfig cfg;
  cfg.n = n;
  cfg.runs = 200;
  cfg.seed = 1;
  cfg.solver.kind = SolverKind::sa;
  cfg.solver.schedule = Schedule::geometric(5.0, 0.05, 1000);
  return cfg;
}

Outcome hardness_trend() {
  Outcome o;
  std::ostringstream d;
  double previous = 1.0;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    const auto r = run_campaign(sa_campaign(n));
    const double rate =
        static_cast<double>(r.repaired.optimum_hit_count) / static_cast<double>(r.config.runs);
    if (rate > previous) o.pass = false;
    if (n == 1 && rate < kHitRateG1) o.pass = false;
    previous = rate;
    d << "G_" << n << " " << r.repaired.optimum_hit_count << "/" << r.config.runs
      << (n < 4 ? ", " : "");
  }
  o.detail = d.str();
  return o;
}

Outcome sqa_sanity() {
  CampaignConfig cfg;
  cfg.n = 1;
  cfg.runs = 100;
  cfg.seed = 7;
  cfg.solver.kind = SolverKind::sqa;
  cfg.solver.sqa.trotter_slices = 16;
  const auto sqa = run_campaign(cfg);
  cfg.solver.kind = SolverKind::random;
  const auto rnd = run_campaign(cfg);
  Outcome o;
  o.pass = sqa.repaired.optimum_hit_count > rnd.repaired.optimum_hit_count;
  o.detail = "SQA " + std::to_string(sqa.repaired.optimum_hit_count) + "/100 vs random " +
             std::to_string(rnd.repaired.optimum_hit_count) + "/100";
  return o;
}

Outcome reproducibility() {
  CampaignConfig cfg;
  cfg.n = 2;
  cfg.runs = 50;
  cfg.seed = 31;
  cfg.embedding.mode = EmbeddingMode::chimera;
  cfg.solver.schedule = Schedule::geometric(5.0, 0.05, 200);
  const fs::path base = fs::temp_directory_path() / "hardmatch_acceptance";
  fs::remove_all(base);
  cfg.output_dir = (base / "a").string();
  cfg.workers = 1;
  run_campaign(cfg);
  cfg.output_dir = (base / "b").string();
  cfg.workers = 0;
  run_campaign(cfg);
  Outcome o;
  for (const char* f : {"samples.csv", "stats.json"}) {
    const auto a = slurp(base / "a" / f), b = slurp(base / "b" / f);
    if (a.empty() || a != b) o.pass = false;
  }
  fs::remove_all(base);
  o.detail = "G_2 on Chimera, 50 runs, samples.csv and stats.json";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"G_1 QUBO golden matrix", 1, golden_matrix},
      {"oracle costs", 300, oracle_costs},
      {"closed-form optimum chain", 1, closed_form},
      {"QUBO/Ising round trip", 30, round_trip},
      {"embedding validity and lifting", 120, embedding_lifting},
      {"renormalization safety", 30, renormalization},
      {"majority-vote repair case", 1, majority_repair},
      {"SA hardness trend", 600, hardness_trend},
      {"SQA beats random", 120, sqa_sanity},
      {"reproducibility", 120, reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += " (over time limit)";
    }
    std::printf("%s %zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, c.name,
                o.detail.c_str(), secs);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
