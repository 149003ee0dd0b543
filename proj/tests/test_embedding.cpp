#include <cmath>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"

#include "fixtures.hpp"
#include "hardmatch/embedding.hpp"
#include "hardmatch/errors.hpp"
#include "hardmatch/instances.hpp"
#include "hardmatch/qubo.hpp"

using namespace hardmatch;

namespace {

// Coupler list written out from the cell description, independent of the
// topology class.
std::set<std::pair<Qubit, Qubit>> reference_couplers(std::uint32_t M, std::uint32_t N,
                                                     std::uint32_t L) {
  auto id = [&](std::uint32_t r, std::uint32_t c, std::uint32_t u, std::uint32_t k) {
    return ((r * N + c) * 2 + u) * L + k;
  };
  std::set<std::pair<Qubit, Qubit>> out;
  auto add = [&](Qubit a, Qubit b) { out.insert({std::min(a, b), std::max(a, b)}); };
  for (std::uint32_t r = 0; r < M; ++r)
    for (std::uint32_t c = 0; c < N; ++c)
      for (std::uint32_t k = 0; k < L; ++k) {
        for (std::uint32_t k2 = 0; k2 < L; ++k2) add(id(r, c, 0, k), id(r, c, 1, k2));
        if (r + 1 < M) add(id(r, c, 0, k), id(r + 1, c, 0, k));
        if (c + 1 < N) add(id(r, c, 1, k), id(r, c + 1, 1, k));
      }
  return out;
}

BitVector bits_of(std::uint64_t code, std::size_t n) {
  BitVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((code >> i) & 1U);
  return x;
}

// Physical state in which every chain carries its logical value.
BitVector lift(const Embedding& e, const BitVector& logical) {
  BitVector phys(e.num_physical(), 0);
  for (std::size_t v = 0; v < e.num_variables(); ++v)
    for (Qubit q : e.chain(v)) phys[e.local_index(q)] = logical[v];
  return phys;
}

bool chain_consistent(const Embedding& e, const BitVector& phys) {
  for (const auto& chain : e.chains())
    for (Qubit q : chain)
      if (phys[e.local_index(q)] != phys[e.local_index(chain.front())]) return false;
  return true;
}

}  // namespace

TEST_CASE("Chimera sizes") {
  const auto t = build_chimera(4, 4, 4);
  CHECK(t.num_qubits() == 128);
  CHECK(t.num_couplers() == 352);
  CHECK(t.num_couplers() == 16 * 4 * 4 + 4 * 4 * 3 + 4 * 4 * 3);

  const auto one = build_chimera(1, 1, 1);
  CHECK(one.num_qubits() == 2);
  CHECK(one.num_couplers() == 1);

  CHECK(build_chimera(12, 12, 4).num_qubits() == 1152);
}

TEST_CASE("Chimera couplers match the cell construction") {
  for (auto [M, N, L] : {std::tuple{1u, 1u, 4u}, {2u, 3u, 4u}, {3u, 2u, 2u}, {4u, 4u, 4u}}) {
    const auto t = build_chimera(M, N, L);
    const auto ref = reference_couplers(M, N, L);
    const std::set<std::pair<Qubit, Qubit>> got(t.couplers().begin(), t.couplers().end());
    CHECK(got == ref);
    CHECK(t.num_qubits() == 2 * L * M * N);
    std::size_t max_degree = 0;
    for (Qubit q = 0; q < t.index_range(); ++q)
      max_degree = std::max(max_degree, t.neighbors(q).size());
    CHECK(max_degree <= L + 2);
    if (M >= 3 && N >= 3) CHECK(max_degree == L + 2);
  }
}

TEST_CASE("dead qubits lose their couplers") {
  const auto t = build_chimera(2, 2, 4, {0, 9});
  CHECK(t.num_qubits() == 30);
  CHECK_FALSE(t.alive(0));
  CHECK(t.neighbors(0).empty());
  for (const auto& [a, b] : t.couplers()) {
    CHECK(a != 0);
    CHECK(b != 0);
    CHECK(a != 9);
    CHECK(b != 9);
  }
  CHECK(t.num_couplers() == reference_couplers(2, 2, 4).size() - 5 - 5);
  CHECK_THROWS_AS(build_chimera(1, 1, 4, {8}), InputError);
}

TEST_CASE("qubit ids follow the D-Wave linear index") {
  const auto t = build_chimera(12, 12, 4);
  CHECK(t.id(8, 4, 0, 0) == 800);
  CHECK(t.id(10, 10, 1, 3) == ((10 * 12 + 10) * 2 + 1) * 4 + 3);
  // shore 0 couples vertically, shore 1 horizontally
  CHECK(t.has_coupler(t.id(3, 3, 0, 1), t.id(4, 3, 0, 1)));
  CHECK(t.has_coupler(t.id(3, 3, 1, 1), t.id(3, 4, 1, 1)));
  CHECK_FALSE(t.has_coupler(t.id(3, 3, 1, 1), t.id(4, 3, 1, 1)));
}

TEST_CASE("reference G_1 hardware mapping is a valid embedding") {
  const auto t = build_chimera(12, 12, 4);
  const auto e = fixtures::dw2x_g1_embedding();
  const auto layered = matching_to_qubo(generate_gn(1).graph);
  const auto sparse = matching_to_qubo(generate_gn(1, EdgeOrder::sparse_first).graph);
  CHECK(check_embedding(e, sparse.adjacency(), t).valid);
  // Under the layered numbering the same chains miss couplings.
  CHECK_FALSE(check_embedding(e, layered.adjacency(), t).valid);
  CHECK(e.num_physical() == 17);
  CHECK(e.max_chain_length() == 6);
}

TEST_CASE("check_embedding reports each kind of defect") {
  const auto t = build_chimera(1, 1, 4);
  const std::vector<std::vector<std::uint32_t>> adj{{1}, {0}};
  CHECK(check_embedding(Embedding({{0}, {4}}), adj, t).valid);
  CHECK_FALSE(check_embedding(Embedding({{0}, {1}}), adj, t).valid);        // no coupler
  CHECK_FALSE(check_embedding(Embedding({{0, 4}, {4}}), adj, t).valid);     // overlap
  CHECK_FALSE(check_embedding(Embedding({{0, 1}, {4}}), adj, t).valid);     // disconnected
  CHECK_FALSE(check_embedding(Embedding({{}, {4}}), adj, t).valid);         // empty
  const auto dead = build_chimera(1, 1, 4, {4});
  CHECK_FALSE(check_embedding(Embedding({{0}, {4}}), adj, dead).valid);     // dead qubit
}

TEST_CASE("find_embedding on G_1 and G_2") {
  const auto t = build_chimera(12, 12, 4);
  for (std::uint32_t n : {1u, 2u}) {
    const auto q = matching_to_qubo(generate_gn(n).graph);
    const auto e = find_embedding(q, t);
    const auto check = check_embedding(e, q.adjacency(), t);
    INFO(n);
    CHECK(check.valid);
    if (n == 1) CHECK(e.num_physical() <= 25);
    // deterministic for a fixed seed
    const auto again = find_embedding(q, t);
    CHECK(again.chains() == e.chains());
  }
}

TEST_CASE("single-cell adjacency embeds with singleton chains") {
  Qubo q(8);
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = 4; j < 8; ++j) q.add(i, j, 1.0);
  const auto t = build_chimera(1, 1, 4);
  const auto e = find_embedding(q, t);
  CHECK(check_embedding(e, q.adjacency(), t).valid);
  for (const auto& chain : e.chains()) CHECK(chain.size() == 1);
}

TEST_CASE("G_2 does not fit a 2x2x4 Chimera") {
  const auto q = matching_to_qubo(generate_gn(2).graph);
  EmbedOptions opts;
  opts.max_restarts = 2;
  opts.rounds_per_restart = 16;
  CHECK_THROWS_AS(find_embedding(q, build_chimera(2, 2, 4), opts), EmbeddingError);
}

TEST_CASE("embed_qubo hand-expanded chain") {
  Qubo q(1);
  q.set(0, 0, 2.0);
  const auto t = build_chimera(1, 1, 1);
  const auto pm = embed_qubo(q, Embedding({{0, 1}}), t, 10.0);
  CHECK(pm.qubo.get(0, 0) == 11.0);
  CHECK(pm.qubo.get(1, 1) == 11.0);
  CHECK(pm.qubo.get(0, 1) == -20.0);
  CHECK(pm.chain_penalty == 10.0);
}

TEST_CASE("singleton chains add no penalty") {
  Qubo two(2, Sense::maximize);
  two.set(0, 0, 3.0);
  two.set(1, 1, -1.0);
  two.set(0, 1, 2.0);
  const auto pm = embed_qubo(two, Embedding({{0}, {4}}), build_chimera(1, 1, 4));
  CHECK(pm.qubo.terms() == two.as_minimization().terms());
}

TEST_CASE("auto chain penalty on G_1 is 56") {
  const auto q = matching_to_qubo(generate_gn(1, EdgeOrder::sparse_first).graph);
  const auto pm = embed_qubo(q, fixtures::dw2x_g1_embedding(), build_chimera(12, 12, 4));
  CHECK(pm.chain_penalty == 56.0);
  CHECK(pm.logical_negated);
  CHECK(pm.ising.max_abs_h() <= kMaxAbsField + 1e-12);
  CHECK(pm.ising.max_abs_J() <= kMaxAbsCoupling + 1e-12);
}

TEST_CASE("renormalize examples") {
  IsingModel a(1);
  a.h[0] = 4.0;
  auto ra = renormalize(a);
  CHECK(ra.scale_factor == 0.5);
  CHECK(ra.model.h[0] == 2.0);

  IsingModel b(2);
  b.h[0] = 1.0;
  b.add_coupling(0, 1, 4.0);
  auto rb = renormalize(b);
  CHECK(rb.scale_factor == 0.25);
  CHECK(rb.model.J.at({0, 1}) == 1.0);

  CHECK_THROWS_AS(renormalize(IsingModel(3)), InputError);
}

TEST_CASE("renormalize keeps the argmin set") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 10;
    IsingModel m(n);
    for (auto& h : m.h) h = std::round(d(rng));
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (rng() % 2) m.add_coupling(i, j, std::round(d(rng)));
    if (m.max_abs_h() == 0.0 && m.max_abs_J() == 0.0) continue;
    const auto r = renormalize(m);
    CHECK(r.model.max_abs_h() <= 2.0);
    CHECK(r.model.max_abs_J() <= 1.0);
    std::vector<double> before, after;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      const auto s = spins_from_bits(bits_of(code, n));
      before.push_back(ising_energy(m, s));
      after.push_back(ising_energy(r.model, s));
    }
    const double lo_b = *std::min_element(before.begin(), before.end());
    const double lo_a = *std::min_element(after.begin(), after.end());
    for (std::size_t k = 0; k < before.size(); ++k)
      CHECK((before[k] == lo_b) == (std::abs(after[k] - lo_a) <= 1e-9));
  }
}

TEST_CASE("chain-consistent states lift exactly") {
  const auto t = build_chimera(12, 12, 4);
  const auto inst = generate_gn(1);
  const auto q = matching_to_qubo(inst.graph);
  const auto minq = q.as_minimization();
  const auto e = find_embedding(q, t);
  const auto pm = embed_qubo(q, e, t);
  for (std::uint64_t code = 0; code < 256; ++code) {
    const auto x = bits_of(code, 8);
    const auto phys = lift(e, x);
    const double logical = evaluate_qubo(minq, x);
    CHECK(evaluate_qubo(pm.qubo, phys) == logical);
    const double lifted = pm.unscaled_energy(spins_from_bits(phys));
    CHECK(std::abs(lifted - logical) <= 1e-6 * std::max(1.0, std::abs(logical)));
  }
}

TEST_CASE("auto penalty keeps optima chain-consistent on small instances") {
  // Small matching instances whose line graphs are not bipartite, so the
  // embeddings need chains.
  std::mt19937_64 rng(41);
  const auto t = build_chimera(2, 2, 4);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 25; ++trial) {
    const std::size_t nv = 3 + rng() % 3;
    std::vector<Edge> edges;
    for (Vertex a = 0; a < nv; ++a)
      for (Vertex b = a + 1; b < nv; ++b)
        if (rng() % 2) edges.push_back({a, b});
    if (edges.size() < 3 || edges.size() > 6) continue;
    const Graph g(nv, edges);
    const auto q = matching_to_qubo(g);
    EmbedOptions opts;
    opts.seed = trial;
    const auto e = find_embedding(q, t, opts);
    if (e.num_physical() > 12 || e.max_chain_length() < 2) continue;
    const auto pm = embed_qubo(q, e, t);
    const std::size_t n = e.num_physical();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> energies;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      energies.push_back(evaluate_qubo(pm.qubo, bits_of(code, n)));
      best = std::min(best, energies.back());
    }
    for (std::uint64_t code = 0; code < energies.size(); ++code)
      if (energies[code] == best) CHECK(chain_consistent(e, bits_of(code, n)));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("unembed examples") {
  SECTION("six-qubit chain 0,0,0,0,1,1") {
    const Embedding e({{0, 1, 2, 3, 4, 5}});
    const auto r = unembed(BitVector{0, 0, 0, 0, 1, 1}, e, RepairPolicy::majority);
    CHECK(r.logical == BitVector{0});
    CHECK(r.chain_break_count == 1);
    CHECK(r.broken_variables == std::vector<std::size_t>{0});
  }
  SECTION("unanimous chains pass through") {
    const Embedding e({{0, 1}, {2}, {3, 4, 5}});
    const auto r = unembed(BitVector{1, 1, 0, 1, 1, 1}, e, RepairPolicy::majority);
    CHECK(r.logical == BitVector{1, 0, 1});
    CHECK(r.chain_break_count == 0);
  }
  SECTION("tie resolved by the logical energy") {
    Qubo q(1);
    q.set(0, 0, -1.0);  // minimization: 1 is better
    const Embedding e({{0, 1}});
    const auto r = unembed(BitVector{0, 1}, e, RepairPolicy::majority, &q);
    CHECK(r.logical == BitVector{1});
    CHECK(r.chain_break_count == 1);
    const auto flipped = unembed(BitVector{1, 0}, e, RepairPolicy::majority, &q);
    CHECK(flipped.logical == BitVector{1});
    // strict: value of the chain's lowest qubit
    CHECK(unembed(BitVector{0, 1}, e, RepairPolicy::strict, &q).logical == BitVector{0});
    CHECK(unembed(BitVector{1, 0}, e, RepairPolicy::strict, &q).logical == BitVector{1});
  }
  SECTION("length mismatch") {
    const Embedding e({{0, 1}});
    CHECK_THROWS_AS(unembed(BitVector{0}, e, RepairPolicy::majority), InputError);
  }
}

TEST_CASE("repair only touches broken variables") {
  std::mt19937_64 rng(53);
  const auto t = build_chimera(12, 12, 4);
  const auto q = matching_to_qubo(generate_gn(2).graph);
  const auto e = find_embedding(q, t);
  for (int trial = 0; trial < 200; ++trial) {
    BitVector phys(e.num_physical());
    for (auto& b : phys) b = static_cast<std::uint8_t>(rng() & 1U);
    const auto strict = unembed(phys, e, RepairPolicy::strict, &q);
    const auto major = unembed(phys, e, RepairPolicy::majority, &q);
    CHECK(major.chain_break_count == strict.chain_break_count);
    CHECK(major.broken_variables == strict.broken_variables);
    const std::set<std::size_t> broken(strict.broken_variables.begin(),
                                       strict.broken_variables.end());
    for (std::size_t v = 0; v < e.num_variables(); ++v) {
      if (broken.count(v)) continue;
      CHECK(major.logical[v] == phys[e.local_index(e.chain(v).front())]);
    }
  }
}

TEST_CASE("worst G_1 hardware sample repairs to the optimum") {
  const auto inst = generate_gn(1, EdgeOrder::sparse_first);
  const auto q = matching_to_qubo(inst.graph);
  const auto e = fixtures::dw2x_g1_embedding();
  const auto r = unembed(fixtures::dw2x_g1_worst_sample(), e, RepairPolicy::majority, &q);
  CHECK(r.broken_variables == std::vector<std::size_t>{6});
  CHECK(r.logical[6] == 0);
  CHECK(r.logical == BitVector{1, 1, 1, 1, 0, 0, 0, 0});
  CHECK(evaluate_qubo(q.as_minimization(), r.logical) == -68.0);
}
