#include "hardmatch/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "hardmatch/errors.hpp"
#include "hardmatch/kernels.hpp"

namespace hardmatch {

ChimeraTopology::ChimeraTopology(std::uint32_t rows, std::uint32_t cols,
                                 std::uint32_t shore, std::set<Qubit> dead)
    : rows_(rows), cols_(cols), shore_(shore), dead_(std::move(dead)) {
  if (rows == 0 || cols == 0 || shore == 0)
    throw InputError("Chimera dimensions must be positive");
  const std::size_t range = std::size_t{2} * shore * rows * cols;
  for (Qubit q : dead_)
    if (q >= range)
      throw InputError("dead qubit " + std::to_string(q) + " out of range");
  alive_.assign(range, true);
  for (Qubit q : dead_) alive_[q] = false;
  num_alive_ = range - dead_.size();
  adj_.assign(range, {});

  auto link = [&](Qubit a, Qubit b) {
    if (!alive_[a] || !alive_[b]) return;
    if (a > b) std::swap(a, b);
    couplers_.emplace_back(a, b);
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  };
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      for (std::uint32_t i = 0; i < shore; ++i)
        for (std::uint32_t j = 0; j < shore; ++j) link(id(r, c, 0, i), id(r, c, 1, j));
      for (std::uint32_t k = 0; k < shore; ++k) {
        if (r + 1 < rows) link(id(r, c, 0, k), id(r + 1, c, 0, k));
        if (c + 1 < cols) link(id(r, c, 1, k), id(r, c + 1, 1, k));
      }
    }
  }
  std::sort(couplers_.begin(), couplers_.end());
  for (auto& row : adj_) std::sort(row.begin(), row.end());
}

Qubit ChimeraTopology::id(std::uint32_t row, std::uint32_t col,
                          std::uint32_t side, std::uint32_t k) const {
  return ((row * cols_ + col) * 2 + side) * shore_ + k;
}

bool ChimeraTopology::has_coupler(Qubit a, Qubit b) const {
  if (a >= adj_.size()) return false;
  const auto& row = adj_[a];
  return std::binary_search(row.begin(), row.end(), b);
}

ChimeraTopology build_chimera(std::uint32_t rows, std::uint32_t cols,
                              std::uint32_t shore,
                              const std::set<Qubit>& dead) {
  return ChimeraTopology(rows, cols, shore, dead);
}

Embedding::Embedding(std::vector<std::vector<Qubit>> chains)
    : chains_(std::move(chains)) {
  for (auto& c : chains_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    qubits_.insert(qubits_.end(), c.begin(), c.end());
  }
  std::sort(qubits_.begin(), qubits_.end());
  qubits_.erase(std::unique(qubits_.begin(), qubits_.end()), qubits_.end());
}

std::size_t Embedding::local_index(Qubit q) const {
  auto it = std::lower_bound(qubits_.begin(), qubits_.end(), q);
  if (it == qubits_.end() || *it != q)
    throw InputError("qubit " + std::to_string(q) + " is not in the embedding");
  return static_cast<std::size_t>(it - qubits_.begin());
}

double Embedding::average_chain_length() const {
  if (chains_.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& c : chains_) total += c.size();
  return static_cast<double>(total) / static_cast<double>(chains_.size());
}

std::size_t Embedding::max_chain_length() const {
  std::size_t m = 0;
  for (const auto& c : chains_) m = std::max(m, c.size());
  return m;
}

namespace {

bool chain_connected(const std::vector<Qubit>& chain, const ChimeraTopology& t) {
  if (chain.empty()) return false;
  std::vector<bool> seen(chain.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < chain.size(); ++j) {
      if (!seen[j] && t.has_coupler(chain[i], chain[j])) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == chain.size();
}

bool chains_coupled(const std::vector<Qubit>& a, const std::vector<Qubit>& b,
                    const ChimeraTopology& t) {
  for (Qubit x : a)
    for (Qubit y : t.neighbors(x))
      if (std::binary_search(b.begin(), b.end(), y)) return true;
  return false;
}

}  // namespace

EmbeddingCheck check_embedding(
    const Embedding& e,
    const std::vector<std::vector<std::uint32_t>>& logical_adjacency,
    const ChimeraTopology& t) {
  EmbeddingCheck check;
  auto fail = [&](std::string msg) {
    check.valid = false;
    check.problems.push_back(std::move(msg));
  };
  if (e.num_variables() != logical_adjacency.size()) {
    fail("embedding has " + std::to_string(e.num_variables()) +
         " chains for " + std::to_string(logical_adjacency.size()) +
         " variables");
    return check;
  }
  std::vector<int> owner(t.index_range(), -1);
  for (std::size_t v = 0; v < e.num_variables(); ++v) {
    const auto& chain = e.chain(v);
    if (chain.empty()) {
      fail("chain " + std::to_string(v) + " is empty");
      continue;
    }
    for (Qubit q : chain) {
      if (!t.alive(q)) {
        fail("chain " + std::to_string(v) + " uses missing qubit " +
             std::to_string(q));
        continue;
      }
      if (owner[q] >= 0)
        fail("qubit " + std::to_string(q) + " shared by chains " +
             std::to_string(owner[q]) + " and " + std::to_string(v));
      owner[q] = static_cast<int>(v);
    }
    if (!chain_connected(chain, t))
      fail("chain " + std::to_string(v) + " is not connected");
  }
  for (std::size_t u = 0; u < logical_adjacency.size(); ++u)
    for (std::uint32_t v : logical_adjacency[u])
      if (u < v && !e.chain(u).empty() && !e.chain(v).empty() &&
          !chains_coupled(e.chain(u), e.chain(v), t))
        fail("no coupler between chains " + std::to_string(u) + " and " +
             std::to_string(v));
  return check;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rounds without a new lowest overlap before a restart is abandoned.
constexpr std::size_t kStallRounds = 16;

class ChainRouter {
 public:
  ChainRouter(const std::vector<std::vector<std::uint32_t>>& adj,
              const ChimeraTopology& t, std::uint64_t seed)
      : adj_(adj),
        topo_(t),
        rng_(seed),
        chains_(adj.size()),
        usage_(t.index_range(), 0),
        history_(t.index_range(), 0.0),
        weight_(t.index_range(), 0.0),
        total_(t.index_range(), 0.0),
        cost_(t.index_range(), 0.0),
        dist_(t.index_range(), kInf),
        parent_(t.index_range(), kNone) {}

  bool run(const EmbedOptions& opt) {
    const std::vector<std::uint32_t> order = placement_order();

    double base = 2.0;
    for (std::uint32_t v : order)
      if (!place(v, base, false)) return false;
    resolve_overlaps();

    std::vector<std::uint32_t> shuffled = order;
    std::size_t lowest = overlap(), stalled = 0;
    for (std::size_t round = 0; round < opt.rounds_per_restart; ++round) {
      const std::size_t over = overlap();
      if (over == 0) break;
      if (over < lowest) {
        lowest = over;
        stalled = 0;
      } else if (++stalled >= kStallRounds) {
        break;
      }
      for (std::size_t q = 0; q < usage_.size(); ++q)
        if (usage_[q] > 1) history_[q] += 1.0;
      base = std::min(base * 1.5, 1e12);
      // Variables sharing qubits are lifted out together so that none of
      // them is routed against a chain it is stacked on.
      std::vector<std::uint32_t> stacked;
      for (std::uint32_t v = 0; v < chains_.size(); ++v)
        if (std::any_of(chains_[v].begin(), chains_[v].end(),
                        [&](Qubit q) { return usage_[q] > 1; }))
          stacked.push_back(v);
      std::shuffle(stacked.begin(), stacked.end(), rng_);
      for (std::uint32_t v : stacked) rip_up(v);
      for (std::uint32_t v : stacked)
        if (!place_releasing(v, base)) return false;
      std::shuffle(shuffled.begin(), shuffled.end(), rng_);
      for (std::uint32_t v : shuffled) {
        rip_up(v);
        if (!place_releasing(v, base)) return false;
      }
      resolve_overlaps();
    }
    best_overlap_ = overlap();
    if (best_overlap_ != 0) return false;

    for (std::size_t round = 0; round < opt.tightening_rounds; ++round) {
      bool shrunk = false;
      for (std::uint32_t v : shuffled) {
        const std::vector<Qubit> old = chains_[v];
        rip_up(v);
        if (!place(v, 2.0, true) || chains_[v].size() > old.size()) {
          if (!chains_[v].empty()) rip_up(v);
          assign(v, old);
        } else if (chains_[v].size() < old.size()) {
          shrunk = true;
        }
      }
      if (!shrunk) break;
    }
    return true;
  }

  std::size_t overlap() const {
    std::size_t over = 0;
    for (int u : usage_)
      if (u > 1) over += static_cast<std::size_t>(u - 1);
    return over;
  }

  std::size_t qubits_used() const {
    return static_cast<std::size_t>(
        std::count_if(usage_.begin(), usage_.end(), [](int u) { return u > 0; }));
  }

  std::size_t best_overlap() const { return best_overlap_; }

  Embedding result() const { return Embedding(chains_); }

 private:
  static constexpr Qubit kNone = std::numeric_limits<Qubit>::max();

  // Breadth-first from a random highest-degree variable, visiting neighbors
  // by descending degree, so every variable after the first of its
  // component is placed next to an already placed neighbor.
  std::vector<std::uint32_t> placement_order() {
    const std::size_t n = adj_.size();
    std::vector<std::uint32_t> by_degree(n);
    std::iota(by_degree.begin(), by_degree.end(), 0U);
    std::shuffle(by_degree.begin(), by_degree.end(), rng_);
    std::stable_sort(by_degree.begin(), by_degree.end(), [&](auto a, auto b) {
      return adj_[a].size() > adj_[b].size();
    });
    std::vector<std::uint32_t> order;
    std::vector<bool> seen(n, false);
    for (std::uint32_t start : by_degree) {
      if (seen[start]) continue;
      seen[start] = true;
      std::size_t head = order.size();
      order.push_back(start);
      while (head < order.size()) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t u : adj_[order[head++]])
          if (!seen[u]) {
            seen[u] = true;
            next.push_back(u);
          }
        std::shuffle(next.begin(), next.end(), rng_);
        std::stable_sort(next.begin(), next.end(), [&](auto a, auto b) {
          return adj_[a].size() > adj_[b].size();
        });
        order.insert(order.end(), next.begin(), next.end());
      }
    }
    return order;
  }

  void rip_up(std::uint32_t v) {
    for (Qubit q : chains_[v]) --usage_[q];
    chains_[v].clear();
  }

  void assign(std::uint32_t v, std::vector<Qubit> chain) {
    for (Qubit q : chain) ++usage_[q];
    chains_[v] = std::move(chain);
  }

  void fill_weights(double base, bool strict) {
    for (Qubit q = 0; q < weight_.size(); ++q) {
      if (!topo_.alive(q))
        weight_[q] = kInf;
      else if (usage_[q] == 0)
        weight_[q] = strict ? 1.0 : 1.0 + history_[q];
      else
        weight_[q] = strict ? kInf : (1.0 + history_[q]) * std::pow(base, usage_[q]);
    }
  }

  // Node-weighted multi-source Dijkstra from `sources`; dist_ of a node
  // includes its own weight, sources sit at 0.
  void shortest_paths(const std::vector<Qubit>& sources) {
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(parent_.begin(), parent_.end(), kNone);
    using Item = std::pair<double, Qubit>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (Qubit s : sources) {
      dist_[s] = 0.0;
      heap.emplace(0.0, s);
    }
    while (!heap.empty()) {
      const auto [d, q] = heap.top();
      heap.pop();
      if (d > dist_[q]) continue;
      for (Qubit nb : topo_.neighbors(q)) {
        const double w = weight_[nb];
        if (w == kInf) continue;
        const double nd = d + w;
        if (nd < dist_[nb]) {
          dist_[nb] = nd;
          parent_[nb] = q;
          heap.emplace(nd, nb);
        }
      }
    }
  }

  // True if v's chain minus q is still connected and still coupled to the
  // chain of every placed neighbor.
  bool can_drop(std::uint32_t v, Qubit q) const {
    std::vector<Qubit> rest;
    for (Qubit x : chains_[v])
      if (x != q) rest.push_back(x);
    if (rest.empty() || !chain_connected(rest, topo_)) return false;
    for (std::uint32_t u : adj_[v])
      if (!chains_[u].empty() && !chains_coupled(rest, chains_[u], topo_)) return false;
    return true;
  }

  void drop(std::uint32_t v, Qubit q) {
    auto& c = chains_[v];
    c.erase(std::lower_bound(c.begin(), c.end(), q));
    --usage_[q];
  }

  // Removes qubits that v's chain does not need, shared ones first.
  void trim(std::uint32_t v) {
    for (bool shared : {true, false}) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (Qubit q : chains_[v]) {
          if ((usage_[q] > 1) != shared) continue;
          if (can_drop(v, q)) {
            drop(v, q);
            changed = true;
            break;
          }
        }
      }
    }
  }

  // Hands each shared qubit to a single owner where the others can spare it.
  void resolve_overlaps() {
    std::vector<std::vector<std::uint32_t>> owners(usage_.size());
    for (std::uint32_t v = 0; v < chains_.size(); ++v)
      for (Qubit q : chains_[v]) owners[q].push_back(v);
    for (Qubit q = 0; q < owners.size(); ++q) {
      auto& own = owners[q];
      if (own.size() < 2) continue;
      std::shuffle(own.begin(), own.end(), rng_);
      for (std::uint32_t v : own) {
        if (usage_[q] < 2) break;
        if (can_drop(v, q)) drop(v, q);
      }
    }
  }

  bool enclosed(std::uint32_t u) const {
    for (Qubit q : chains_[u])
      for (Qubit nb : topo_.neighbors(q))
        if (usage_[nb] == 0 && topo_.alive(nb)) return false;
    return true;
  }

  // Neighbors with no free qubit next to their chain are lifted out and
  // re-placed after v, so v is not forced to stack onto them.
  bool place_releasing(std::uint32_t v, double base) {
    std::vector<std::uint32_t> lifted;
    for (std::uint32_t u : adj_[v])
      if (!chains_[u].empty() && enclosed(u)) lifted.push_back(u);
    for (std::uint32_t u : lifted) rip_up(u);
    if (!place(v, base, false)) return false;
    for (std::uint32_t u : lifted)
      if (!place(u, base, false)) return false;
    return true;
  }

  bool place(std::uint32_t v, double base, bool strict) {
    fill_weights(base, strict);
    const auto& k = kernels::active();
    std::uniform_real_distribution<double> jitter(0.0, 0.5);

    std::vector<std::uint32_t> placed;
    for (std::uint32_t u : adj_[v])
      if (!chains_[u].empty()) placed.push_back(u);

    // total[q] = weight(q) + sum over placed neighbors of the path cost
    // from q to that neighbor's chain, q itself excluded.
    for (std::size_t q = 0; q < total_.size(); ++q)
      total_[q] = weight_[q] + jitter(rng_);
    if (placed.empty()) {
      // Seed unconnected variables near the middle of the grid.
      const double mid_r = (topo_.rows() - 1) / 2.0, mid_c = (topo_.cols() - 1) / 2.0;
      for (std::size_t q = 0; q < total_.size(); ++q) {
        const std::size_t cell = q / (2 * topo_.shore());
        const double dr = static_cast<double>(cell / topo_.cols()) - mid_r;
        const double dc = static_cast<double>(cell % topo_.cols()) - mid_c;
        total_[q] += 0.25 * (std::abs(dr) + std::abs(dc));
      }
    }
    std::vector<std::vector<Qubit>> parents;
    parents.reserve(placed.size());
    for (std::uint32_t u : placed) {
      shortest_paths(chains_[u]);
      for (std::size_t q = 0; q < cost_.size(); ++q) {
        if (dist_[q] == kInf)
          cost_[q] = kInf;
        else
          cost_[q] = dist_[q] == 0.0 ? 0.0 : dist_[q] - weight_[q];
      }
      k.axpy(1.0, cost_.data(), total_.data(), total_.size());
      parents.push_back(parent_);
    }
    const std::size_t root = k.argmin(total_.data(), total_.size());
    if (total_[root] == kInf) return false;

    std::vector<Qubit> chain{static_cast<Qubit>(root)};
    for (std::size_t i = 0; i < placed.size(); ++i) {
      const auto& target = chains_[placed[i]];
      Qubit q = static_cast<Qubit>(root);
      while (!std::binary_search(target.begin(), target.end(), q)) {
        chain.push_back(q);
        q = parents[i][q];
        if (q == kNone) return false;
      }
    }
    std::sort(chain.begin(), chain.end());
    chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
    assign(v, std::move(chain));
    if (!strict) trim(v);
    return true;
  }

  const std::vector<std::vector<std::uint32_t>>& adj_;
  const ChimeraTopology& topo_;
  std::mt19937_64 rng_;
  std::vector<std::vector<Qubit>> chains_;
  std::vector<int> usage_;
  std::vector<double> history_;  // accumulated overuse, per qubit
  std::vector<double> weight_, total_, cost_, dist_;
  std::vector<Qubit> parent_;
  std::size_t best_overlap_ = std::numeric_limits<std::size_t>::max();
};

}  // namespace

Embedding find_embedding(const Qubo& q, const ChimeraTopology& t,
                         const EmbedOptions& options) {
  const auto adj = q.adjacency();
  if (adj.empty()) return Embedding{};
  std::size_t best_overlap = std::numeric_limits<std::size_t>::max();
  std::size_t best_qubits = 0;
  for (std::size_t r = 0; r < options.max_restarts; ++r) {
    ChainRouter router(adj, t, options.seed + r);
    if (router.run(options)) {
      Embedding e = router.result();
      if (check_embedding(e, adj, t).valid) return e;
    }
    if (router.best_overlap() < best_overlap) {
      best_overlap = router.best_overlap();
      best_qubits = router.qubits_used();
    }
  }
  throw EmbeddingError("no embedding of " + std::to_string(adj.size()) +
                           " variables found in " +
                           std::to_string(options.max_restarts) +
                           " restarts (best overlap " +
                           (best_overlap == std::numeric_limits<std::size_t>::max()
                                ? std::string("n/a")
                                : std::to_string(best_overlap)) +
                           ")",
                       best_overlap, best_qubits);
}

double PhysicalModel::unscaled_energy(std::span<const std::int8_t> spins) const {
  return ising_energy(ising, spins) / scale_factor;
}

PhysicalModel embed_qubo(const Qubo& q, const Embedding& e,
                         const ChimeraTopology& t, std::optional<double> phi) {
  const auto adj = q.adjacency();
  const EmbeddingCheck check = check_embedding(e, adj, t);
  if (!check.valid)
    throw InputError("invalid embedding: " + check.problems.front());

  double penalty = 0.0;
  if (phi) {
    if (!(*phi > 0.0)) throw InputError("chain penalty must be > 0");
    penalty = *phi;
  } else {
    // Breaking one chain gains at most half of its variable's absolute row
    // sum, so any phi above that keeps every optimum chain-consistent.
    std::vector<double> row(q.num_vars(), 0.0);
    for (const auto& [key, value] : q.terms()) {
      row[key.first] += std::abs(value);
      if (key.second != key.first) row[key.second] += std::abs(value);
    }
    const double row_max = *std::max_element(row.begin(), row.end());
    const BitVector ones(q.num_vars(), 1);
    penalty = std::abs(evaluate_qubo(q, ones));
    if (penalty <= 0.5 * row_max) penalty = row_max > 0.0 ? row_max : 1.0;
  }

  const Qubo minq = q.as_minimization();
  PhysicalModel pm;
  pm.embedding = e;
  pm.chain_penalty = penalty;
  pm.logical_negated = q.sense() == Sense::maximize;
  Qubo pq(e.num_physical(), Sense::minimize);
  pq.set_offset(minq.offset());
  auto local = [&](Qubit qb) { return static_cast<std::uint32_t>(e.local_index(qb)); };

  for (std::uint32_t v = 0; v < e.num_variables(); ++v) {
    const auto& chain = e.chain(v);
    const double d = minq.get(v, v);
    const auto len = static_cast<double>(chain.size());
    if (std::nearbyint(d) == d && std::abs(d) < 9e15) {
      const auto total = static_cast<long long>(d);
      const auto count = static_cast<long long>(chain.size());
      long long share = total / count;
      long long rem = total % count;  // same sign as total
      for (std::size_t i = 0; i < chain.size(); ++i) {
        long long part = share;
        if (rem > 0 && static_cast<long long>(i) < rem) part += 1;
        if (rem < 0 && static_cast<long long>(i) < -rem) part -= 1;
        pq.add(local(chain[i]), local(chain[i]), static_cast<double>(part));
      }
    } else {
      for (Qubit qb : chain) pq.add(local(qb), local(qb), d / len);
    }
  }

  for (const auto& [key, value] : minq.terms()) {
    const auto [u, v] = key;
    if (u == v) continue;
    std::pair<Qubit, Qubit> best{std::numeric_limits<Qubit>::max(),
                                 std::numeric_limits<Qubit>::max()};
    const auto& cv = e.chain(v);
    for (Qubit a : e.chain(u))
      for (Qubit b : t.neighbors(a))
        if (std::binary_search(cv.begin(), cv.end(), b))
          best = std::min(best, std::pair<Qubit, Qubit>(std::minmax(a, b)));
    pq.add(local(best.first), local(best.second), value);
  }

  for (const auto& chain : e.chains())
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (std::size_t j = i + 1; j < chain.size(); ++j)
        if (t.has_coupler(chain[i], chain[j])) {
          const auto a = local(chain[i]);
          const auto b = local(chain[j]);
          pq.add(a, a, penalty);
          pq.add(b, b, penalty);
          pq.add(a, b, -2.0 * penalty);
        }

  IsingModel ising = qubo_to_ising(pq);
  if (ising.max_abs_h() == 0.0 && ising.max_abs_J() == 0.0) {
    pm.ising = std::move(ising);
    pm.scale_factor = 1.0;
  } else {
    Renormalized r = renormalize(ising);
    pm.ising = std::move(r.model);
    pm.scale_factor = r.scale_factor;
  }
  pm.qubo = std::move(pq);
  return pm;
}

Renormalized renormalize(const IsingModel& m) {
  const double mh = m.max_abs_h();
  const double mj = m.max_abs_J();
  if (mh == 0.0 && mj == 0.0)
    throw InputError("renormalize: model has no nonzero coefficient");
  double s = kInf;
  if (mh > 0.0) s = std::min(s, kMaxAbsField / mh);
  if (mj > 0.0) s = std::min(s, kMaxAbsCoupling / mj);

  Renormalized out;
  out.scale_factor = s;
  out.model = m;
  for (double& v : out.model.h) v *= s;
  for (auto& [key, v] : out.model.J) v *= s;
  out.model.offset *= s;
  return out;
}

Unembedded unembed(std::span<const std::uint8_t> sample, const Embedding& e,
                   RepairPolicy policy, const Qubo* logical) {
  if (sample.size() != e.num_physical())
    throw InputError("unembed: sample has " + std::to_string(sample.size()) +
                     " qubits, embedding uses " +
                     std::to_string(e.num_physical()));
  if (logical != nullptr && logical->num_vars() != e.num_variables())
    throw InputError("unembed: logical model size does not match embedding");

  Unembedded out;
  out.logical.assign(e.num_variables(), 0);
  std::vector<std::size_t> ties;
  for (std::size_t v = 0; v < e.num_variables(); ++v) {
    const auto& chain = e.chain(v);
    std::size_t ones = 0;
    for (Qubit q : chain) ones += sample[e.local_index(q)] ? 1 : 0;
    const std::size_t len = chain.size();
    if (ones != 0 && ones != len) {
      ++out.chain_break_count;
      out.broken_variables.push_back(v);
    }
    if (2 * ones > len) {
      out.logical[v] = 1;
    } else if (2 * ones < len) {
      out.logical[v] = 0;
    } else {
      out.logical[v] = sample[e.local_index(chain.front())];
      if (policy == RepairPolicy::majority && logical != nullptr)
        ties.push_back(v);
    }
  }

  for (std::size_t v : ties) {
    out.logical[v] = 0;
    const double e0 = evaluate_qubo(*logical, out.logical);
    out.logical[v] = 1;
    const double e1 = evaluate_qubo(*logical, out.logical);
    const bool one_better = logical->sense() == Sense::maximize ? e1 > e0 : e1 < e0;
    out.logical[v] = one_better ? 1 : 0;
  }
  return out;
}

}  // namespace hardmatch
