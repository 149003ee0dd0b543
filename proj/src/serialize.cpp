#include "hardmatch/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hardmatch/errors.hpp"

namespace hardmatch::io {

namespace {

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key))
    throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T optional_field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

std::string_view solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::sa: return "sa";
    case SolverKind::sqa: return "sqa";
    case SolverKind::random: return "random";
    case SolverKind::exhaustive: return "exhaustive";
  }
  return "sa";
}

SolverKind parse_solver(const std::string& s) {
  if (s == "sa") return SolverKind::sa;
  if (s == "sqa") return SolverKind::sqa;
  if (s == "random") return SolverKind::random;
  if (s == "exhaustive") return SolverKind::exhaustive;
  throw InputError("unknown solver \"" + s + "\"");
}

std::string_view schedule_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::geometric: return "geometric";
    case ScheduleKind::logarithmic: return "log";
    case ScheduleKind::linear: return "linear";
  }
  return "geometric";
}

ScheduleKind parse_schedule(const std::string& s) {
  if (s == "geometric") return ScheduleKind::geometric;
  if (s == "log" || s == "logarithmic") return ScheduleKind::logarithmic;
  if (s == "linear") return ScheduleKind::linear;
  throw InputError("unknown schedule \"" + s + "\"");
}

std::string_view order_name(EdgeOrder o) {
  return o == EdgeOrder::layered ? "layered" : "sparse_first";
}

EdgeOrder parse_order(const std::string& s) {
  if (s == "layered") return EdgeOrder::layered;
  if (s == "sparse_first" || s == "sparse-first") return EdgeOrder::sparse_first;
  throw InputError("unknown edge order \"" + s + "\"");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json graph_to_json(const Graph& g) {
  Json j;
  j["num_vertices"] = g.num_vertices();
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j;
}

Json instance_to_json(const GnInstance& inst) {
  Json j;
  j["n"] = inst.n;
  j["num_vertices"] = inst.graph.num_vertices();
  Json edges = Json::array();
  for (const Edge& e : inst.graph.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["canonical_matching"] = inst.canonical_matching;
  j["edge_order"] = order_name(inst.order);
  return j;
}

Graph graph_from_json(const Json& j) {
  const auto n = required<std::size_t>(j, "num_vertices");
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw InputError("graph document needs an \"edges\" array");
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw InputError("each edge must be a [u, v] pair");
    edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>()});
  }
  return Graph(n, std::move(edges));
}

Json qubo_to_json(const Qubo& q) {
  Json j;
  j["num_vars"] = q.num_vars();
  j["sense"] = q.sense() == Sense::maximize ? "max" : "min";
  j["offset"] = q.offset();
  Json terms = Json::array();
  for (const auto& [key, value] : q.terms())
    terms.push_back({key.first, key.second, value});
  j["terms"] = std::move(terms);
  return j;
}

Qubo qubo_from_json(const Json& j) {
  const auto n = required<std::size_t>(j, "num_vars");
  const auto sense = optional_field<std::string>(j, "sense", "min");
  if (sense != "min" && sense != "max")
    throw InputError("QUBO sense must be \"min\" or \"max\"");
  Qubo q(n, sense == "max" ? Sense::maximize : Sense::minimize);
  q.set_offset(optional_field<double>(j, "offset", 0.0));
  for (const auto& t : j.value("terms", Json::array())) {
    if (!t.is_array() || t.size() != 3)
      throw InputError("each QUBO term must be [i, j, value]");
    const auto a = t[0].get<std::uint32_t>();
    const auto b = t[1].get<std::uint32_t>();
    if (a > b) throw InputError("QUBO terms must satisfy i <= j");
    q.add(a, b, t[2].get<double>());
  }
  return q;
}

Json ising_to_json(const IsingModel& m) {
  Json j;
  j["num_spins"] = m.num_spins();
  j["offset"] = m.offset;
  j["negated"] = m.negated;
  j["h"] = m.h;
  Json couplings = Json::array();
  for (const auto& [key, value] : m.J)
    couplings.push_back({key.first, key.second, value});
  j["J"] = std::move(couplings);
  return j;
}

IsingModel ising_from_json(const Json& j) {
  IsingModel m(required<std::size_t>(j, "num_spins"));
  m.offset = optional_field<double>(j, "offset", 0.0);
  m.negated = optional_field<bool>(j, "negated", false);
  if (j.contains("h")) {
    const auto h = j.at("h").get<std::vector<double>>();
    if (h.size() != m.num_spins())
      throw InputError("Ising \"h\" length does not match num_spins");
    m.h = h;
  }
  for (const auto& t : j.value("J", Json::array())) {
    if (!t.is_array() || t.size() != 3)
      throw InputError("each Ising coupling must be [i, j, value]");
    m.add_coupling(t[0].get<std::uint32_t>(), t[1].get<std::uint32_t>(),
                   t[2].get<double>());
  }
  return m;
}

Json embedding_to_json(const Embedding& e, const ChimeraTopology& t) {
  Json topo;
  topo["M"] = t.rows();
  topo["N"] = t.cols();
  topo["L"] = t.shore();
  topo["dead"] = Json(std::vector<Qubit>(t.dead_qubits().begin(),
                                         t.dead_qubits().end()));
  Json chains = Json::object();
  for (std::size_t v = 0; v < e.num_variables(); ++v)
    chains[std::to_string(v)] = e.chain(v);
  Json j;
  j["topology"] = std::move(topo);
  j["chains"] = std::move(chains);
  return j;
}

LoadedEmbedding embedding_from_json(const Json& j) {
  if (!j.contains("topology") || !j.contains("chains"))
    throw InputError("embedding document needs \"topology\" and \"chains\"");
  const Json& topo = j.at("topology");
  const auto dead = optional_field<std::vector<Qubit>>(topo, "dead", {});
  ChimeraTopology t(required<std::uint32_t>(topo, "M"),
                    required<std::uint32_t>(topo, "N"),
                    required<std::uint32_t>(topo, "L"),
                    std::set<Qubit>(dead.begin(), dead.end()));
  const Json& chains = j.at("chains");
  std::vector<std::vector<Qubit>> out(chains.size());
  for (const auto& [key, value] : chains.items()) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
    if (ec != std::errc{} || ptr != key.data() + key.size() || v >= out.size())
      throw InputError("embedding chain keys must be 0..n-1, got \"" + key + "\"");
    out[v] = value.get<std::vector<Qubit>>();
  }
  return {std::move(t), Embedding(std::move(out))};
}

Json physical_to_json(const PhysicalModel& pm, const ChimeraTopology& t) {
  Json j;
  j["embedding"] = embedding_to_json(pm.embedding, t);
  j["qubits"] = pm.embedding.physical_qubits();
  j["chain_penalty"] = pm.chain_penalty;
  j["scale_factor"] = pm.scale_factor;
  j["logical_negated"] = pm.logical_negated;
  j["qubo"] = qubo_to_json(pm.qubo);
  j["ising"] = ising_to_json(pm.ising);
  return j;
}

Json config_to_json(const CampaignConfig& cfg) {
  Json j;
  if (cfg.n) j["n"] = *cfg.n;
  if (!cfg.graph_file.empty()) j["graph"] = cfg.graph_file;
  j["edge_order"] = order_name(cfg.edge_order);
  j["lambda"] = cfg.lambda ? Json(*cfg.lambda) : Json("auto");
  Json emb;
  switch (cfg.embedding.mode) {
    case EmbeddingMode::none: emb["mode"] = "none"; break;
    case EmbeddingMode::chimera: emb["mode"] = "chimera"; break;
    case EmbeddingMode::file: emb["mode"] = "file"; break;
  }
  if (cfg.embedding.mode == EmbeddingMode::chimera) {
    emb["M"] = cfg.embedding.rows;
    emb["N"] = cfg.embedding.cols;
    emb["L"] = cfg.embedding.shore;
    emb["dead"] = Json(std::vector<Qubit>(cfg.embedding.dead.begin(),
                                          cfg.embedding.dead.end()));
    emb["seed"] = cfg.embedding.options.seed;
    emb["restarts"] = cfg.embedding.options.max_restarts;
  }
  if (cfg.embedding.mode == EmbeddingMode::file) emb["file"] = cfg.embedding.file;
  j["embedding"] = std::move(emb);
  j["phi"] = cfg.phi ? Json(*cfg.phi) : Json("auto");

  const SolverSpec& s = cfg.solver;
  j["solver"] = solver_name(s.kind);
  if (s.kind == SolverKind::sa) {
    j["schedule"] = schedule_name(s.schedule.kind);
    j["sweeps"] = s.schedule.sweeps;
    j["T0"] = s.schedule.initial_temperature;
    j["T_final"] = s.schedule.final_temperature;
  } else if (s.kind == SolverKind::sqa) {
    j["sweeps"] = s.sqa.sweeps;
    j["P"] = s.sqa.trotter_slices;
    j["T"] = s.sqa.temperature;
    j["gamma0"] = s.sqa.gamma_initial;
    j["gamma_final"] = s.sqa.gamma_final;
    j["global_moves"] = s.sqa.global_moves;
  }
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  j["repair"] = cfg.repair == RepairPolicy::majority ? "majority" : "strict";
  j["bins"] = cfg.bins;
  j["record_timing"] = cfg.record_timing;
  return j;
}

CampaignConfig config_from_json(const Json& j) {
  CampaignConfig cfg;
  if (j.contains("n")) cfg.n = required<std::uint32_t>(j, "n");
  cfg.graph_file = optional_field<std::string>(j, "graph", "");
  cfg.edge_order = parse_order(optional_field<std::string>(j, "edge_order", "layered"));
  if (j.contains("lambda") && !j.at("lambda").is_string())
    cfg.lambda = required<double>(j, "lambda");
  if (j.contains("phi") && !j.at("phi").is_string())
    cfg.phi = required<double>(j, "phi");

  if (j.contains("embedding")) {
    const Json& e = j.at("embedding");
    const auto mode = optional_field<std::string>(e, "mode", "none");
    if (mode == "none") {
      cfg.embedding.mode = EmbeddingMode::none;
    } else if (mode == "chimera") {
      cfg.embedding.mode = EmbeddingMode::chimera;
      cfg.embedding.rows = optional_field<std::uint32_t>(e, "M", 12);
      cfg.embedding.cols = optional_field<std::uint32_t>(e, "N", 12);
      cfg.embedding.shore = optional_field<std::uint32_t>(e, "L", 4);
      const auto dead = optional_field<std::vector<Qubit>>(e, "dead", {});
      cfg.embedding.dead = std::set<Qubit>(dead.begin(), dead.end());
      cfg.embedding.options.seed = optional_field<std::uint64_t>(e, "seed", 1);
      cfg.embedding.options.max_restarts =
          optional_field<std::size_t>(e, "restarts", cfg.embedding.options.max_restarts);
    } else if (mode == "file") {
      cfg.embedding.mode = EmbeddingMode::file;
      cfg.embedding.file = required<std::string>(e, "file");
    } else {
      throw InputError("unknown embedding mode \"" + mode + "\"");
    }
  }

  SolverSpec& s = cfg.solver;
  s.kind = parse_solver(optional_field<std::string>(j, "solver", "sa"));
  const auto sweeps = optional_field<std::size_t>(j, "sweeps", 1000);
  s.schedule.kind = parse_schedule(optional_field<std::string>(j, "schedule", "geometric"));
  s.schedule.sweeps = sweeps;
  s.schedule.initial_temperature = optional_field<double>(j, "T0", 5.0);
  s.schedule.final_temperature = optional_field<double>(j, "T_final", 0.05);
  if (s.schedule.kind == ScheduleKind::logarithmic && !j.contains("T_final"))
    s.schedule = Schedule::logarithmic(
        s.schedule.initial_temperature * std::log(2.0), sweeps);
  s.sqa.sweeps = sweeps;
  s.sqa.trotter_slices = optional_field<std::size_t>(j, "P", s.sqa.trotter_slices);
  s.sqa.temperature = optional_field<double>(j, "T", s.sqa.temperature);
  s.sqa.gamma_initial = optional_field<double>(j, "gamma0", s.sqa.gamma_initial);
  s.sqa.gamma_final = optional_field<double>(j, "gamma_final", s.sqa.gamma_final);
  s.sqa.global_moves = optional_field<bool>(j, "global_moves", s.sqa.global_moves);

  cfg.runs = optional_field<std::size_t>(j, "runs", cfg.runs);
  cfg.seed = optional_field<std::uint64_t>(j, "seed", cfg.seed);
  const auto repair = optional_field<std::string>(j, "repair", "majority");
  if (repair == "majority")
    cfg.repair = RepairPolicy::majority;
  else if (repair == "strict")
    cfg.repair = RepairPolicy::strict;
  else
    throw InputError("unknown repair policy \"" + repair + "\"");
  cfg.bins = optional_field<std::size_t>(j, "bins", cfg.bins);
  cfg.output_dir = optional_field<std::string>(j, "output", "");
  cfg.record_timing = optional_field<bool>(j, "record_timing", false);
  cfg.workers = optional_field<unsigned>(j, "workers", 0U);
  return cfg;
}

Json stats_to_json(const SummaryStats& s) {
  Json j;
  j["count"] = s.count;
  j["optimum"] = s.optimum ? Json(*s.optimum) : Json(nullptr);
  j["best"] = s.best;
  j["worst"] = s.worst;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["stdev"] = s.stdev;
  j["optimum_hit_count"] = s.optimum_hit_count;
  j["valid_matching_count"] = s.valid_matching_count;
  j["chain_break_rate"] = s.chain_break_rate;
  j["gap_percent"] = s.gap_percent ? Json(*s.gap_percent) : Json(nullptr);
  return j;
}

Json sample_to_json(const Sample& s) {
  Json j;
  j["run_index"] = s.run_index;
  j["seed"] = s.seed;
  j["energy"] = s.energy;
  std::string bits;
  for (auto b : s.assignment) bits.push_back(b ? '1' : '0');
  j["assignment"] = bits;
  j["wall_time_us"] = s.wall_time.count();
  return j;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace hardmatch::io
