#include "hardmatch/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "hardmatch/errors.hpp"
#include "hardmatch/serialize.hpp"

namespace hardmatch {

namespace fs = std::filesystem;

void CampaignConfig::validate() const {
  if (runs == 0) throw InputError("campaign needs at least one run");
  if (!n && graph_file.empty())
    throw InputError("campaign needs an instance: n or a graph file");
  if (!n && !fs::exists(graph_file))
    throw IoError("graph file not found: " + graph_file);
  if (embedding.mode == EmbeddingMode::file && !fs::exists(embedding.file))
    throw IoError("embedding file not found: " + embedding.file);
  if (lambda && !(*lambda > 0.0)) throw InputError("lambda must be > 0");
  if (phi && !(*phi > 0.0)) throw InputError("phi must be > 0");
  if (bins == 0) throw InputError("histogram needs at least one bin");
  if (solver.kind == SolverKind::sa) solver.schedule.validate();
  if (solver.kind == SolverKind::sqa) solver.sqa.validate();
}

std::string_view to_string(SampleClass c) {
  switch (c) {
    case SampleClass::optimal: return "optimal";
    case SampleClass::valid_suboptimal: return "valid_suboptimal";
    case SampleClass::invalid_matching: return "invalid_matching";
    case SampleClass::chain_broken: return "chain_broken";
  }
  return "unknown";
}

std::vector<double> SampleSet::raw_energies() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.energy_raw);
  return out;
}

std::vector<double> SampleSet::repaired_energies() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.energy_repaired);
  return out;
}

namespace {

bool hits(double energy, double optimum) {
  return std::abs(energy - optimum) <= 1e-6 * std::max(1.0, std::abs(optimum));
}

}  // namespace

SummaryStats summarize(std::span<const double> energies,
                       std::optional<double> known_optimum) {
  if (energies.empty()) throw InputError("summarize: empty sample set");
  SummaryStats s;
  s.count = energies.size();
  s.optimum = known_optimum;
  std::vector<double> sorted(energies.begin(), energies.end());
  std::sort(sorted.begin(), sorted.end());
  s.best = sorted.front();
  s.worst = sorted.back();
  s.median = sorted[(sorted.size() - 1) / 2];

  double sum = 0.0;
  for (double e : energies) sum += e;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double e : energies) sq += (e - s.mean) * (e - s.mean);
  s.stdev = std::sqrt(sq / static_cast<double>(s.count));

  if (known_optimum) {
    for (double e : energies)
      if (hits(e, *known_optimum)) ++s.optimum_hit_count;
    if (*known_optimum != 0.0)
      s.gap_percent = std::abs(s.best - *known_optimum) /
                      std::abs(*known_optimum) * 100.0;
  }
  return s;
}

SummaryStats summarize(const SampleSet& set, Variant variant,
                       std::optional<double> known_optimum) {
  const auto energies =
      variant == Variant::raw ? set.raw_energies() : set.repaired_energies();
  SummaryStats s = summarize(energies, known_optimum);
  std::size_t broken = 0;
  for (const auto& r : set.samples) {
    if (r.chain_breaks > 0) ++broken;
    const bool counted = variant == Variant::raw
                             ? r.valid_matching && r.chain_breaks == 0
                             : r.valid_matching;
    if (counted) ++s.valid_matching_count;
  }
  s.chain_break_rate =
      static_cast<double>(broken) / static_cast<double>(set.samples.size());
  return s;
}

Histogram histogram(std::span<const double> energies, std::size_t bins,
                    Variant variant) {
  if (energies.empty()) throw InputError("histogram: empty sample set");
  if (bins == 0) throw InputError("histogram: needs at least one bin");
  auto [lo_it, hi_it] = std::minmax_element(energies.begin(), energies.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i)
    edges[i] = lo + width * static_cast<double>(i);
  edges[bins] = hi;

  Histogram h;
  h.edges = std::move(edges);
  h.counts.assign(bins, 0);
  h.variant = variant;
  for (double e : energies) {
    auto idx = static_cast<std::size_t>((e - lo) / width);
    ++h.counts[std::min(idx, bins - 1)];
  }
  return h;
}

Histogram histogram(std::span<const double> energies, std::vector<double> edges,
                    Variant variant) {
  if (energies.empty()) throw InputError("histogram: empty sample set");
  if (edges.size() < 2) throw InputError("histogram: needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]))
      throw InputError("histogram: edges must be strictly increasing");
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  h.variant = variant;
  for (double e : energies) {
    auto it = std::upper_bound(edges.begin(), edges.end(), e);
    std::size_t idx = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    ++h.counts[std::min(idx, h.counts.size() - 1)];
  }
  h.edges = std::move(edges);
  return h;
}

namespace {

struct Pipeline {
  Graph graph;
  std::optional<GnInstance> instance;
  Qubo logical;  // maximization, as built from the graph
  Qubo minimized;
  std::optional<double> optimum;
  std::optional<ChimeraTopology> topology;
  std::optional<PhysicalModel> physical;
  IsingModel solve_model;
  std::string model_id;
  std::optional<std::string> embedding_id;
};

Pipeline prepare(const CampaignConfig& cfg) {
  Pipeline p;
  if (cfg.n) {
    p.instance = generate_gn(*cfg.n, cfg.edge_order);
    p.graph = p.instance->graph;
    p.model_id = "G" + std::to_string(*cfg.n);
  } else {
    p.graph = io::graph_from_json(io::read_json(cfg.graph_file));
    p.model_id = fs::path(cfg.graph_file).filename().string();
  }
  p.logical = matching_to_qubo(p.graph, cfg.lambda);
  p.minimized = p.logical.as_minimization();
  const double lambda = cfg.lambda.value_or(static_cast<double>(p.graph.num_edges()));
  p.model_id += "/lambda=" + io::format_number(lambda);

  // G_n has a perfect matching, which is the unique optimum once lambda > 1/2.
  if (p.instance && lambda > 0.5) {
    const BitVector canon =
        bits_from_matching(Matching(p.instance->canonical_matching),
                           p.graph.num_edges());
    p.optimum = evaluate_qubo(p.minimized, canon);
  } else if (p.logical.num_vars() <= kMaxBruteForceVars) {
    p.optimum = brute_force_qubo(p.minimized).optimum;
  }

  switch (cfg.embedding.mode) {
    case EmbeddingMode::none: {
      const IsingModel ising = qubo_to_ising(p.logical);
      if (ising.max_abs_h() == 0.0 && ising.max_abs_J() == 0.0)
        p.solve_model = ising;
      else
        p.solve_model = renormalize(ising).model;
      break;
    }
    case EmbeddingMode::chimera: {
      p.topology = build_chimera(cfg.embedding.rows, cfg.embedding.cols,
                                 cfg.embedding.shore, cfg.embedding.dead);
      Embedding e = find_embedding(p.logical, *p.topology, cfg.embedding.options);
      p.physical = embed_qubo(p.logical, e, *p.topology, cfg.phi);
      p.embedding_id = "chimera(" + std::to_string(cfg.embedding.rows) + "," +
                       std::to_string(cfg.embedding.cols) + "," +
                       std::to_string(cfg.embedding.shore) +
                       ")/seed=" + std::to_string(cfg.embedding.options.seed);
      break;
    }
    case EmbeddingMode::file: {
      io::LoadedEmbedding loaded = io::embedding_from_json(io::read_json(cfg.embedding.file));
      p.topology = std::move(loaded.topology);
      p.physical = embed_qubo(p.logical, loaded.embedding, *p.topology, cfg.phi);
      p.embedding_id = fs::path(cfg.embedding.file).filename().string();
      break;
    }
  }
  if (p.physical) p.solve_model = p.physical->ising;
  return p;
}

RunRecord run_one(const CampaignConfig& cfg, const Pipeline& p,
                  std::size_t run_index, const Sample* exhaustive_sample) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  RunRecord rec;
  rec.run_index = run_index;
  rec.seed = derive_seed(cfg.seed, run_index);

  Sample sample;
  switch (cfg.solver.kind) {
    case SolverKind::sa:
      sample = simulated_annealing(p.solve_model, cfg.solver.schedule, rec.seed);
      break;
    case SolverKind::sqa:
      sample = simulated_quantum_annealing(p.solve_model, cfg.solver.sqa, rec.seed);
      break;
    case SolverKind::random:
      sample = random_baseline(p.solve_model, 1, rec.seed).front();
      break;
    case SolverKind::exhaustive:
      sample = *exhaustive_sample;
      break;
  }
  rec.raw = sample.assignment;

  if (p.physical) {
    rec.energy_raw = evaluate_qubo(p.physical->qubo, rec.raw);
    Unembedded un = unembed(rec.raw, p.physical->embedding, cfg.repair, &p.logical);
    rec.logical = std::move(un.logical);
    rec.chain_breaks = un.chain_break_count;
  } else {
    rec.energy_raw = evaluate_qubo(p.minimized, rec.raw);
    rec.logical = rec.raw;
  }
  rec.energy_repaired = evaluate_qubo(p.minimized, rec.logical);
  rec.valid_matching =
      validate_matching(p.graph, matching_from_bits(rec.logical)).valid;

  if (rec.chain_breaks > 0)
    rec.sample_class = SampleClass::chain_broken;
  else if (!rec.valid_matching)
    rec.sample_class = SampleClass::invalid_matching;
  else if (p.optimum && hits(rec.energy_repaired, *p.optimum))
    rec.sample_class = SampleClass::optimal;
  else
    rec.sample_class = SampleClass::valid_suboptimal;

  if (cfg.record_timing)
    rec.wall_time_us = std::chrono::duration_cast<std::chrono::microseconds>(
                           Clock::now() - started)
                           .count();
  return rec;
}

std::string samples_csv(const SampleSet& set) {
  std::ostringstream out;
  out << "run_index,seed,energy_raw,energy_repaired,chain_breaks,valid_matching,"
         "wall_time_us\n";
  for (const auto& r : set.samples)
    out << r.run_index << ',' << r.seed << ',' << io::format_number(r.energy_raw)
        << ',' << io::format_number(r.energy_repaired) << ',' << r.chain_breaks
        << ',' << (r.valid_matching ? 1 : 0) << ',' << r.wall_time_us << '\n';
  return out.str();
}

std::string histogram_csv(const Histogram& raw, const Histogram& repaired) {
  std::ostringstream out;
  out << "variant,lower,upper,count\n";
  for (const Histogram* h : {&raw, &repaired}) {
    const char* name = h->variant == Variant::raw ? "raw" : "repaired";
    for (std::size_t i = 0; i < h->counts.size(); ++i)
      out << name << ',' << io::format_number(h->edges[i]) << ','
          << io::format_number(h->edges[i + 1]) << ',' << h->counts[i] << '\n';
  }
  return out.str();
}

void write_artifacts(const CampaignResult& r, const Pipeline& p) {
  const fs::path dir = r.config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  io::write_json(dir / "config.json", io::config_to_json(r.config));
  io::write_text(dir / "samples.csv", samples_csv(r.samples));

  io::Json stats;
  stats["model"] = r.samples.model_id;
  stats["embedding"] =
      r.samples.embedding_id ? io::Json(*r.samples.embedding_id) : io::Json(nullptr);
  stats["runs"] = r.samples.samples.size();
  stats["optimum"] = r.optimum ? io::Json(*r.optimum) : io::Json(nullptr);
  if (r.physical) {
    const Embedding& e = r.physical->embedding;
    stats["physical_qubits"] = e.num_physical();
    stats["average_duplication"] = e.average_chain_length();
    stats["max_duplication"] = e.max_chain_length();
    stats["chain_penalty"] = r.physical->chain_penalty;
    stats["scale_factor"] = r.physical->scale_factor;
  }
  stats["raw"] = io::stats_to_json(r.raw);
  stats["repaired"] = io::stats_to_json(r.repaired);
  io::Json classes;
  for (SampleClass c : {SampleClass::optimal, SampleClass::valid_suboptimal,
                        SampleClass::invalid_matching, SampleClass::chain_broken})
    classes[std::string(to_string(c))] = std::count_if(
        r.samples.samples.begin(), r.samples.samples.end(),
        [c](const RunRecord& rec) { return rec.sample_class == c; });
  stats["classes"] = std::move(classes);
  io::write_json(dir / "stats.json", stats);

  io::write_text(dir / "histogram.csv",
                 histogram_csv(r.histogram_raw, r.histogram_repaired));
  if (r.physical && p.topology)
    io::write_json(dir / "embedding.json",
                   io::embedding_to_json(r.physical->embedding, *p.topology));
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const Pipeline p = prepare(cfg);

  std::optional<Sample> exhaustive_sample;
  if (cfg.solver.kind == SolverKind::exhaustive)
    exhaustive_sample = p.physical ? exhaustive(p.solve_model)
                                   : exhaustive(p.minimized);

  CampaignResult result;
  result.config = cfg;
  result.graph = p.graph;
  result.logical = p.logical;
  result.physical = p.physical;
  result.optimum = p.optimum;
  result.samples.model_id = p.model_id;
  result.samples.embedding_id = p.embedding_id;
  result.samples.samples.resize(cfg.runs);

  unsigned workers = cfg.workers != 0 ? cfg.workers
                                      : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.runs));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t r = next++; r < cfg.runs; r = next++)
        result.samples.samples[r] =
            run_one(cfg, p, r, exhaustive_sample ? &*exhaustive_sample : nullptr);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = cfg.runs;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  result.raw = summarize(result.samples, Variant::raw, p.optimum);
  result.repaired = summarize(result.samples, Variant::repaired, p.optimum);
  result.histogram_raw =
      histogram(result.samples.raw_energies(), cfg.bins, Variant::raw);
  result.histogram_repaired =
      histogram(result.samples.repaired_energies(), cfg.bins, Variant::repaired);

  if (!cfg.output_dir.empty()) write_artifacts(result, p);
  return result;
}

std::optional<HardwareReference> hardware_reference(std::uint32_t n) {
  static const HardwareReference table[] = {
      {1, 16, 2.0, 6, -68, -68, -6, -67.4, -68, 3.2, 9673, 10000},
      {2, 100, 3.7, 6, -495, -495, -89, -402.9, -388, 47.8, 662, 10000},
      {3, 431, 6.7, 18, -2064, -1809, -549, -1460.8, -1549, 136.4, 0, 10000},
      {4, 951, 7.6, 18, -6275, -5524, -2109, -4492.4, -4525, 391.8, 0, 10000},
  };
  for (const auto& row : table)
    if (row.n == n) return row;
  return std::nullopt;
}

Report replicate_tables(std::span<const std::uint32_t> n_list,
                        const CampaignConfig& templ) {
  Report report;
  for (std::uint32_t n : n_list) {
    CampaignConfig cfg = templ;
    cfg.n = n;
    cfg.graph_file.clear();
    if (!templ.output_dir.empty())
      cfg.output_dir = (fs::path(templ.output_dir) / ("G" + std::to_string(n))).string();

    ReportRow row;
    row.n = n;
    const GnInstance inst = generate_gn(n, cfg.edge_order);
    const Qubo q = matching_to_qubo(inst.graph, cfg.lambda);
    row.variables = q.num_vars();
    row.edges = inst.graph.num_edges();
    row.off_diagonal = q.num_off_diagonal();
    row.reference = hardware_reference(n);
    try {
      const CampaignResult r = run_campaign(cfg);
      if (r.physical) {
        row.qubits = r.physical->embedding.num_physical();
        row.average_duplication = r.physical->embedding.average_chain_length();
        row.max_duplication = r.physical->embedding.max_chain_length();
      }
      row.raw = r.raw;
      row.repaired = r.repaired;
    } catch (const EmbeddingError& e) {
      row.embedding_error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

template <typename T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>)
    return io::format_number(*v);
  else
    return std::to_string(*v);
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

}  // namespace

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "n,variables,edges,off_diagonal,qubits,avg_dup,max_dup,optimum,best,"
         "worst,mean,median,stdev,optimum_hits,runs,valid_raw,valid_repaired,"
         "chain_break_rate,gap_percent,mean_repaired,median_repaired,"
         "ref_qubits,ref_avg_dup,ref_max_dup,ref_best,ref_worst,ref_mean,"
         "ref_median,ref_stdev,ref_hits,ref_runs,embedding_error\n";
  for (const ReportRow& r : rows) {
    const bool ran = r.raw.count > 0;
    out << r.n << ',' << r.variables << ',' << r.edges << ',' << r.off_diagonal
        << ',' << opt_str(r.qubits) << ',' << opt_str(r.average_duplication)
        << ',' << opt_str(r.max_duplication) << ',' << opt_str(r.raw.optimum);
    if (ran) {
      out << ',' << io::format_number(r.raw.best) << ','
          << io::format_number(r.raw.worst) << ',' << io::format_number(r.raw.mean)
          << ',' << io::format_number(r.raw.median) << ','
          << io::format_number(r.raw.stdev) << ',' << r.repaired.optimum_hit_count
          << ',' << r.raw.count << ',' << r.raw.valid_matching_count << ','
          << r.repaired.valid_matching_count << ','
          << io::format_number(r.raw.chain_break_rate) << ','
          << opt_str(r.raw.gap_percent) << ','
          << io::format_number(r.repaired.mean) << ','
          << io::format_number(r.repaired.median);
    } else {
      out << ",,,,,,,,,,,,,";
    }
    if (r.reference) {
      const auto& h = *r.reference;
      out << ',' << h.qubits << ',' << io::format_number(h.average_duplication)
          << ',' << h.max_duplication << ',' << io::format_number(h.best) << ','
          << io::format_number(h.worst) << ',' << io::format_number(h.mean)
          << ',' << io::format_number(h.median) << ','
          << io::format_number(h.stdev) << ',' << h.optimum_hits << ','
          << h.runs;
    } else {
      out << ",,,,,,,,,,";
    }
    std::string err = r.embedding_error.value_or("");
    std::replace(err.begin(), err.end(), ',', ';');
    out << ',' << err << '\n';
  }
  return out.str();
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "Problem size and duplication (measured | D-Wave 2X reference)\n";
  out << "  n   #var  #offdiag  #qubits  avg.dup  max.dup | #qubits  avg.dup  max.dup\n";
  for (const ReportRow& r : rows) {
    out << "  " << r.n << "  " << r.variables << "  " << r.off_diagonal << "  "
        << (r.qubits ? std::to_string(*r.qubits) : "-") << "  "
        << (r.average_duplication ? fixed(*r.average_duplication, 1) : "-")
        << "  " << (r.max_duplication ? std::to_string(*r.max_duplication) : "-");
    if (r.reference)
      out << " | " << r.reference->qubits << "  "
          << fixed(r.reference->average_duplication, 1) << "  "
          << r.reference->max_duplication;
    if (r.embedding_error) out << "  [embedding failed: " << *r.embedding_error << "]";
    out << '\n';
  }
  out << "\nSolver statistics, minimization sense (raw energies)\n";
  out << "  n   opt  best  worst  mean  median  stdev  repaired.hits/runs  gap% | "
         "ref best  ref hits/runs\n";
  for (const ReportRow& r : rows) {
    out << "  " << r.n << "  ";
    if (r.raw.count == 0) {
      out << "(not run)\n";
      continue;
    }
    out << opt_str(r.raw.optimum) << "  " << io::format_number(r.raw.best) << "  "
        << io::format_number(r.raw.worst) << "  " << fixed(r.raw.mean, 1) << "  "
        << io::format_number(r.raw.median) << "  " << fixed(r.raw.stdev, 1)
        << "  " << r.repaired.optimum_hit_count << "/" << r.raw.count << "  "
        << (r.raw.gap_percent ? fixed(*r.raw.gap_percent, 1) : "-");
    if (r.reference)
      out << " | " << io::format_number(r.reference->best) << "  "
          << r.reference->optimum_hits << "/" << r.reference->runs;
    out << '\n';
  }
  return out.str();
}

}  // namespace hardmatch
