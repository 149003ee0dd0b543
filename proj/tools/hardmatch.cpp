// hardmatch command line: generate, compile, embed, solve, bench, report.
//
// Exit codes: 0 ok, 1 invalid input, 2 embedding failure, 3 size error,
// 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hardmatch/bench.hpp"
#include "hardmatch/embedding.hpp"
#include "hardmatch/errors.hpp"
#include "hardmatch/instances.hpp"
#include "hardmatch/qubo.hpp"
#include "hardmatch/serialize.hpp"

namespace hm = hardmatch;
using hm::io::Json;

namespace {

// Flags mirror the config file keys. Each one that is given overrides the
// corresponding key of --config (if any) before the config is parsed.
struct CampaignFlags {
  std::string config_file;
  std::optional<std::uint32_t> n;
  std::optional<std::string> graph, edge_order, lambda, embedding_mode,
      embedding_file, solver, schedule, repair, output;
  std::optional<std::uint32_t> M, N, L;
  std::vector<std::uint32_t> dead;
  std::optional<std::uint64_t> embed_seed, seed;
  std::optional<std::size_t> restarts, sweeps, P, runs, bins;
  std::optional<double> phi, T0, T_final, T, gamma0, gamma_final;
  bool no_global_moves = false;
  bool record_timing = false;
  std::optional<unsigned> workers;

  void add_instance(CLI::App* app) {
    app->add_option("--n", n, "G_n instance size");
    app->add_option("--graph", graph, "graph JSON file instead of G_n");
    app->add_option("--edge-order", edge_order, "layered | sparse_first");
    app->add_option("--lambda", lambda, "vertex penalty (number or auto)");
  }

  void add_embedding(CLI::App* app) {
    app->add_option("--embedding", embedding_mode, "none | chimera | file");
    app->add_option("--M", M, "Chimera rows");
    app->add_option("--N", N, "Chimera columns");
    app->add_option("--L", L, "Chimera shore size");
    app->add_option("--dead", dead, "dead qubit ids");
    app->add_option("--embed-seed", embed_seed, "embedding heuristic seed");
    app->add_option("--restarts", restarts, "embedding heuristic restarts");
    app->add_option("--embedding-file", embedding_file, "precomputed embedding JSON");
    app->add_option("--phi", phi, "chain penalty (default: auto)");
  }

  void add_all(CLI::App* app) {
    app->add_option("--config", config_file, "campaign config JSON");
    add_instance(app);
    add_embedding(app);
    app->add_option("--solver", solver, "sa | sqa | random | exhaustive");
    app->add_option("--sweeps", sweeps, "sweep budget");
    app->add_option("--schedule", schedule, "geometric | log | linear");
    app->add_option("--T0", T0, "initial temperature (SA)");
    app->add_option("--T-final", T_final, "final temperature (SA)");
    app->add_option("--P", P, "Trotter slices (SQA)");
    app->add_option("--T", T, "temperature (SQA)");
    app->add_option("--gamma0", gamma0, "initial transverse field (SQA)");
    app->add_option("--gamma-final", gamma_final, "final transverse field (SQA)");
    app->add_flag("--no-global-moves", no_global_moves, "SQA: local moves only");
    app->add_option("--runs", runs, "number of runs");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--repair", repair, "majority | strict");
    app->add_option("--bins", bins, "histogram bins");
    app->add_option("--output", output, "output directory");
    app->add_flag("--record-timing", record_timing, "write wall-clock times");
    app->add_option("--workers", workers, "worker threads (0: all cores)");
  }

  Json to_json() const {
    Json j = config_file.empty() ? Json::object() : hm::io::read_json(config_file);
    if (n) {
      j["n"] = *n;
      j.erase("graph");
    }
    if (graph) {
      j["graph"] = *graph;
      j.erase("n");
    }
    if (edge_order) j["edge_order"] = *edge_order;
    if (lambda) {
      if (*lambda == "auto")
        j["lambda"] = "auto";
      else
        j["lambda"] = std::stod(*lambda);
    }
    if (phi) j["phi"] = *phi;

    Json& e = j["embedding"];
    if (e.is_null()) e = Json::object();
    if (embedding_file && !embedding_mode) e["mode"] = "file";
    if (embedding_mode) e["mode"] = *embedding_mode;
    if (embedding_file) e["file"] = *embedding_file;
    if (M) e["M"] = *M;
    if (N) e["N"] = *N;
    if (L) e["L"] = *L;
    if (!dead.empty()) e["dead"] = dead;
    if (embed_seed) e["seed"] = *embed_seed;
    if (restarts) e["restarts"] = *restarts;
    if (e.empty()) j.erase("embedding");

    if (solver) j["solver"] = *solver;
    if (sweeps) j["sweeps"] = *sweeps;
    if (schedule) j["schedule"] = *schedule;
    if (T0) j["T0"] = *T0;
    if (T_final) j["T_final"] = *T_final;
    if (P) j["P"] = *P;
    if (T) j["T"] = *T;
    if (gamma0) j["gamma0"] = *gamma0;
    if (gamma_final) j["gamma_final"] = *gamma_final;
    if (no_global_moves) j["global_moves"] = false;
    if (runs) j["runs"] = *runs;
    if (seed) j["seed"] = *seed;
    if (repair) j["repair"] = *repair;
    if (bins) j["bins"] = *bins;
    if (output) j["output"] = *output;
    if (record_timing) j["record_timing"] = true;
    if (workers) j["workers"] = *workers;
    return j;
  }

  hm::CampaignConfig config() const { return hm::io::config_from_json(to_json()); }
};

void emit(const Json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    hm::io::write_json(path, j);
}

hm::Graph load_graph(const hm::CampaignConfig& cfg) {
  if (cfg.n) return hm::generate_gn(*cfg.n, cfg.edge_order).graph;
  if (cfg.graph_file.empty()) throw hm::InputError("give --n or --graph");
  return hm::io::graph_from_json(hm::io::read_json(cfg.graph_file));
}

std::string stats_line(const char* label, const hm::SummaryStats& s) {
  std::ostringstream out;
  out << label << ": best " << hm::io::format_number(s.best) << ", worst "
      << hm::io::format_number(s.worst) << ", mean "
      << hm::io::format_number(s.mean) << ", median "
      << hm::io::format_number(s.median) << ", stdev "
      << hm::io::format_number(s.stdev) << ", optimum hits "
      << s.optimum_hit_count << "/" << s.count << ", valid "
      << s.valid_matching_count << "/" << s.count;
  if (s.gap_percent) out << ", gap " << hm::io::format_number(*s.gap_percent) << "%";
  return out.str();
}

std::vector<std::uint32_t> parse_n_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash != std::string::npos) {
      const auto lo = static_cast<std::uint32_t>(std::stoul(item.substr(0, dash)));
      const auto hi = static_cast<std::uint32_t>(std::stoul(item.substr(dash + 1)));
      for (std::uint32_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matching-QUBO annealing benchmark harness"};
  app.require_subcommand(1);

  std::string out_path;

  CampaignFlags gen;
  auto* generate = app.add_subcommand("generate", "emit a G_n instance as JSON");
  generate->add_option("--n", gen.n, "instance size")->required();
  generate->add_option("--edge-order", gen.edge_order, "layered | sparse_first");
  generate->add_option("-o,--out", out_path, "output file (default stdout)");

  CampaignFlags comp;
  auto* compile = app.add_subcommand("compile", "graph -> matching QUBO JSON");
  comp.add_instance(compile);
  compile->add_option("-o,--out", out_path, "output file (default stdout)");

  CampaignFlags emb;
  std::string physical_path;
  auto* embed = app.add_subcommand("embed", "QUBO + Chimera -> embedding and physical model");
  emb.add_instance(embed);
  emb.add_embedding(embed);
  embed->add_option("-o,--out", out_path, "embedding JSON (default stdout)");
  embed->add_option("--physical", physical_path, "physical model JSON");

  CampaignFlags sol;
  auto* solve = app.add_subcommand("solve", "one solver run");
  sol.add_all(solve);

  CampaignFlags ben;
  auto* bench = app.add_subcommand("bench", "full campaign");
  ben.add_all(bench);

  CampaignFlags rep;
  std::string n_list = "1,2,3,4";
  std::string csv_path, text_path;
  auto* report = app.add_subcommand("report", "embedding and solver summary over several n");
  rep.add_all(report);
  report->add_option("--n-list", n_list, "comma-separated sizes or ranges, e.g. 1-4");
  report->add_option("--csv", csv_path, "CSV output file");
  report->add_option("--text", text_path, "text output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const auto cfg = gen.config();
      emit(hm::io::instance_to_json(hm::generate_gn(*cfg.n, cfg.edge_order)), out_path);
    } else if (*compile) {
      const auto cfg = comp.config();
      emit(hm::io::qubo_to_json(hm::matching_to_qubo(load_graph(cfg), cfg.lambda)),
           out_path);
    } else if (*embed) {
      const auto cfg = emb.config();
      const hm::Qubo q = hm::matching_to_qubo(load_graph(cfg), cfg.lambda);
      std::optional<hm::io::LoadedEmbedding> loaded;
      if (cfg.embedding.mode == hm::EmbeddingMode::file) {
        loaded = hm::io::embedding_from_json(hm::io::read_json(cfg.embedding.file));
      } else {
        auto t = hm::build_chimera(cfg.embedding.rows, cfg.embedding.cols,
                                   cfg.embedding.shore, cfg.embedding.dead);
        auto e = hm::find_embedding(q, t, cfg.embedding.options);
        loaded = hm::io::LoadedEmbedding{std::move(t), std::move(e)};
      }
      const auto pm = hm::embed_qubo(q, loaded->embedding, loaded->topology, cfg.phi);
      emit(hm::io::embedding_to_json(loaded->embedding, loaded->topology), out_path);
      if (!physical_path.empty())
        hm::io::write_json(physical_path, hm::io::physical_to_json(pm, loaded->topology));
      std::cerr << "qubits " << pm.embedding.num_physical() << ", average chain "
                << hm::io::format_number(pm.embedding.average_chain_length())
                << ", max chain " << pm.embedding.max_chain_length() << ", phi "
                << hm::io::format_number(pm.chain_penalty) << '\n';
    } else if (*solve) {
      auto cfg = sol.config();
      // Same as run 0 of a bench campaign with this master seed.
      cfg.runs = 1;
      const auto r = hm::run_campaign(cfg);
      const auto& rec = r.samples.samples.front();
      Json j;
      j["seed"] = rec.seed;
      j["energy_raw"] = rec.energy_raw;
      j["energy_repaired"] = rec.energy_repaired;
      j["chain_breaks"] = rec.chain_breaks;
      j["valid_matching"] = rec.valid_matching;
      j["class"] = std::string(hm::to_string(rec.sample_class));
      j["optimum"] = r.optimum ? Json(*r.optimum) : Json(nullptr);
      j["assignment"] = rec.logical;
      std::cout << j.dump(2) << '\n';
    } else if (*bench) {
      const auto cfg = ben.config();
      const auto r = hm::run_campaign(cfg);
      std::cout << r.samples.model_id;
      if (r.samples.embedding_id) std::cout << " on " << *r.samples.embedding_id;
      std::cout << ", " << cfg.runs << " runs";
      if (r.optimum) std::cout << ", optimum " << hm::io::format_number(*r.optimum);
      std::cout << '\n'
                << stats_line("raw", r.raw) << '\n'
                << stats_line("repaired", r.repaired) << '\n';
      if (r.physical)
        std::cout << "chain break rate " << hm::io::format_number(r.raw.chain_break_rate)
                  << '\n';
    } else if (*report) {
      const auto cfg = rep.config();
      const auto sizes = parse_n_list(n_list);
      const auto doc = hm::replicate_tables(sizes, cfg);
      if (!csv_path.empty()) hm::io::write_text(csv_path, doc.to_csv());
      if (text_path.empty())
        std::cout << doc.to_text();
      else
        hm::io::write_text(text_path, doc.to_text());
    }
  } catch (const hm::EmbeddingError& e) {
    std::cerr << "embedding failed: " << e.what() << '\n';
    return 2;
  } catch (const hm::SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return 3;
  } catch (const hm::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
