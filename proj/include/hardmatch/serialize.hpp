#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "hardmatch/bench.hpp"
#include "hardmatch/embedding.hpp"
#include "hardmatch/instances.hpp"
#include "hardmatch/qubo.hpp"

// JSON documents. Field order is fixed (ordered_json) and arrays are emitted
// in index order, so equal objects serialize to identical bytes.
namespace hardmatch::io {

using Json = nlohmann::ordered_json;

// {"n"?, "num_vertices", "edges": [[u,v],...], "canonical_matching"?}
Json graph_to_json(const Graph& g);
Json instance_to_json(const GnInstance& inst);
// Reads either document; "n" and "canonical_matching" are optional.
Graph graph_from_json(const Json& j);

// {"num_vars", "sense": "min"|"max", "offset", "terms": [[i,j,v],...]}
Json qubo_to_json(const Qubo& q);
Qubo qubo_from_json(const Json& j);

// {"num_spins", "offset", "negated", "h": [...], "J": [[i,j,v],...]}
Json ising_to_json(const IsingModel& m);
IsingModel ising_from_json(const Json& j);

// {"topology": {"M","N","L","dead"}, "chains": {"0": [...], ...}}
Json embedding_to_json(const Embedding& e, const ChimeraTopology& t);
struct LoadedEmbedding {
  ChimeraTopology topology;
  Embedding embedding;
};
LoadedEmbedding embedding_from_json(const Json& j);

Json physical_to_json(const PhysicalModel& pm, const ChimeraTopology& t);

// Campaign config file. Solver keys follow
// {"solver","sweeps","T0","T_final","schedule","P","T","gamma0",
//  "gamma_final","runs","seed"}; instance/embedding keys are
// {"n","graph","edge_order","lambda","embedding":{...},"phi","repair",
//  "bins","output","record_timing","workers"}.
Json config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const Json& j);

Json stats_to_json(const SummaryStats& s);
Json sample_to_json(const Sample& s);

Json read_json(const std::filesystem::path& path);  // IoError on failure
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace hardmatch::io
