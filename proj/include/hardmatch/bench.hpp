#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hardmatch/embedding.hpp"
#include "hardmatch/instances.hpp"
#include "hardmatch/qubo.hpp"
#include "hardmatch/solvers.hpp"

namespace hardmatch {

enum class SolverKind { sa, sqa, random, exhaustive };

struct SolverSpec {
  SolverKind kind = SolverKind::sa;
  Schedule schedule = Schedule::geometric(5.0, 0.05, 1000);
  SqaParams sqa;
};

enum class EmbeddingMode { none, chimera, file };

struct EmbeddingSpec {
  EmbeddingMode mode = EmbeddingMode::none;
  std::uint32_t rows = 12, cols = 12, shore = 4;
  std::set<Qubit> dead;
  EmbedOptions options;
  std::string file;  // EmbeddingMode::file
};

struct CampaignConfig {
  // Instance: G_n when `n` is set, otherwise a graph JSON file.
  std::optional<std::uint32_t> n;
  std::string graph_file;
  EdgeOrder edge_order = EdgeOrder::layered;
  std::optional<double> lambda;  // default |E|

  EmbeddingSpec embedding;
  std::optional<double> phi;  // default |all-ones cost|

  SolverSpec solver;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  RepairPolicy repair = RepairPolicy::majority;
  std::size_t bins = 20;

  std::string output_dir;  // empty: nothing written
  // wall_time_us is written as 0 unless set, keeping outputs reproducible.
  bool record_timing = false;
  unsigned workers = 0;  // 0: hardware concurrency

  // Throws InputError (bad values) or IoError (missing files).
  void validate() const;
};

enum class SampleClass { optimal, valid_suboptimal, invalid_matching, chain_broken };

std::string_view to_string(SampleClass c);

// One run of a campaign. Energies are in the logical minimization sense:
// `energy_raw` is the energy of the state the solver returned (physical QUBO
// energy when embedded, chain penalties included), `energy_repaired` the
// logical energy after unembedding with the configured repair policy.
struct RunRecord {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  double energy_raw = 0.0;
  double energy_repaired = 0.0;
  std::size_t chain_breaks = 0;
  bool valid_matching = false;  // repaired assignment
  SampleClass sample_class = SampleClass::valid_suboptimal;
  std::int64_t wall_time_us = 0;
  BitVector logical;  // repaired logical assignment
  BitVector raw;      // solver output (physical when embedded)
};

struct SampleSet {
  std::vector<RunRecord> samples;
  std::string model_id;
  std::optional<std::string> embedding_id;

  std::vector<double> raw_energies() const;
  std::vector<double> repaired_energies() const;
};

struct SummaryStats {
  std::size_t count = 0;
  std::optional<double> optimum;
  double best = 0.0, worst = 0.0, mean = 0.0, median = 0.0, stdev = 0.0;
  std::size_t optimum_hit_count = 0;
  std::size_t valid_matching_count = 0;
  double chain_break_rate = 0.0;
  std::optional<double> gap_percent;  // |best - opt| / |opt| * 100
};

// Minimization-sense statistics: lower median for even counts, population
// standard deviation. Throws InputError on an empty input.
SummaryStats summarize(std::span<const double> energies,
                       std::optional<double> known_optimum = {});

enum class Variant { raw, repaired };

// Adds validity and chain-break accounting for the chosen variant.
SummaryStats summarize(const SampleSet& set, Variant variant,
                       std::optional<double> known_optimum = {});

struct Histogram {
  std::vector<double> edges;         // strictly increasing, counts.size()+1
  std::vector<std::size_t> counts;
  Variant variant = Variant::raw;
};

// Fixed-width bins over [min, max] (a unit interval around the value when
// all energies are equal). The last bin is closed.
Histogram histogram(std::span<const double> energies, std::size_t bins,
                    Variant variant = Variant::raw);
// Explicit edges; values outside are clamped into the first/last bin.
Histogram histogram(std::span<const double> energies, std::vector<double> edges,
                    Variant variant = Variant::raw);

struct CampaignResult {
  CampaignConfig config;
  Graph graph;
  Qubo logical;
  std::optional<PhysicalModel> physical;
  std::optional<double> optimum;  // minimization sense
  SampleSet samples;
  SummaryStats raw, repaired;
  Histogram histogram_raw, histogram_repaired;
};

// instance -> QUBO -> (embed) -> R solver runs -> unembed/repair -> validate
// -> statistics. Writes config.json, samples.csv, stats.json, histogram.csv
// and embedding.json (when embedded) to cfg.output_dir if it is set.
CampaignResult run_campaign(const CampaignConfig& cfg);

// D-Wave 2X reference figures for G_1..G_4 (10000 runs each), kept as
// context next to measured results.
struct HardwareReference {
  std::uint32_t n;
  std::size_t qubits;
  double average_duplication;
  std::size_t max_duplication;
  double optimum, best, worst, mean, median, stdev;
  std::size_t optimum_hits;
  std::size_t runs;
};

std::optional<HardwareReference> hardware_reference(std::uint32_t n);

struct ReportRow {
  std::uint32_t n = 0;
  std::size_t variables = 0;
  std::size_t edges = 0;
  std::size_t off_diagonal = 0;
  std::optional<std::size_t> qubits;
  std::optional<double> average_duplication;
  std::optional<std::size_t> max_duplication;
  std::optional<std::string> embedding_error;
  SummaryStats raw;
  SummaryStats repaired;
  std::optional<HardwareReference> reference;
};

struct Report {
  std::vector<ReportRow> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

// One campaign per n with `templ` (its n and output_dir are overridden;
// per-n campaign artifacts go to templ.output_dir/G<n> when set).
// Embedding failures are recorded in the row instead of aborting.
Report replicate_tables(std::span<const std::uint32_t> n_list,
                        const CampaignConfig& templ);

}  // namespace hardmatch
