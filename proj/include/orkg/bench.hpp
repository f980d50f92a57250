#pragma once

// Sub-sampling experiment: for growing attribute subsets, reshape, build both
// graphs and compare the depth of the queries synthesized against each.
// Includes a generator for a welding-like ontology and dataset.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "orkg/mapping.hpp"
#include "orkg/ontology.hpp"
#include "orkg/query.hpp"

namespace orkg {

struct SynthConfig {
  std::size_t classes = 14;
  std::size_t depth = 3;
  std::size_t branching = 2;
  std::size_t tables = 2;
  std::size_t attributes_per_table = 12;  // datatype attributes; key columns come on top
  std::size_t rows_per_table = 250;
  double elevation_fraction = 0.25;  // share of leaf classes given a key column
  std::uint64_t seed = 7;

  // Throws ConfigError.
  void check() const;
};

struct SynthCorpus {
  OntologyGraph ontology;
  std::vector<TableData> tables;
  MappingSpec mapping;
};

// Tree-shaped ontology filled level by level, datatype properties on leaves,
// tables bound to the root and to depth-one classes. Deterministic per seed.
SynthCorpus generate_synthetic(const SynthConfig& cfg);

// Uniform k-subset of the attribute bindings, in original order. Tables with no
// surviving attribute are dropped. Throws SampleTooLargeError when k exceeds
// the number of bindings.
MappingSpec subsample_attributes(const MappingSpec& m, std::size_t k, std::uint64_t seed);

// Intent suite over a mapping: one inspection intent per three attributes of a
// table, one summary per key attribute and one diagnostic per numeric
// attribute, filtered below the column median.
std::vector<QueryIntent> instantiate_intents(const MappingSpec& m, const std::vector<TableData>& tables,
                                             const std::set<IntentKind>& kinds = {
                                                 IntentKind::kInspection, IntentKind::kSummary,
                                                 IntentKind::kDiagnostic});

struct ExperimentConfig {
  std::vector<std::size_t> sizes = {4, 8, 12, 16, 20, 24};
  std::size_t repetitions = 10;
  std::uint64_t seed = 42;
  std::size_t threads = 0;  // 0 picks the hardware concurrency
  std::set<IntentKind> templates = {IntentKind::kInspection, IntentKind::kSummary,
                                    IntentKind::kDiagnostic};
  bool check_equivalence = false;  // evaluate every intent on both graphs
  std::string output_dir;          // empty: nothing is written
  SynthConfig synth;

  // Throws ConfigError.
  void check() const;
};

// Line-oriented config:
//   sizes 4 8 12        repetitions 10       seed 42        threads 4
//   templates I II III  equivalence yes|no
//   synth classes=14 depth=3 branching=2 tables=2 attributes=12 rows=250 elevation=0.25 seed=7
// Throws ConfigError with the offending line.
ExperimentConfig parse_experiment_config(std::string_view text);
std::string serialize_experiment_config(const ExperimentConfig& cfg);
ExperimentConfig demo_experiment_config();

struct ExperimentRow {
  std::size_t size = 0;
  std::size_t repetition = 0;
  std::string variant;  // "baseline" or "reshaped"
  std::size_t intents = 0;
  double avg_depth = 0;
  std::size_t max_depth = 0;
  std::size_t entity_count = 0;
  std::size_t blank_node_count = 0;
  std::size_t triple_count = 0;
  std::size_t storage_bytes = 0;
  std::size_t checked = 0;     // intents evaluated on both graphs
  std::size_t mismatches = 0;  // of those, how many disagreed
  double build_time = 0;       // seconds
  std::string error;           // non-empty when the cell failed
};

struct ExperimentSummary {
  std::size_t size = 0;
  std::string variant;
  std::size_t cells = 0;  // repetitions without error
  double avg_depth = 0;   // mean over cells
  double max_depth = 0;   // mean over cells
  double entity_count = 0;
  double blank_node_count = 0;
  double storage_bytes = 0;
  double build_time = 0;
};

struct ExperimentReport {
  std::vector<std::size_t> sizes;
  std::vector<ExperimentRow> rows;  // ordered by (size, repetition, variant)

  // Per (size, variant), recomputed from rows.
  std::vector<ExperimentSummary> summaries() const;
  std::optional<ExperimentSummary> summary(std::size_t size, std::string_view variant) const;
  // Total baseline build time over total reshaped build time; 0 when undefined.
  double build_time_ratio() const;
};

// Runs the grid, in parallel across cells. When cfg.output_dir is set, writes
// report.md, report.csv, builds.jsonl and one N-Triples file per cell there.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const OntologyGraph& o,
                                const std::vector<TableData>& tables, const MappingSpec& m);

std::string render_markdown(const ExperimentReport& r);
// One line per row; timing is the last column and can be left out.
std::string render_csv(const ExperimentReport& r, bool with_timing = true);

}  // namespace orkg
