#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "orkg/bench.hpp"
#include "orkg/error.hpp"
#include "orkg/kgen.hpp"
#include "test_support.hpp"

using namespace orkg;

namespace {

SynthConfig small_synth() {
  SynthConfig c;
  c.rows_per_table = 40;
  return c;
}

ExperimentConfig small_grid() {
  ExperimentConfig cfg;
  cfg.sizes = {4, 10};
  cfg.repetitions = 2;
  cfg.threads = 2;
  cfg.check_equivalence = true;
  cfg.synth = small_synth();
  return cfg;
}

std::size_t tree_depth(const OntologyGraph& o, const std::string& root) {
  SchemaIndex index(o);
  std::size_t d = 0;
  for (const auto& [_, hops] : index.distances_from(root)) d = std::max(d, hops);
  return d;
}

}  // namespace

TEST(SynthConfig, RejectsInvalid) {
  auto bad = [](auto mutate) {
    SynthConfig c;
    mutate(c);
    return c;
  };
  EXPECT_NO_THROW(SynthConfig{}.check());
  EXPECT_THROW(bad([](SynthConfig& c) { c.classes = 0; }).check(), ConfigError);
  EXPECT_THROW(bad([](SynthConfig& c) { c.rows_per_table = 0; }).check(), ConfigError);
  EXPECT_THROW(bad([](SynthConfig& c) { c.elevation_fraction = 1.5; }).check(), ConfigError);
  EXPECT_THROW(bad([](SynthConfig& c) { c.elevation_fraction = -0.1; }).check(), ConfigError);
  // A binary tree of depth 2 holds at most 7 classes.
  EXPECT_THROW(bad([](SynthConfig& c) { c.depth = 2; c.classes = 8; }).check(), ConfigError);
  EXPECT_THROW(bad([](SynthConfig& c) { c.depth = 5; c.classes = 5; }).check(), ConfigError);
  EXPECT_THROW(bad([](SynthConfig& c) { c.tables = 4; }).check(), ConfigError);
}

TEST(Synth, TreeShapeMatchesConfig) {
  for (std::size_t depth : {1u, 2u, 3u, 4u}) {
    for (std::size_t branching : {2u, 3u}) {
      SynthConfig c = small_synth();
      c.depth = depth;
      c.branching = branching;
      std::size_t capacity = 0, width = 1;
      for (std::size_t d = 0; d <= depth; ++d, width *= branching) capacity += width;
      c.classes = std::min<std::size_t>(14, capacity);
      c.tables = 1;
      auto corpus = generate_synthetic(c);
      const auto& o = corpus.ontology;
      ASSERT_EQ(o.classes.size(), c.classes);
      ASSERT_EQ(o.object_properties.size(), c.classes - 1);
      std::map<std::string, int> indegree, outdegree;
      for (const auto& [_, op] : o.object_properties) {
        ++indegree[op.range];
        ++outdegree[op.domain];
      }
      std::string root = corpus.mapping.tables.front().cls;
      EXPECT_FALSE(indegree.contains(root));
      for (const auto& cls : o.classes) {
        if (cls != root) EXPECT_EQ(indegree[cls], 1) << cls;
        EXPECT_LE(static_cast<std::size_t>(outdegree[cls]), branching) << cls;
      }
      EXPECT_EQ(tree_depth(o, root), depth);
      for (const auto& [iri, dp] : o.datatype_properties) {
        EXPECT_TRUE(outdegree[dp.domain] == 0 || dp.domain == root) << iri << " is not on a leaf";
      }
      EXPECT_TRUE(validate_mapping(corpus.mapping, o, corpus.tables).empty());
    }
  }
}

TEST(Synth, DemoCorpusIsValidAndFragmented) {
  auto corpus = generate_synthetic(SynthConfig{});
  EXPECT_EQ(corpus.ontology.classes.size(), 14u);
  EXPECT_EQ(corpus.tables.size(), 2u);
  EXPECT_TRUE(validate_mapping(corpus.mapping, corpus.ontology, corpus.tables).empty());
  auto fragments = select_subgraph(corpus.ontology, corpus.mapping);
  EXPECT_EQ(fragments.size(), test::fragment_count_oracle(corpus.ontology, corpus.mapping));
  EXPECT_GE(fragments.size(), 2u);
  std::size_t rows = 0;
  for (const auto& t : corpus.tables) rows += t.rows.size();
  EXPECT_LE(rows, 10000u);
  // Enough bindings for the default ladder.
  EXPECT_GE(corpus.mapping.attributes.size(), ExperimentConfig{}.sizes.back());
}

TEST(Synth, DeterministicPerSeed) {
  auto text = [](const SynthCorpus& c) {
    std::string s = serialize_ntriples(ontology_to_graph(c.ontology)) + serialize_mapping(c.mapping);
    for (const auto& t : c.tables) s += write_csv(t);
    return s;
  };
  SynthConfig a = small_synth(), b = small_synth();
  EXPECT_EQ(text(generate_synthetic(a)), text(generate_synthetic(a)));
  b.seed = a.seed + 1;
  EXPECT_NE(text(generate_synthetic(a)), text(generate_synthetic(b)));
}

TEST(Synth, FlatTreeWithEveryLeafKeyedHasNothingToCompact) {
  SynthConfig c = small_synth();
  c.depth = 1;
  c.classes = 3;
  c.tables = 1;
  c.elevation_fraction = 1.0;
  auto corpus = generate_synthetic(c);
  auto s = reshape(corpus.ontology, corpus.mapping);
  EXPECT_EQ(s.ontology.classes, corpus.ontology.classes);
  EXPECT_TRUE(s.composite_provenance.empty());
  auto base = build_baseline(corpus.ontology, corpus.mapping, corpus.tables);
  auto resh = build_reshaped(s, corpus.mapping, corpus.tables);
  EXPECT_EQ(base.graph, resh.graph);
}

TEST(Subsample, EdgeSizes) {
  auto m = generate_synthetic(small_synth()).mapping;
  std::size_t n = m.attributes.size();
  EXPECT_EQ(subsample_attributes(m, n, 3), m);
  auto one = subsample_attributes(m, 1, 3);
  ASSERT_EQ(one.attributes.size(), 1u);
  ASSERT_EQ(one.tables.size(), 1u);
  EXPECT_EQ(one.tables.front().table, one.attributes.front().table);
  EXPECT_TRUE(subsample_attributes(m, 0, 3).tables.empty());
  EXPECT_THROW(subsample_attributes(m, n + 1, 3), SampleTooLargeError);
}

TEST(Subsample, SeedsDecideTheSubset) {
  auto m = generate_synthetic(small_synth()).mapping;
  std::size_t half = m.attributes.size() / 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(subsample_attributes(m, half, seed), subsample_attributes(m, half, seed));
    EXPECT_NE(subsample_attributes(m, half, seed).attributes,
              subsample_attributes(m, half, seed + 100).attributes);
  }
}

TEST(Subsample, RandomSamplesAreOrderedSubsets) {
  auto m = generate_synthetic(small_synth()).mapping;
  std::mt19937 rng(11);
  std::vector<std::size_t> hits(m.attributes.size(), 0);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t k = rng() % (m.attributes.size() + 1);
    auto sub = subsample_attributes(m, k, rng());
    ASSERT_EQ(sub.attributes.size(), k);
    // Subsequence of the original bindings.
    std::size_t pos = 0;
    for (const auto& a : sub.attributes) {
      while (pos < m.attributes.size() && !(m.attributes[pos] == a)) ++pos;
      ASSERT_LT(pos, m.attributes.size());
      ++hits[pos++];
    }
    std::set<std::string> used;
    for (const auto& a : sub.attributes) used.insert(a.table);
    ASSERT_EQ(sub.tables.size(), used.size());
  }
  // Every binding is drawn at some point.
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 0u), 0);
}

TEST(Intents, TemplateCounts) {
  auto corpus = generate_synthetic(small_synth());
  auto intents = instantiate_intents(corpus.mapping, corpus.tables);
  std::size_t inspect = 0, summary = 0, diagnose = 0;
  for (const auto& t : corpus.mapping.tables) {
    auto attrs = corpus.mapping.attributes_of(t.table);
    const TableData* data = nullptr;
    for (const auto& d : corpus.tables) {
      if (d.name == t.table) data = &d;
    }
    inspect += (attrs.size() + 2) / 3;
    for (const auto* a : attrs) {
      if (a->kind == BindingKind::kClassKey && attrs.size() > 1) ++summary;
      if (a->kind == BindingKind::kDataProperty && data->is_numeric_column(*data->column(a->attribute))) {
        ++diagnose;
      }
    }
  }
  std::map<IntentKind, std::size_t> seen;
  for (const auto& i : intents) {
    ++seen[i.kind];
    EXPECT_NO_THROW(i.check());
  }
  EXPECT_EQ(seen[IntentKind::kInspection], inspect);
  EXPECT_EQ(seen[IntentKind::kSummary], summary);
  EXPECT_EQ(seen[IntentKind::kDiagnostic], diagnose);
  // Round trip through the intent file format.
  EXPECT_EQ(parse_intents(serialize_intents(intents)), intents);
}

TEST(Intents, DiagnosticFilterSitsAtTheMedian) {
  auto corpus = generate_synthetic(small_synth());
  for (const auto& i : instantiate_intents(corpus.mapping, corpus.tables, {IntentKind::kDiagnostic})) {
    ASSERT_TRUE(i.filter);
    const TableData* data = nullptr;
    for (const auto& d : corpus.tables) {
      if (d.name == i.filter->attribute.table) data = &d;
    }
    auto col = *data->column(i.filter->attribute.attribute);
    double cut = i.filter->constant.numeric_value();
    std::size_t below = 0, total = 0;
    for (const auto& row : data->rows) {
      if (row[col].is_null()) continue;
      ++total;
      below += std::stod(row[col].text) < cut;
    }
    EXPECT_LE(below, total / 2) << i.name;
  }
}

TEST(ExperimentConfigFile, RoundTripAndDefaults) {
  auto demo = demo_experiment_config();
  EXPECT_EQ(demo.sizes, (std::vector<std::size_t>{4, 8, 12, 16, 20, 24}));
  EXPECT_EQ(demo.repetitions, 10u);
  auto text = serialize_experiment_config(demo);
  EXPECT_EQ(serialize_experiment_config(parse_experiment_config(text)), text);
  auto cfg = parse_experiment_config(
      "# small\nsizes 2 5\nrepetitions 3\nseed 9\ntemplates I III\nequivalence yes\n"
      "synth classes=7 depth=2 rows=10 elevation=0.5\n");
  EXPECT_EQ(cfg.sizes, (std::vector<std::size_t>{2, 5}));
  EXPECT_EQ(cfg.repetitions, 3u);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.templates, (std::set<IntentKind>{IntentKind::kInspection, IntentKind::kDiagnostic}));
  EXPECT_TRUE(cfg.check_equivalence);
  EXPECT_EQ(cfg.synth.classes, 7u);
  EXPECT_DOUBLE_EQ(cfg.synth.elevation_fraction, 0.5);
}

TEST(ExperimentConfigFile, Errors) {
  for (const char* bad : {"sizes 4 4\n", "sizes 8 4\n", "sizes\n", "repetitions 0\n", "repetitions -1\n",
                          "seed x\n", "speed 3\n", "templates IV\n", "equivalence maybe\n",
                          "synth colour=red\n", "synth elevation=2\n", "synth depth\n"}) {
    EXPECT_THROW(parse_experiment_config(bad), ConfigError) << bad;
  }
}

TEST(Report, TableShapeFixtures) {
  ExperimentReport r;
  r.sizes = {20, 40};
  auto row = [](std::size_t size, const char* variant, double avg, std::size_t max) {
    ExperimentRow x;
    x.size = size;
    x.variant = variant;
    x.avg_depth = avg;
    x.max_depth = max;
    x.intents = 1;
    return x;
  };
  r.rows = {row(20, "baseline", 4.2, 5), row(20, "reshaped", 2.3, 3), row(40, "baseline", 4.4, 5),
            row(40, "reshaped", 2.2, 3)};
  auto md = render_markdown(r);
  EXPECT_NE(md.find("| baseline avg. query depth | 4.2 | 4.4 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| reshaped avg. query depth | 2.3 | 2.2 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| baseline max. query depth | 5.0 | 5.0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("build time ratio"), std::string::npos);
  auto csv = render_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Report, EmptyReportIsHeaderOnly) {
  ExperimentReport r;
  auto md = render_markdown(r);
  EXPECT_NE(md.find("|  |\n|---|\n| attributes |\n"), std::string::npos) << md;
  EXPECT_EQ(render_csv(r, false),
            "size,repetition,variant,intents,avg_depth,max_depth,entity_count,blank_node_count,"
            "triple_count,storage_bytes,checked,mismatches,error\n");
}

TEST(Experiment, MinimalGrid) {
  auto corpus = generate_synthetic(small_synth());
  ExperimentConfig cfg;
  cfg.sizes = {corpus.mapping.attributes.size()};
  cfg.repetitions = 1;
  auto r = run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].variant, "baseline");
  EXPECT_EQ(r.rows[1].variant, "reshaped");
  EXPECT_TRUE(r.rows[0].error.empty()) << r.rows[0].error;
  // Full subset: the stats are those of the full builds.
  auto base = build_baseline(corpus.ontology, corpus.mapping, corpus.tables);
  EXPECT_EQ(r.rows[0].triple_count, base.report.graph_stats.triple_count);
  EXPECT_EQ(r.rows[0].entity_count, base.report.graph_stats.entity_count);
}

TEST(Experiment, OversizedSubsetFailsOnlyItsCells) {
  auto corpus = generate_synthetic(small_synth());
  ExperimentConfig cfg;
  cfg.sizes = {4, corpus.mapping.attributes.size() + 1};
  cfg.repetitions = 2;
  auto r = run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping);
  ASSERT_EQ(r.rows.size(), 8u);
  for (const auto& row : r.rows) EXPECT_EQ(row.error.empty(), row.size == 4) << row.error;
  EXPECT_EQ(r.summary(4, "baseline")->cells, 2u);
  EXPECT_EQ(r.summary(cfg.sizes[1], "baseline")->cells, 0u);
}

TEST(Experiment, GridProperties) {
  auto cfg = small_grid();
  auto corpus = generate_synthetic(cfg.synth);
  auto r = run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping);
  ASSERT_EQ(r.rows.size(), cfg.sizes.size() * cfg.repetitions * 2);
  for (std::size_t i = 0; i < r.rows.size(); i += 2) {
    const auto& b = r.rows[i];
    const auto& s = r.rows[i + 1];
    ASSERT_TRUE(b.error.empty()) << b.error;
    EXPECT_EQ(s.blank_node_count, 0u);
    EXPECT_LE(s.avg_depth, b.avg_depth);
    EXPECT_LE(s.max_depth, b.max_depth);
    EXPECT_EQ(b.mismatches, 0u);
    EXPECT_EQ(b.checked, b.intents);
  }
  // Aggregates recompute from the raw rows.
  for (const auto& sum : r.summaries()) {
    double avg = 0, max = 0, n = 0;
    for (const auto& row : r.rows) {
      if (row.size == sum.size && row.variant == sum.variant) {
        avg += row.avg_depth;
        max += static_cast<double>(row.max_depth);
        ++n;
      }
    }
    EXPECT_DOUBLE_EQ(sum.avg_depth, avg / n);
    EXPECT_DOUBLE_EQ(sum.max_depth, max / n);
    EXPECT_EQ(sum.cells, static_cast<std::size_t>(n));
  }
}

TEST(Experiment, SameSeedSameCsvAcrossThreadCounts) {
  auto cfg = small_grid();
  auto corpus = generate_synthetic(cfg.synth);
  auto first = render_csv(run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping), false);
  cfg.threads = 1;
  auto second = render_csv(run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping), false);
  EXPECT_EQ(first, second);
  cfg.seed += 1;
  EXPECT_NE(render_csv(run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping), false), first);
}

TEST(Experiment, WritesArtifacts) {
  namespace fs = std::filesystem;
  auto cfg = small_grid();
  cfg.output_dir = (fs::temp_directory_path() / "orkg_bench_artifacts").string();
  fs::remove_all(cfg.output_dir);
  auto corpus = generate_synthetic(cfg.synth);
  auto r = run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping);
  fs::path dir(cfg.output_dir);
  EXPECT_EQ(test::read_file((dir / "report.md").string()), render_markdown(r));
  EXPECT_EQ(test::read_file((dir / "report.csv").string()), render_csv(r));
  auto jsonl = test::read_file((dir / "builds.jsonl").string());
  EXPECT_EQ(static_cast<std::size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')), r.rows.size());
  // Graphs of the first repetition, one per size and variant.
  std::size_t graphs = 0;
  for (const auto& e : fs::directory_iterator(dir / "cells")) {
    ++graphs;
    EXPECT_NO_THROW(parse_ntriples(test::read_file(e.path().string())));
  }
  EXPECT_EQ(graphs, cfg.sizes.size() * 2);
  fs::remove_all(cfg.output_dir);
}
