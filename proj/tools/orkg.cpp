// orkg: reshape a domain ontology, build knowledge graphs from CSV tables and
// compare the queries each graph needs.
//
// Exit status: 0 success, 1 internal error, 2 bad input.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "orkg/bench.hpp"
#include "orkg/error.hpp"
#include "orkg/kgen.hpp"
#include "orkg/mapping.hpp"
#include "orkg/ontology.hpp"
#include "orkg/query.hpp"
#include "orkg/rdf.hpp"
#include "orkg/reshape.hpp"

namespace fs = std::filesystem;
using namespace orkg;

namespace {

struct Options {
  std::string ontology;
  std::string mapping;
  std::vector<std::string> data;
  std::string intents;
  std::string intent = "all";
  std::string sparql;
  std::string graph;
  std::string config;
  std::string out = "out";
  std::string variant = "both";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool check_equivalence = false;
  bool verbose = false;
};

Options opt;

void note(const std::string& msg) {
  if (opt.verbose) std::cerr << msg << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  note("wrote " + path.string());
}

fs::path out_dir() {
  fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + opt.out + "': " + ec.message());
  return dir;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string(flag) + " is required");
}

OntologyGraph load_ontology_file() {
  require(opt.ontology, "--ontology");
  return load_ontology(parse_turtle(read_file(opt.ontology)));
}

// Table name is the file stem.
std::vector<TableData> load_tables() {
  std::vector<TableData> out;
  for (const auto& path : opt.data) out.push_back(load_csv(read_file(path), fs::path(path).stem().string()));
  return out;
}

MappingSpec load_mapping(const OntologyGraph& o, const std::vector<TableData>& tables) {
  require(opt.mapping, "--mapping");
  MappingSpec m = parse_mapping(read_file(opt.mapping));
  auto violations = validate_mapping(m, o, tables);
  if (!violations.empty()) {
    std::string msg = "mapping '" + opt.mapping + "' is invalid:";
    for (const auto& v : violations) msg += "\n  " + to_string(v.kind) + ": " + v.message;
    throw InvalidMappingError(msg);
  }
  return m;
}

std::vector<KgVariant> variants() {
  if (opt.variant == "both") return {KgVariant::kBaseline, KgVariant::kReshaped};
  return {parse_variant(opt.variant)};
}

// ---------------------------------------------------------------------------

int cmd_annotate() {
  auto o = load_ontology_file();
  if (opt.data.empty()) throw InputError("--data is required");
  auto tables = load_tables();
  MappingSpec merged;
  merged.prefixes = o.prefixes;
  std::ostringstream report;
  for (const auto& t : tables) {
    auto [m, r] = auto_annotate(t, o);
    merged.tables.insert(merged.tables.end(), m.tables.begin(), m.tables.end());
    merged.attributes.insert(merged.attributes.end(), m.attributes.begin(), m.attributes.end());
    report << "table " << t.name << '\n';
    for (const auto& a : r.auto_bound) report << "  bound " << a << '\n';
    for (const auto& a : r.elevated) report << "  elevated " << a << '\n';
    for (const auto& a : r.unbound) report << "  unbound " << a << '\n';
    for (const auto& [a, candidates] : r.ambiguous) {
      report << "  ambiguous " << a << ':';
      for (const auto& c : candidates) report << " <" << c << '>';
      report << '\n';
    }
  }
  auto dir = out_dir();
  write_file(dir / "mapping.map", serialize_mapping(merged));
  write_file(dir / "annotation.txt", report.str());
  return 0;
}

int cmd_reshape() {
  auto o = load_ontology_file();
  auto tables = load_tables();
  auto m = load_mapping(o, tables);
  auto s = reshape(o, m);
  for (const auto& entry : s.connector_log) {
    if (entry.warning) std::cerr << "warning: " << entry.message << '\n';
  }
  auto dir = out_dir();
  write_file(dir / "schema.ttl", serialize_schema_turtle(s));
  write_file(dir / "provenance.txt", serialize_provenance(s));
  return 0;
}

int cmd_build() {
  auto o = load_ontology_file();
  auto tables = load_tables();
  if (tables.empty()) throw InputError("--data is required");
  auto m = load_mapping(o, tables);
  auto dir = out_dir();
  std::string reports;
  for (auto v : variants()) {
    KgBuild b = v == KgVariant::kBaseline ? build_baseline(o, m, tables) : build_reshaped(reshape(o, m), m, tables);
    write_file(dir / (variant_name(v) + ".nt"), serialize_ntriples(b.graph));
    reports += b.report.to_json() + "\n";
    std::cout << b.report.to_json() << '\n';
  }
  write_file(dir / "build_report.jsonl", reports);
  return 0;
}

int cmd_query_sparql() {
  require(opt.graph, "--graph");
  BgpQuery q = parse_sparql(read_file(opt.sparql));
  Graph g = parse_ntriples(read_file(opt.graph));
  auto dir = out_dir();
  write_file(dir / "result.csv", result_csv(evaluate(q, g)));
  std::cout << "depth " << query_depth(q) << '\n';
  return 0;
}

int cmd_query() {
  if (!opt.sparql.empty()) return cmd_query_sparql();
  auto o = load_ontology_file();
  auto tables = load_tables();
  if (tables.empty()) throw InputError("--data is required");
  auto m = load_mapping(o, tables);
  require(opt.intents, "--intents");
  auto all = parse_intents(read_file(opt.intents));
  std::vector<QueryIntent> chosen;
  for (const auto& i : all) {
    if (opt.intent == "all" || i.name == opt.intent) chosen.push_back(i);
  }
  if (chosen.empty()) throw InputError("no intent named '" + opt.intent + "' in " + opt.intents);

  auto vs = opt.check_equivalence ? std::vector<KgVariant>{KgVariant::kBaseline, KgVariant::kReshaped} : variants();
  ReshapedSchema s = reshape(o, m);
  std::map<KgVariant, Graph> graphs;
  for (auto v : vs) {
    graphs[v] = (v == KgVariant::kBaseline ? build_baseline(o, m, tables) : build_reshaped(s, m, tables)).graph;
  }
  auto dir = out_dir();
  std::size_t mismatches = 0;
  for (const auto& intent : chosen) {
    std::map<KgVariant, ResultSet> results;
    for (auto v : vs) {
      BgpQuery q = v == KgVariant::kBaseline ? synthesize(intent, o, m) : synthesize(intent, s, m);
      std::string stem = intent.name + "." + variant_name(v);
      write_file(dir / (stem + ".rq"), serialize_sparql(q));
      results[v] = evaluate(q, graphs.at(v));
      write_file(dir / (stem + ".csv"), result_csv(results[v]));
      std::cout << intent.name << ' ' << variant_name(v) << " depth=" << query_depth(q)
                << " rows=" << results[v].rows.size() << '\n';
    }
    if (opt.check_equivalence) {
      bool same = results[KgVariant::kBaseline].rows == results[KgVariant::kReshaped].rows;
      mismatches += !same;
      std::cout << intent.name << (same ? " equivalent" : " DIFFERS") << '\n';
    }
  }
  if (mismatches) {
    std::cerr << "error: " << mismatches << " intent(s) answer differently on the two graphs\n";
    return 1;
  }
  return 0;
}

int cmd_bench() {
  require(opt.config, "--config");
  ExperimentConfig cfg =
      opt.config == "demo" ? demo_experiment_config() : parse_experiment_config(read_file(opt.config));
  if (opt.seed_given) cfg.seed = opt.seed;
  cfg.output_dir = out_dir().string();
  SynthCorpus corpus;
  if (!opt.ontology.empty()) {
    corpus.ontology = load_ontology_file();
    corpus.tables = load_tables();
    corpus.mapping = load_mapping(corpus.ontology, corpus.tables);
  } else {
    corpus = generate_synthetic(cfg.synth);
    note("generated synthetic corpus with " + std::to_string(corpus.mapping.attributes.size()) + " attributes");
  }
  auto report = run_experiment(cfg, corpus.ontology, corpus.tables, corpus.mapping);
  std::cout << render_markdown(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology reshaping for knowledge graph construction"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", opt.verbose, "Log written files to stderr");

  auto add_inputs = [](CLI::App* sub) {
    sub->add_option("--ontology", opt.ontology, "Domain ontology (Turtle)");
    sub->add_option("--mapping", opt.mapping, "Mapping file");
    sub->add_option("--data", opt.data, "CSV table; the file stem names the table")->take_all();
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Random seed")->each([](const std::string&) { opt.seed_given = true; });
  };

  auto* annotate = app.add_subcommand("annotate", "Propose a mapping for CSV tables");
  add_inputs(annotate);
  auto* reshape_cmd = app.add_subcommand("reshape", "Write the reshaped schema and its provenance");
  add_inputs(reshape_cmd);
  auto* build = app.add_subcommand("build", "Materialize knowledge graphs");
  add_inputs(build);
  build->add_option("--variant", opt.variant, "baseline, reshaped or both")->capture_default_str();
  auto* query = app.add_subcommand("query", "Synthesize and evaluate intents, or run a SPARQL file");
  add_inputs(query);
  query->add_option("--intents", opt.intents, "Intent file");
  query->add_option("--intent", opt.intent, "Intent name, or all")->capture_default_str();
  query->add_option("--variant", opt.variant, "baseline, reshaped or both")->capture_default_str();
  query->add_flag("--check-equivalence", opt.check_equivalence, "Compare results on both graphs");
  query->add_option("--sparql", opt.sparql, "SPARQL file to evaluate against --graph");
  query->add_option("--graph", opt.graph, "N-Triples graph for --sparql");
  auto* bench = app.add_subcommand("bench", "Run the sub-sampling experiment");
  add_inputs(bench);
  bench->add_option("--config", opt.config, "Experiment config file, or demo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (opt.variant != "both") parse_variant(opt.variant);
    if (*annotate) return cmd_annotate();
    if (*reshape_cmd) return cmd_reshape();
    if (*build) return cmd_build();
    if (*query) return cmd_query();
    if (*bench) return cmd_bench();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
