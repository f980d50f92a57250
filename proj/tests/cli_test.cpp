#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "orkg/mapping.hpp"
#include "orkg/ontology.hpp"
#include "test_support.hpp"

using namespace orkg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out, err;
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("orkg_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args, const fs::path& dir) {
  auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  std::string cmd = std::string(ORKG_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = test::read_file(out.string());
  r.err = test::read_file(err.string());
  return r;
}

std::string demo(const std::string& file) { return test::data_path("demo/" + file); }

std::string demo_inputs() {
  return "--ontology " + demo("welding.ttl") + " --mapping " + demo("welding.map") + " --data " +
         demo("WeldingOperation.csv") + " " + demo("Machine.csv");
}

}  // namespace

TEST(Cli, AnnotatedMappingValidates) {
  auto dir = scratch("annotate");
  auto r = run("annotate --ontology " + demo("welding.ttl") + " --data " + demo("WeldingOperation.csv") + " " +
                   demo("Machine.csv") + " --out " + (dir / "o").string(),
               dir);
  ASSERT_EQ(r.status, 0) << r.err;
  auto o = load_ontology(parse_turtle(test::read_file(demo("welding.ttl"))));
  auto m = parse_mapping(test::read_file((dir / "o" / "mapping.map").string()));
  std::vector<TableData> tables;
  for (const char* n : {"WeldingOperation", "Machine"}) {
    tables.push_back(load_csv(test::read_file(demo(std::string(n) + ".csv")), n));
  }
  EXPECT_TRUE(validate_mapping(m, o, tables).empty());
  EXPECT_EQ(m.tables.size(), 2u);
}

TEST(Cli, UnmatchableTableIsReportedNotRejected) {
  auto dir = scratch("unmatched");
  {
    std::ofstream csv(dir / "Machine.csv");
    csv << "foo,bar\n1,2\n";
  }
  auto r = run("annotate --ontology " + demo("welding.ttl") + " --data " + (dir / "Machine.csv").string() +
                   " --out " + (dir / "o").string(),
               dir);
  ASSERT_EQ(r.status, 0) << r.err;
  auto m = parse_mapping(test::read_file((dir / "o" / "mapping.map").string()));
  EXPECT_TRUE(m.attributes.empty());
  ASSERT_EQ(m.tables.size(), 1u);
  EXPECT_EQ(m.tables.front().table, "Machine");
  auto report = test::read_file((dir / "o" / "annotation.txt").string());
  EXPECT_NE(report.find("unbound foo"), std::string::npos) << report;
  EXPECT_NE(report.find("unbound bar"), std::string::npos) << report;
}

TEST(Cli, InputErrorsExitTwo) {
  auto dir = scratch("errors");
  auto r = run("reshape --ontology /no/such/file.ttl --mapping " + demo("welding.map") + " --out " +
                   (dir / "o").string(),
               dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("/no/such/file.ttl"), std::string::npos) << r.err;
  EXPECT_EQ(run("build " + demo_inputs() + " --variant sideways --out " + (dir / "o").string(), dir).status, 2);
  EXPECT_EQ(run("frobnicate", dir).status, 2);
  EXPECT_EQ(run("bench --config " + (dir / "missing.cfg").string(), dir).status, 2);
  {
    std::ofstream bad(dir / "bad.map");
    bad << "table WeldingOperation => class <http://example.org/welding#Nope>\n";
  }
  EXPECT_EQ(run("reshape --ontology " + demo("welding.ttl") + " --mapping " + (dir / "bad.map").string() +
                    " --out " + (dir / "o").string(),
                dir)
                .status,
            2);
  EXPECT_EQ(run("--help", dir).status, 0);
}

TEST(Cli, PipelineAnswersEquivalently) {
  auto dir = scratch("pipeline");
  auto out = (dir / "o").string();
  ASSERT_EQ(run("reshape " + demo_inputs() + " --out " + out, dir).status, 0);
  ASSERT_EQ(run("build " + demo_inputs() + " --variant both --out " + out, dir).status, 0);
  auto r = run("query " + demo_inputs() + " --intents " + demo("intents.txt") +
                   " --intent all --check-equivalence --out " + out,
               dir);
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.find("DIFFERS"), std::string::npos);
  EXPECT_NE(r.out.find("equivalent"), std::string::npos);
  // The synthesized query files run on the materialized graphs as well.
  auto direct = run("query --sparql " + (dir / "o" / "currents.reshaped.rq").string() + " --graph " +
                        (dir / "o" / "reshaped.nt").string() + " --out " + (dir / "s").string(),
                    dir);
  ASSERT_EQ(direct.status, 0) << direct.err;
  EXPECT_EQ(test::read_file((dir / "s" / "result.csv").string()),
            test::read_file((dir / "o" / "currents.reshaped.csv").string()));
}

TEST(Cli, ReshapedBuildReportHasNoBlankNodes) {
  auto dir = scratch("build");
  auto r = run("build " + demo_inputs() + " --variant reshaped --out " + (dir / "o").string(), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  auto report = test::read_file((dir / "o" / "build_report.jsonl").string());
  EXPECT_NE(report.find("\"variant\":\"reshaped\""), std::string::npos);
  EXPECT_NE(report.find("\"blank_node_count\":0,"), std::string::npos) << report;
  EXPECT_FALSE(fs::exists(dir / "o" / "baseline.nt"));
}

TEST(Cli, OutputsRegenerateAndInputsStay) {
  auto dir = scratch("regen");
  std::vector<std::string> inputs = {demo("welding.ttl"), demo("welding.map"), demo("WeldingOperation.csv"),
                                     demo("Machine.csv")};
  std::vector<std::string> before;
  for (const auto& f : inputs) before.push_back(test::read_file(f));
  auto produce = [&] {
    auto out = (dir / "o").string();
    fs::remove_all(out);
    EXPECT_EQ(run("reshape " + demo_inputs() + " --out " + out, dir).status, 0);
    EXPECT_EQ(run("build " + demo_inputs() + " --out " + out, dir).status, 0);
    std::string all;
    for (const char* f : {"schema.ttl", "provenance.txt", "baseline.nt", "reshaped.nt"}) {
      all += test::read_file((dir / "o" / f).string());
    }
    return all;
  };
  EXPECT_EQ(produce(), produce());
  for (std::size_t i = 0; i < inputs.size(); ++i) EXPECT_EQ(test::read_file(inputs[i]), before[i]);
}

TEST(Cli, BenchIsReproducible) {
  auto dir = scratch("bench");
  {
    std::ofstream cfg(dir / "small.cfg");
    cfg << "sizes 4 8\nrepetitions 2\nseed 3\nsynth rows=30\n";
  }
  auto csv = [&](const std::string& name, const std::string& seed) {
    auto r = run("bench --config " + (dir / "small.cfg").string() + " --seed " + seed + " --out " +
                     (dir / name).string(),
                 dir);
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("avg. query depth"), std::string::npos);
    // Drop the trailing timing column.
    std::string text = test::read_file((dir / name / "report.csv").string()), out;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  EXPECT_EQ(csv("a", "11"), csv("b", "11"));
  EXPECT_NE(csv("a", "11"), csv("c", "12"));
}
