#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "orkg/error.hpp"
#include "orkg/mapping.hpp"
#include "test_support.hpp"

using namespace orkg;

namespace {

const std::string kW = "http://example.org/welding#";

OntologyGraph demo_ontology() {
  return load_ontology(parse_turtle(test::read_file(test::data_path("demo/welding.ttl"))));
}

TableData demo_table(const std::string& name) {
  return load_csv(test::read_file(test::data_path("demo/" + name + ".csv")), name);
}

// Standalone cell classifier used as the typing oracle.
Cell::Kind oracle_kind(const std::string& s) {
  if (s.empty()) return Cell::Kind::kNull;
  bool sign = s[0] == '+' || s[0] == '-';
  std::string body = sign ? s.substr(1) : s;
  if (body.empty()) return Cell::Kind::kString;
  std::size_t dots = 0, digits = 0;
  for (char c : body) {
    if (c == '.') {
      ++dots;
    } else if (c >= '0' && c <= '9') {
      ++digits;
    } else {
      return Cell::Kind::kString;
    }
  }
  if (digits == 0) return Cell::Kind::kString;
  if (dots == 0) return Cell::Kind::kInteger;
  if (dots == 1) return Cell::Kind::kDecimal;
  return Cell::Kind::kString;
}

}  // namespace

TEST(LoadCsv, HeaderOnly) {
  auto t = load_csv("a,b\n", "T");
  EXPECT_EQ(t.attributes, (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(t.rows.empty());
}

TEST(LoadCsv, TypingRule) {
  auto t = load_csv("a,b\n1,x\n", "T");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], (Cell{Cell::Kind::kInteger, "1"}));
  EXPECT_EQ(t.rows[0][1], (Cell{Cell::Kind::kString, "x"}));
  auto u = load_csv("a,b,c,d\n-3,2.5,,1.2.3\n", "U");
  EXPECT_EQ(u.rows[0][0].kind, Cell::Kind::kInteger);
  EXPECT_EQ(u.rows[0][1].kind, Cell::Kind::kDecimal);
  EXPECT_EQ(u.rows[0][2].kind, Cell::Kind::kNull);
  EXPECT_EQ(u.rows[0][3].kind, Cell::Kind::kString);
}

TEST(LoadCsv, QuotingAndCrlf) {
  auto t = load_csv("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",2\r\n", "T");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0].text, "x, y");
  EXPECT_EQ(t.rows[0][1].text, "say \"hi\"");
  EXPECT_EQ(t.rows[1][0].text, "multi\nline");
  EXPECT_EQ(load_csv(write_csv(t), "T").rows, t.rows);
}

TEST(LoadCsv, Errors) {
  EXPECT_THROW(load_csv("", "T"), EmptyHeaderError);
  EXPECT_THROW(load_csv("a,,b\n", "T"), EmptyHeaderError);
  EXPECT_THROW(load_csv("a,a\n", "T"), DuplicateAttributeError);
  try {
    load_csv("a,b\n1,2\n3\n", "T");
    FAIL();
  } catch (const RaggedRowError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadCsv, BundledSampleMatchesCellClassifier) {
  auto t = demo_table("WeldingOperation");
  ASSERT_EQ(t.rows.size(), 100u);
  for (const auto& row : t.rows) {
    for (const auto& cell : row) EXPECT_EQ(cell.kind, oracle_kind(cell.text)) << cell.text;
  }
  EXPECT_TRUE(t.is_numeric_column(*t.column("currentMean")));
  EXPECT_FALSE(t.is_numeric_column(*t.column("carModel")));
}

TEST(AutoAnnotate, DemoMachineTable) {
  auto o = demo_ontology();
  auto [m, report] = auto_annotate(demo_table("Machine"), o);
  ASSERT_EQ(m.tables.size(), 1u);
  EXPECT_EQ(m.tables[0].cls, kW + "Machine");
  const auto* key = m.attribute("Machine", "machineID");
  ASSERT_NE(key, nullptr);
  EXPECT_EQ(key->kind, BindingKind::kClassKey);
  EXPECT_EQ(key->iri, kW + "Machine");
  const auto* type = m.attribute("Machine", "machineType");
  ASSERT_NE(type, nullptr);
  EXPECT_EQ(type->kind, BindingKind::kDataProperty);
  EXPECT_EQ(type->iri, kW + "machineType");
  EXPECT_EQ(report.elevated, std::vector<std::string>{"machineID"});
  EXPECT_TRUE(report.unbound.empty());
}

TEST(AutoAnnotate, ReproducesBundledMapping) {
  auto o = demo_ontology();
  auto bundled = parse_mapping(test::read_file(test::data_path("demo/welding.map")));
  for (const char* name : {"WeldingOperation", "Machine"}) {
    auto [m, _] = auto_annotate(demo_table(name), o);
    EXPECT_EQ(m.tables, std::vector<TableBinding>{*bundled.table(name)});
    std::vector<AttributeBinding> expected;
    for (const auto* a : bundled.attributes_of(name)) expected.push_back(*a);
    EXPECT_EQ(m.attributes, expected);
  }
}

TEST(AutoAnnotate, AllDataPropertiesNoElevation) {
  auto o = demo_ontology();
  auto [m, report] = auto_annotate(load_csv("machine_type,controller-firmware\n", "MACHINE"), o);
  EXPECT_TRUE(report.elevated.empty());
  EXPECT_TRUE(report.unbound.empty());
  EXPECT_EQ(report.auto_bound.size(), 2u);
}

TEST(AutoAnnotate, ElevationNeedsClassTarget) {
  auto o = demo_ontology();
  auto [m, report] = auto_annotate(load_csv("sensorID,lineName\n", "Machine"), o);
  EXPECT_EQ(report.unbound, std::vector<std::string>{"sensorID"});
  EXPECT_TRUE(report.elevated.empty());
  EXPECT_EQ(report.auto_bound, std::vector<std::string>{"lineName"});
  EXPECT_EQ(m.attribute("Machine", "sensorID"), nullptr);
}

TEST(AutoAnnotate, AmbiguityIsReportedNotGuessed) {
  auto o = demo_ontology();
  o.datatype_properties[kW + "machine_type"] = {kW + "Machine"};
  auto [m, report] = auto_annotate(load_csv("machineType\n", "Machine"), o);
  ASSERT_EQ(report.ambiguous.size(), 1u);
  EXPECT_EQ(report.ambiguous[0].second.size(), 2u);
  EXPECT_TRUE(m.attributes.empty());
}

TEST(AutoAnnotate, UnknownTableClass) {
  EXPECT_THROW(auto_annotate(load_csv("a\n", "Spaceship"), demo_ontology()), UnknownTableClassError);
}

TEST(AutoAnnotate, PartitionIdempotenceAndClosure) {
  auto o = demo_ontology();
  std::mt19937 rng(3);
  std::vector<std::string> pool = {"machineID", "programID", "sensorID", "qValue", "currentMean",
                                   "foo", "lineName", "carNAME", "car_model", "bar_id", "capID"};
  for (int trial = 0; trial < 30; ++trial) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t n = 1 + rng() % pool.size();
    std::string header;
    for (std::size_t i = 0; i < n; ++i) header += (i ? "," : "") + pool[i];
    auto t = load_csv(header + "\n", "WeldingOperation");
    auto [m, r] = auto_annotate(t, o);
    std::multiset<std::string> parts(r.auto_bound.begin(), r.auto_bound.end());
    parts.insert(r.elevated.begin(), r.elevated.end());
    parts.insert(r.unbound.begin(), r.unbound.end());
    for (const auto& [a, _] : r.ambiguous) parts.insert(a);
    EXPECT_EQ(parts, std::multiset<std::string>(t.attributes.begin(), t.attributes.end()));
    for (const auto& a : m.attributes) EXPECT_TRUE(o.contains_iri(a.iri));
    EXPECT_EQ(auto_annotate(t, o).first, m);
  }
}

TEST(MappingDsl, EmptyFile) { EXPECT_EQ(parse_mapping(""), MappingSpec{}); }

TEST(MappingDsl, ThreeLineFile) {
  auto m = parse_mapping(
      "table T => class <http://ex/A>\n"
      "attr T.x => dataprop <http://ex/x>\n"
      "hint <http://ex/A> -[<http://ex/p>]-> <http://ex/B>\n");
  EXPECT_EQ(m.tables, (std::vector<TableBinding>{{"T", "http://ex/A"}}));
  EXPECT_EQ(m.attributes,
            (std::vector<AttributeBinding>{{"T", "x", BindingKind::kDataProperty, "http://ex/x"}}));
  EXPECT_EQ(m.hints, (std::vector<ConnectionHint>{{"http://ex/A", "http://ex/p", "http://ex/B"}}));
}

TEST(MappingDsl, SyntaxErrorsCarryLine) {
  try {
    parse_mapping("# ok\n\ntable T class ex:A\n");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_mapping("table T => class zz:A\n"), SyntaxError);
  EXPECT_THROW(parse_mapping("attr Tx => dataprop <http://a>\n"), SyntaxError);
  EXPECT_THROW(parse_mapping("frobnicate\n"), SyntaxError);
}

TEST(MappingDsl, BundledRoundTrip) {
  auto m = parse_mapping(test::read_file(test::data_path("demo/welding.map")));
  EXPECT_EQ(parse_mapping(serialize_mapping(m)), m);
}

TEST(ValidateMapping, DemoMappingIsValid) {
  auto o = demo_ontology();
  auto m = parse_mapping(test::read_file(test::data_path("demo/welding.map")));
  EXPECT_TRUE(validate_mapping(m, o, {demo_table("WeldingOperation"), demo_table("Machine")}).empty());
}

TEST(ValidateMapping, UnknownIri) {
  auto o = demo_ontology();
  auto m = parse_mapping(test::read_file(test::data_path("demo/welding.map")));
  m.attributes[3].iri = kW + "noSuchProperty";
  auto v = validate_mapping(m, o, {});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kUnknownIri);
}

TEST(ValidateMapping, DuplicateBinding) {
  auto o = demo_ontology();
  auto m = parse_mapping(test::read_file(test::data_path("demo/welding.map")));
  m.attributes.push_back(m.attributes[4]);
  auto v = validate_mapping(m, o, {});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kDuplicateBinding);
}

TEST(ValidateMapping, KindAndTableChecks) {
  auto o = demo_ontology();
  MappingSpec m;
  m.tables.push_back({"T", kW + "operationTime"});
  m.attributes.push_back({"U", "x", BindingKind::kClassKey, kW + "qValue"});
  m.hints.push_back({kW + "Machine", kW + "qValue", kW + "Car"});
  auto v = validate_mapping(m, o, {load_csv("y\n", "T")});
  std::vector<Violation::Kind> kinds;
  for (const auto& x : v) kinds.push_back(x.kind);
  EXPECT_EQ(kinds, (std::vector<Violation::Kind>{Violation::Kind::kWrongKind,
                                                 Violation::Kind::kUnboundTable,
                                                 Violation::Kind::kWrongKind,
                                                 Violation::Kind::kBadHint}));
}
