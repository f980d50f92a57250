#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <set>

#include "orkg/error.hpp"
#include "orkg/rdf.hpp"
#include "test_support.hpp"

using namespace orkg;

namespace {

Term ex(const std::string& local) { return Term::iri("http://ex/" + local); }

}  // namespace

TEST(Turtle, EmptyDocument) { EXPECT_EQ(parse_turtle("").size(), 0u); }

TEST(Turtle, SingleStatementExpandsPrefix) {
  Graph g = parse_turtle("@prefix ex: <http://ex/> . ex:a ex:p ex:b .");
  ASSERT_EQ(g.size(), 1u);
  EXPECT_TRUE(g.contains(Triple{ex("a"), ex("p"), ex("b")}));
  EXPECT_EQ(g.prefixes().at("ex"), "http://ex/");
}

TEST(Turtle, ContinuationsMatchHandExpandedStatements) {
  const char* compact = R"(@prefix ex: <http://ex/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
ex:m1 a ex:Machine ;
  ex:name "M one" , "M1" ;
  ex:power 42 , 7.5 ;
  ex:hasPart ex:h1 , ex:h2 , _:x1 .
ex:h1 ex:weight "3"^^xsd:integer ; ex:ok "yes"^^xsd:string .
_:x1 ex:p ex:m1 ;
  ex:q "line\nbreak \"quoted\"" .
)";
  const char* expanded = R"(<http://ex/m1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/Machine> .
<http://ex/m1> <http://ex/name> "M one" .
<http://ex/m1> <http://ex/name> "M1" .
<http://ex/m1> <http://ex/power> "42"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://ex/m1> <http://ex/power> "7.5"^^<http://www.w3.org/2001/XMLSchema#decimal> .
<http://ex/m1> <http://ex/hasPart> <http://ex/h1> .
<http://ex/m1> <http://ex/hasPart> <http://ex/h2> .
<http://ex/m1> <http://ex/hasPart> _:x1 .
<http://ex/h1> <http://ex/weight> "3"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://ex/h1> <http://ex/ok> "yes" .
_:x1 <http://ex/p> <http://ex/m1> .
_:x1 <http://ex/q> "line\nbreak \"quoted\"" .
)";
  Graph a = parse_turtle(compact);
  Graph b = parse_ntriples(expanded);
  EXPECT_EQ(a.size(), 12u);
  EXPECT_EQ(a, b);
}

TEST(Turtle, PrefixExpansionInvariance) {
  Graph a = parse_turtle("@prefix ex: <http://ex/> . ex:a ex:p ex:b ; ex:q 1 .");
  Graph b = parse_turtle("<http://ex/a> <http://ex/p> <http://ex/b> ; <http://ex/q> 1 .");
  EXPECT_EQ(a, b);
}

TEST(Turtle, DuplicatePrefixRejected) {
  EXPECT_THROW(parse_turtle("@prefix ex: <http://a/> . @prefix ex: <http://b/> ."),
               DuplicatePrefixError);
  // Rebinding to the same IRI is harmless.
  EXPECT_NO_THROW(parse_turtle("@prefix ex: <http://a/> . @prefix ex: <http://a/> ."));
}

TEST(Turtle, OutOfSubsetConstructsAreSyntaxErrors) {
  EXPECT_THROW(parse_turtle("<http://a> <http://p> ( 1 2 ) ."), SyntaxError);
  EXPECT_THROW(parse_turtle("<http://a> <http://p> [ <http://q> 1 ] ."), SyntaxError);
  EXPECT_THROW(parse_turtle("<http://a> <http://p> \"x\"@en ."), SyntaxError);
  EXPECT_THROW(parse_turtle("ex:a ex:p ex:b ."), SyntaxError);  // undeclared prefix
  try {
    parse_turtle("@prefix ex: <http://ex/> .\nex:a ex:p ex:b\nex:c ex:p ex:d .");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(NTriples, EmptyGraphSerializesToEmptyDocument) {
  EXPECT_EQ(serialize_ntriples(Graph{}), "");
  EXPECT_EQ(parse_ntriples("").size(), 0u);
}

TEST(NTriples, OneTripleIsOneLine) {
  Graph g;
  g.insert(ex("a"), ex("p"), Term::literal("5", LiteralType::kInteger));
  std::string doc = serialize_ntriples(g);
  EXPECT_EQ(std::count(doc.begin(), doc.end(), '\n'), 1);
  EXPECT_TRUE(doc.ends_with(" .\n"));
}

TEST(NTriples, MissingFinalDotIsSyntaxError) {
  EXPECT_THROW(parse_ntriples("<http://a> <http://p> <http://b>\n"), SyntaxError);
  EXPECT_THROW(parse_ntriples("<http://a> <http://p> <http://b> . extra\n"), SyntaxError);
  EXPECT_THROW(parse_ntriples("\"lit\" <http://p> <http://b> .\n"), SyntaxError);
  EXPECT_THROW(parse_ntriples("<http://a> _:b <http://b> .\n"), SyntaxError);
}

TEST(NTriples, RandomGraphRoundTrip) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = test::random_graph(rng, 50);
    std::string doc = serialize_ntriples(g);
    Graph back = parse_ntriples(doc);
    EXPECT_EQ(back, g);
    EXPECT_EQ(serialize_ntriples(back), doc);
  }
}

TEST(NTriples, OutputIsCanonicallySorted) {
  std::mt19937 rng(99);
  Graph g = test::random_graph(rng, 60);
  std::string doc = serialize_ntriples(g);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (auto end = doc.find('\n'); end != std::string::npos; end = doc.find('\n', start)) {
    lines.push_back(doc.substr(start, end - start));
    start = end + 1;
  }
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(TurtleWriter, RoundTripsThroughParser) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = test::random_graph(rng, 40);
    g.bind_prefix("ex", "http://ex/");
    EXPECT_EQ(parse_turtle(serialize_turtle(g)), g);
  }
}

TEST(GraphStats, EmptyGraph) { EXPECT_EQ(graph_stats(Graph{}), (GraphStats{0, 0, 0, 0})); }

TEST(GraphStats, CountsEntitiesAndBlankNodes) {
  Graph g;
  g.insert(ex("a"), ex("p"), Term::blank("b1"));
  g.insert(Term::blank("b1"), ex("q"), Term::literal("5", LiteralType::kInteger));
  GraphStats s = graph_stats(g);
  EXPECT_EQ(s.entity_count, 1u);
  EXPECT_EQ(s.blank_node_count, 1u);
  EXPECT_EQ(s.triple_count, 2u);
  EXPECT_EQ(s.storage_bytes, serialize_ntriples(g).size());
}

TEST(GraphStats, MatchesTextScanOfSerialization) {
  std::mt19937 rng(5);
  Graph g = test::random_graph(rng, 80);
  EXPECT_EQ(graph_stats(g), test::stats_by_text_scan(serialize_ntriples(g)));
}

TEST(Graph, MergeRenamesCollidingBlankNodes) {
  Graph a;
  a.insert(Term::blank("x"), ex("p"), ex("a"));
  Graph b;
  b.insert(Term::blank("x"), ex("p"), ex("b"));
  a.merge(b);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(graph_stats(a).blank_node_count, 2u);
}

TEST(Term, RejectsInvalidForms) {
  EXPECT_THROW(Term::iri(""), InvalidTermError);
  EXPECT_THROW(Term::iri("http://a b"), InvalidTermError);
  EXPECT_THROW(Term::blank("a-b"), InvalidTermError);
  EXPECT_THROW(Term::literal("1.2.3", LiteralType::kDecimal), InvalidTermError);
  EXPECT_THROW(Term::literal("x", LiteralType::kInteger), InvalidTermError);
  EXPECT_THROW(make_triple(Term::literal("x"), ex("p"), ex("o")), InvalidTermError);
  EXPECT_THROW(make_triple(ex("s"), Term::blank("p"), ex("o")), InvalidTermError);
}

TEST(Graph, DeterministicSerialization) {
  std::mt19937 r1(8), r2(8);
  EXPECT_EQ(serialize_ntriples(test::random_graph(r1, 50)),
            serialize_ntriples(test::random_graph(r2, 50)));
}
