#pragma once

// SPARQL-subset queries: parsing, evaluation over a Graph, the query-depth
// metric, and synthesis of equivalent queries against either schema.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orkg/kgen.hpp"
#include "orkg/mapping.hpp"
#include "orkg/ontology.hpp"
#include "orkg/rdf.hpp"
#include "orkg/reshape.hpp"

namespace orkg {

class PatternTerm {
 public:
  static PatternTerm variable(std::string name);
  static PatternTerm constant(Term term);

  bool is_variable() const { return is_variable_; }
  // Variable name without '?'; only valid for variables.
  const std::string& name() const { return name_; }
  // Only valid for constants.
  const Term& term() const { return term_; }
  // `?name` or the constant's canonical text; doubles as the node key in
  // the query graph.
  std::string key() const { return is_variable_ ? "?" + name_ : term_.canonical(); }

  friend bool operator==(const PatternTerm&, const PatternTerm&) = default;

 private:
  bool is_variable_ = true;
  std::string name_;
  Term term_ = Term::iri("urn:unset");
};

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class CompareOp { kLt, kLe, kEq, kGe, kGt };

std::string op_text(CompareOp op);

struct Filter {
  std::string variable;
  CompareOp op = CompareOp::kEq;
  Term constant = Term::iri("urn:unset");

  friend bool operator==(const Filter&, const Filter&) = default;
};

struct BgpQuery {
  std::vector<std::pair<std::string, std::string>> prefixes;  // declaration order
  bool distinct = false;
  std::vector<std::string> select;
  // SELECT ... (COUNT(DISTINCT ?count_variable) AS ?count_alias)
  std::optional<std::string> count_variable;
  std::string count_alias;
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;
  std::vector<std::string> group_by;

  // Result column names: select list, then the count alias.
  std::vector<std::string> columns() const;

  // Throws UnboundVariableError, DisconnectedPatternError or InvalidIntentError
  // (for malformed aggregates).
  void check() const;

  friend bool operator==(const BgpQuery&, const BgpQuery&) = default;
};

BgpQuery parse_sparql(std::string_view text);
std::string serialize_sparql(const BgpQuery& q);

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<std::vector<Term>> rows;  // sorted by canonical text

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

ResultSet evaluate(const BgpQuery& q, const Graph& g);
// Header row of column names, then one line per result row; IRIs and literals
// are written as their plain values.
std::string result_csv(const ResultSet& r);

// Diameter of the undirected graph over pattern subjects and objects.
std::size_t query_depth(const BgpQuery& q);

enum class IntentKind { kInspection, kSummary, kDiagnostic };

struct AttributeRef {
  std::string table;
  std::string attribute;

  std::string text() const { return table + "." + attribute; }
  friend bool operator==(const AttributeRef&, const AttributeRef&) = default;
};

struct IntentFilter {
  AttributeRef attribute;
  CompareOp op = CompareOp::kEq;
  Term constant = Term::iri("urn:unset");

  friend bool operator==(const IntentFilter&, const IntentFilter&) = default;
};

struct QueryIntent {
  std::string name;
  IntentKind kind = IntentKind::kInspection;
  std::vector<AttributeRef> targets;
  std::optional<AttributeRef> group_key;
  std::optional<IntentFilter> filter;
  std::vector<AttributeRef> context;

  // Every attribute the query touches, first occurrence order.
  std::vector<AttributeRef> attributes() const;
  // Throws InvalidIntentError.
  void check() const;

  friend bool operator==(const QueryIntent&, const QueryIntent&) = default;
};

// `intent <name> kind=<I|II|III> targets=<t.a,...> [group=<t.a>]
//  [filter=<t.a><op><const>] [context=<t.a,...>]`, '#' comments.
std::vector<QueryIntent> parse_intents(std::string_view text);
std::string serialize_intents(const std::vector<QueryIntent>& intents);

// Query over the plan of the intent's table. Throws UnreachableAttributeError
// when the plan cannot be built and InvalidIntentError for unknown attributes.
BgpQuery synthesize(const QueryIntent& intent, const AccessPlan& plan);
BgpQuery synthesize(const QueryIntent& intent, const OntologyGraph& o, const MappingSpec& m);
BgpQuery synthesize(const QueryIntent& intent, const ReshapedSchema& s, const MappingSpec& m);

}  // namespace orkg
