#pragma once

// Ontology reshaping: select the data-mapped sub-graph of a domain ontology,
// connect its fragments with ontology paths or user hints, and contract
// data-less classes into composite properties.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "orkg/mapping.hpp"
#include "orkg/ontology.hpp"

namespace orkg {

struct Fragment {
  std::set<std::string> classes;
  // Bound datatype properties whose domain lies in this fragment.
  std::set<std::string> datatype_properties;
  // Object properties with both endpoints in the fragment.
  std::set<std::string> edges;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

// Connected components of the selected sub-graph, ordered by smallest class IRI.
struct FragmentSet {
  std::vector<Fragment> fragments;

  std::size_t size() const { return fragments.size(); }
  std::set<std::string> classes() const;
};

FragmentSet select_subgraph(const OntologyGraph& o, const MappingSpec& m);

struct SchemaEdge {
  std::string property;
  std::string domain;
  std::string range;
  // Path in the domain ontology from `domain` to `range` realizing the edge;
  // a single step for plain ontology and hint edges.
  SchemaPath provenance;
  bool from_hint = false;
};

struct ConnectorLogEntry {
  std::string from_class;
  std::string to_class;
  std::optional<SchemaPath> path;
  std::optional<ConnectionHint> hint;
  std::size_t cost = 0;
  std::size_t imported = 0;  // connector classes added by this join
  bool warning = false;      // DisconnectedResultWarning
  std::string message;
};

struct ConnectedSchema {
  std::set<std::string> classes;
  std::set<std::string> selected;
  std::set<std::string> connectors;
  std::set<std::string> retained;  // hint endpoints, never contracted
  std::vector<SchemaEdge> edges;
  std::vector<ConnectorLogEntry> log;
  bool connected = true;
};

// Greedy closest-pair merging: hints first (cost 0), then repeatedly the
// cheapest shortest ontology path between two components.
ConnectedSchema connect_fragments(const OntologyGraph& o, const FragmentSet& f,
                                  const std::vector<ConnectionHint>& hints);

struct AttributeHome {
  std::string host;
  std::string property;

  friend bool operator==(const AttributeHome&, const AttributeHome&) = default;
};

using AttributeKey = std::pair<std::string, std::string>;  // (table, attribute)
using ClassPair = std::pair<std::string, std::string>;

struct ReshapedSchema {
  OntologyGraph ontology;
  std::map<AttributeKey, AttributeHome> attribute_homes;
  std::map<std::string, SchemaPath> composite_provenance;
  std::vector<ConnectorLogEntry> connector_log;
  // (table, attribute) -> kept classes from the table class to the class
  // holding the attribute: its elevated class, or the data home.
  std::map<AttributeKey, std::vector<std::string>> routes;
  // Consecutive route classes -> the single hop joining them.
  std::map<ClassPair, PathStep> key_links;
  std::set<std::string> retained;
};

// Contracts every class that is neither a table class, an elevated class nor
// hint-retained. Throws CompactionCycleError when a contraction would loop a
// class onto itself.
ReshapedSchema compact(const OntologyGraph& o, const ConnectedSchema& connected,
                       const MappingSpec& m);

ReshapedSchema reshape(const OntologyGraph& o, const MappingSpec& m,
                       const std::vector<ConnectionHint>& hints);
inline ReshapedSchema reshape(const OntologyGraph& o, const MappingSpec& m) {
  return reshape(o, m, m.hints);
}

std::string serialize_schema_turtle(const ReshapedSchema& s);
// Sidecar lines: `composite <iri> := <p1> / <class> / ^<p2> ...` (`^` marks a
// reverse step), plus `home`, `route`, `keylink`, `retained` and `connector`
// records.
std::string serialize_provenance(const ReshapedSchema& s);

// Base IRI used for minted composite properties.
std::string schema_base(const MappingSpec& m);

}  // namespace orkg
