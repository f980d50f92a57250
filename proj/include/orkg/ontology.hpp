#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orkg/rdf.hpp"

namespace orkg {

struct ObjectProperty {
  std::string domain;
  std::string range;

  friend bool operator==(const ObjectProperty&, const ObjectProperty&) = default;
};

struct DatatypeProperty {
  std::string domain;

  friend bool operator==(const DatatypeProperty&, const DatatypeProperty&) = default;
};

// Typed schema graph: classes, object properties (domain -> range) and
// datatype properties (class -> literal). Keys are full IRIs.
struct OntologyGraph {
  std::set<std::string> classes;
  std::map<std::string, ObjectProperty> object_properties;
  std::map<std::string, DatatypeProperty> datatype_properties;
  std::map<std::string, std::string> labels;
  Graph::PrefixMap prefixes;

  bool has_class(const std::string& iri) const { return classes.contains(iri); }
  bool contains_iri(const std::string& iri) const {
    return classes.contains(iri) || object_properties.contains(iri) ||
           datatype_properties.contains(iri);
  }

  // Throws UndeclaredClassError / OntologyConflictError on violations.
  void check_invariants() const;

  friend bool operator==(const OntologyGraph& a, const OntologyGraph& b) {
    return a.classes == b.classes && a.object_properties == b.object_properties &&
           a.datatype_properties == b.datatype_properties && a.labels == b.labels;
  }
};

struct PathStep {
  std::string property;
  bool forward = true;  // domain -> range

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

// Alternating classes and property steps: classes.size() == steps.size() + 1
// for a non-empty path.
struct SchemaPath {
  std::vector<std::string> classes;
  std::vector<PathStep> steps;

  std::size_t length() const { return steps.size(); }
  const std::string& source() const { return classes.front(); }
  const std::string& target() const { return classes.back(); }
  SchemaPath reversed() const;
  // Appends `tail`, whose source must equal this path's target.
  SchemaPath concat(const SchemaPath& tail) const;

  friend bool operator==(const SchemaPath&, const SchemaPath&) = default;
};

// Replays the path edge by edge against `o`.
bool path_is_valid(const SchemaPath& path, const OntologyGraph& o);

OntologyGraph load_ontology(const Graph& g);
Graph ontology_to_graph(const OntologyGraph& o);

// Undirected adjacency over object properties; neighbours sorted by
// (property IRI, class IRI, direction).
class SchemaIndex {
 public:
  struct Edge {
    std::string property;
    std::string other;
    bool forward;

    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  explicit SchemaIndex(const OntologyGraph& o);

  const std::vector<Edge>& neighbours(const std::string& cls) const;
  // BFS hop counts from `cls` to every reachable class.
  std::map<std::string, std::size_t> distances_from(const std::string& cls) const;
  // Lexicographically smallest shortest path, or nullopt when not connected.
  std::optional<SchemaPath> shortest_path(const std::string& from, const std::string& to) const;

 private:
  const OntologyGraph* o_;
  std::map<std::string, std::vector<Edge>> adj_;
};

// Throws UnknownClassError when an endpoint is not a class; nullopt means
// NotConnected.
std::optional<SchemaPath> shortest_schema_path(const OntologyGraph& o, const std::string& from,
                                               const std::string& to);

}  // namespace orkg
