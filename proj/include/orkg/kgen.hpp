#pragma once

// ETL materialization of a knowledge graph from mapped tables, either under
// the domain ontology (baseline) or under a reshaped schema.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "orkg/mapping.hpp"
#include "orkg/ontology.hpp"
#include "orkg/rdf.hpp"
#include "orkg/reshape.hpp"

namespace orkg {

enum class KgVariant { kBaseline, kReshaped };

std::string variant_name(KgVariant v);
// Throws InputError for anything but "baseline" or "reshaped".
KgVariant parse_variant(const std::string& name);

struct KgBuildReport {
  KgVariant variant = KgVariant::kBaseline;
  GraphStats graph_stats;
  double build_wall_time = 0;  // seconds, triple emission only
  std::size_t rows_processed = 0;
  double triples_per_row = 0;

  // One JSON object on a single line.
  std::string to_json() const;
};

struct EntityMintingPolicy {
  std::string base = "http://example.org/kg";

  // <base>/<ClassLocal>/<table>_<index>
  std::string row_iri(const std::string& cls, const std::string& table, std::size_t index) const;
  // <base>/<ClassLocal>/<url-encoded value>
  std::string key_iri(const std::string& cls, const std::string& value) const;
};

std::string url_encode(std::string_view s);

// How one table's rows are laid out as a graph. Node 0 is the row entity.
// Both the builders and the query synthesizer read the same plan, which keeps
// generated queries aligned with the materialized triples. Paths run through
// the row and key entities; every other node is scoped to the last of those
// it passes, so a reshaped plan is its baseline plan with the scoped nodes
// contracted away.
struct AccessPlan {
  struct Node {
    enum class Kind {
      kRow,     // one per row
      kKey,     // shared across rows with equal key value
      kScoped,  // one per (scope entity, class): blank, or an IRI when the class holds data
    };
    Kind kind = Kind::kRow;
    std::string cls;
    std::string key_attribute;  // kKey only
    std::size_t scope = 0;      // kScoped only: the row or key node it hangs from
    bool carries_data = false;  // kScoped only
  };
  struct Edge {
    std::size_t from = 0;  // walk direction, away from the row
    std::size_t to = 0;
    std::string property;
    bool forward = true;  // triple is (from p to) when true, else (to p from)

    friend bool operator==(const Edge&, const Edge&) = default;
  };
  struct Attribute {
    std::string name;
    std::string property;  // datatype property; empty for key attributes
    std::size_t node = 0;
    std::vector<std::size_t> path;  // edge indices from the row to `node`
    bool is_key() const { return property.empty(); }
  };

  std::string table;
  std::string table_class;
  std::string self_key;  // attribute whose value names the row entity, if any
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Attribute> attributes;  // mapping order

  const Attribute* attribute(std::string_view name) const;
};

// Throws NoPathError when an attribute's home is unreachable from the table class.
AccessPlan baseline_plan(const OntologyGraph& o, const MappingSpec& m, const std::string& table);
// Throws MissingHomeError when a data attribute has no attribute_homes entry.
AccessPlan reshaped_plan(const ReshapedSchema& s, const MappingSpec& m, const std::string& table);

struct KgBuild {
  Graph graph;
  KgBuildReport report;
};

KgBuild build_baseline(const OntologyGraph& o, const MappingSpec& m,
                       const std::vector<TableData>& tables, const EntityMintingPolicy& policy = {});
KgBuild build_reshaped(const ReshapedSchema& s, const MappingSpec& m,
                       const std::vector<TableData>& tables, const EntityMintingPolicy& policy = {});

// (datatype property local name, literal canonical text) for every literal object.
std::multiset<std::pair<std::string, std::string>> literal_payload(const Graph& g);

}  // namespace orkg
