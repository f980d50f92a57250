#pragma once

// RDF term/triple model, the in-memory graph store, and the Turtle-subset /
// N-Triples readers and writers.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace orkg {

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline const std::string kRdfType = std::string(kRdf) + "type";
inline const std::string kRdfsClass = std::string(kRdfs) + "Class";
inline const std::string kRdfsDomain = std::string(kRdfs) + "domain";
inline const std::string kRdfsRange = std::string(kRdfs) + "range";
inline const std::string kRdfsLabel = std::string(kRdfs) + "label";
inline const std::string kOwlClass = std::string(kOwl) + "Class";
inline const std::string kOwlObjectProperty = std::string(kOwl) + "ObjectProperty";
inline const std::string kOwlDatatypeProperty = std::string(kOwl) + "DatatypeProperty";
inline const std::string kXsdString = std::string(kXsd) + "string";
inline const std::string kXsdInteger = std::string(kXsd) + "integer";
inline const std::string kXsdDecimal = std::string(kXsd) + "decimal";
}  // namespace vocab

enum class TermKind { kIri, kBlank, kLiteral };
enum class LiteralType { kString, kInteger, kDecimal };

// An RDF term. Immutable; carries its N-Triples text, which doubles as the
// canonical sort key.
class Term {
 public:
  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical, LiteralType type = LiteralType::kString);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::kIri; }
  bool is_blank() const { return kind_ == TermKind::kBlank; }
  bool is_literal() const { return kind_ == TermKind::kLiteral; }
  bool is_numeric() const {
    return is_literal() && literal_type_ != LiteralType::kString;
  }

  // IRI string, blank label (without `_:`), or literal lexical form.
  const std::string& value() const { return value_; }
  LiteralType literal_type() const { return literal_type_; }
  const std::string& canonical() const { return text_; }
  double numeric_value() const;

  friend bool operator==(const Term& a, const Term& b) { return a.text_ == b.text_; }
  friend auto operator<=>(const Term& a, const Term& b) { return a.text_ <=> b.text_; }

 private:
  Term(TermKind kind, std::string value, LiteralType type);

  TermKind kind_ = TermKind::kIri;
  std::string value_;
  LiteralType literal_type_ = LiteralType::kString;
  std::string text_;
};

const std::string& datatype_iri(LiteralType type);

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

Triple make_triple(Term subject, Term predicate, Term object);

// Local name of an IRI: the part after the last '#' or '/'.
std::string local_name(std::string_view iri);
// Namespace of an IRI: everything up to and including the last '#' or '/'.
std::string iri_namespace(std::string_view iri);

class Graph {
 public:
  using PrefixMap = std::map<std::string, std::string>;

  // Returns false when the triple was already present.
  bool insert(Triple t);
  bool insert(Term s, Term p, Term o) {
    return insert(make_triple(std::move(s), std::move(p), std::move(o)));
  }
  bool contains(const Triple& t) const { return triples_.contains(t); }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  // Sorted by (subject, predicate, object) canonical text.
  const std::set<Triple>& triples() const { return triples_; }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }

  const PrefixMap& prefixes() const { return prefixes_; }
  // Throws DuplicatePrefixError when `prefix` is already bound elsewhere.
  void bind_prefix(const std::string& prefix, const std::string& iri);

  // Adds all triples of `other`; its blank nodes are relabelled so they can
  // not capture blank nodes already in this graph.
  void merge(const Graph& other);

  // Set equality over triples; prefixes are presentation only.
  friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

 private:
  std::set<Triple> triples_;
  PrefixMap prefixes_;
};

Graph parse_turtle(std::string_view text);
Graph parse_ntriples(std::string_view text);
std::string serialize_ntriples(const Graph& g);
// Turtle-subset writer: prefix directives, `;`/`,` grouping, prefixed names
// where the local part is a plain name.
std::string serialize_turtle(const Graph& g);

struct GraphStats {
  std::size_t entity_count = 0;
  std::size_t blank_node_count = 0;
  std::size_t triple_count = 0;
  std::size_t storage_bytes = 0;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

GraphStats graph_stats(const Graph& g);

}  // namespace orkg
