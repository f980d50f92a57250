#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orkg/ontology.hpp"
#include "orkg/rdf.hpp"

namespace orkg {

struct Cell {
  enum class Kind { kNull, kInteger, kDecimal, kString };

  Kind kind = Kind::kNull;
  std::string text;

  static Cell classify(std::string text);
  bool is_null() const { return kind == Kind::kNull; }
  bool is_numeric() const { return kind == Kind::kInteger || kind == Kind::kDecimal; }
  // Literal carrying the cell's value; precondition: !is_null().
  Term to_literal() const;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct TableData {
  std::string name;
  std::vector<std::string> attributes;
  std::vector<std::vector<Cell>> rows;

  // Index of `attribute`, or nullopt.
  std::optional<std::size_t> column(std::string_view attribute) const;
  // True when every non-null cell in the column is integer or decimal and at
  // least one cell is non-null.
  bool is_numeric_column(std::size_t column) const;
};

// Header line + RFC 4180 quoting. Throws EmptyHeaderError, RaggedRowError,
// DuplicateAttributeError.
TableData load_csv(std::string_view text, const std::string& table_name);
std::string write_csv(const TableData& t);

enum class BindingKind { kDataProperty, kClassKey };

struct AttributeBinding {
  std::string table;
  std::string attribute;
  BindingKind kind = BindingKind::kDataProperty;
  std::string iri;

  friend bool operator==(const AttributeBinding&, const AttributeBinding&) = default;
};

struct TableBinding {
  std::string table;
  std::string cls;

  friend bool operator==(const TableBinding&, const TableBinding&) = default;
};

struct ConnectionHint {
  std::string from;
  std::string property;
  std::string to;

  friend bool operator==(const ConnectionHint&, const ConnectionHint&) = default;
};

// Table/attribute annotations plus user connection hints. Bindings keep file
// order; duplicates are representable so validate_mapping can report them.
struct MappingSpec {
  Graph::PrefixMap prefixes;
  std::vector<TableBinding> tables;
  std::vector<AttributeBinding> attributes;
  std::vector<ConnectionHint> hints;

  const TableBinding* table(std::string_view name) const;
  const AttributeBinding* attribute(std::string_view table, std::string_view attr) const;
  std::vector<const AttributeBinding*> attributes_of(std::string_view table) const;

  friend bool operator==(const MappingSpec&, const MappingSpec&) = default;
};

struct AnnotationReport {
  std::vector<std::string> auto_bound;
  std::vector<std::string> elevated;
  std::vector<std::string> unbound;
  std::vector<std::pair<std::string, std::vector<std::string>>> ambiguous;
};

// Lower-cases and strips '_' and '-'.
std::string normalize_name(std::string_view name);

std::pair<MappingSpec, AnnotationReport> auto_annotate(const TableData& t, const OntologyGraph& o);

MappingSpec parse_mapping(std::string_view text);
std::string serialize_mapping(const MappingSpec& m);

struct Violation {
  enum class Kind {
    kUnknownIri,
    kWrongKind,
    kDuplicateBinding,
    kUnboundTable,
    kUnknownTable,
    kUnknownAttribute,
    kBadHint,
  };

  Kind kind;
  std::string message;
};

std::string to_string(Violation::Kind kind);

// Empty iff every MappingSpec invariant holds against `o` and `tables`.
// Table/attribute existence is only checked when `tables` is non-empty.
std::vector<Violation> validate_mapping(const MappingSpec& m, const OntologyGraph& o,
                                        const std::vector<TableData>& tables);

}  // namespace orkg
