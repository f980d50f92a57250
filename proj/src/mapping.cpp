#include "orkg/mapping.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "orkg/error.hpp"

namespace orkg {

// ---------------------------------------------------------------------------
// Cells and CSV

Cell Cell::classify(std::string text) {
  static const std::regex integer("[+-]?[0-9]+");
  static const std::regex decimal("[+-]?([0-9]+\\.[0-9]*|\\.[0-9]+)");
  Cell c;
  if (text.empty()) return c;
  if (std::regex_match(text, integer)) {
    c.kind = Kind::kInteger;
  } else if (std::regex_match(text, decimal)) {
    c.kind = Kind::kDecimal;
  } else {
    c.kind = Kind::kString;
  }
  c.text = std::move(text);
  return c;
}

Term Cell::to_literal() const {
  switch (kind) {
    case Kind::kInteger: return Term::literal(text, LiteralType::kInteger);
    case Kind::kDecimal: return Term::literal(text, LiteralType::kDecimal);
    case Kind::kString: return Term::literal(text);
    case Kind::kNull: break;
  }
  throw Error("null cell has no literal");
}

std::optional<std::size_t> TableData::column(std::string_view attribute) const {
  auto it = std::find(attributes.begin(), attributes.end(), attribute);
  if (it == attributes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attributes.begin());
}

bool TableData::is_numeric_column(std::size_t col) const {
  bool any = false;
  for (const auto& row : rows) {
    if (row[col].is_null()) continue;
    if (!row[col].is_numeric()) return false;
    any = true;
  }
  return any;
}

namespace {

// Splits one logical CSV record starting at `pos`; advances `pos` and `line`.
std::vector<std::string> read_record(std::string_view text, std::size_t& pos, std::size_t& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      if (c == '\n') ++line;
      field += c;
      ++pos;
      continue;
    }
    if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
      ++pos;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
      ++pos;
    } else if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
      ++pos;
    } else if (c == '\n') {
      ++pos;
      ++line;
      break;
    } else {
      field += c;
      ++pos;
    }
  }
  if (quoted) throw RaggedRowError("unterminated quoted field before line " + std::to_string(line));
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

TableData load_csv(std::string_view text, const std::string& table_name) {
  TableData t;
  t.name = table_name;
  std::size_t pos = 0;
  std::size_t line = 1;
  if (text.empty() || text.front() == '\n' || text.front() == '\r') {
    throw EmptyHeaderError("table '" + table_name + "' has no header line");
  }
  t.attributes = read_record(text, pos, line);
  std::set<std::string> seen;
  for (const auto& a : t.attributes) {
    if (a.empty()) throw EmptyHeaderError("table '" + table_name + "' has an empty column name");
    if (!seen.insert(a).second) {
      throw DuplicateAttributeError("table '" + table_name + "' repeats attribute '" + a + "'");
    }
  }
  while (pos < text.size()) {
    std::size_t record_line = line;
    std::size_t start = pos;
    auto fields = read_record(text, pos, line);
    std::string_view raw = text.substr(start, pos - start);
    if (raw.find_first_not_of("\r\n") == std::string_view::npos) continue;  // blank line
    if (fields.size() != t.attributes.size()) {
      throw RaggedRowError("table '" + table_name + "' line " + std::to_string(record_line) +
                           ": expected " + std::to_string(t.attributes.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& f : fields) row.push_back(Cell::classify(std::move(f)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string write_csv(const TableData& t) {
  std::string out;
  for (std::size_t i = 0; i < t.attributes.size(); ++i) {
    out += (i ? "," : "") + csv_field(t.attributes[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i].text);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// MappingSpec

const TableBinding* MappingSpec::table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.table == name) return &t;
  }
  return nullptr;
}

const AttributeBinding* MappingSpec::attribute(std::string_view tbl, std::string_view attr) const {
  for (const auto& a : attributes) {
    if (a.table == tbl && a.attribute == attr) return &a;
  }
  return nullptr;
}

std::vector<const AttributeBinding*> MappingSpec::attributes_of(std::string_view tbl) const {
  std::vector<const AttributeBinding*> out;
  for (const auto& a : attributes) {
    if (a.table == tbl) out.push_back(&a);
  }
  return out;
}

std::string normalize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_' || c == '-') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::pair<MappingSpec, AnnotationReport> auto_annotate(const TableData& t, const OntologyGraph& o) {
  std::map<std::string, std::vector<std::string>> classes_by_name;
  for (const auto& c : o.classes) classes_by_name[normalize_name(local_name(c))].push_back(c);
  std::map<std::string, std::vector<std::string>> props_by_name;
  for (const auto& [iri, _] : o.datatype_properties) {
    props_by_name[normalize_name(local_name(iri))].push_back(iri);
  }

  MappingSpec m;
  m.prefixes = o.prefixes;
  AnnotationReport report;

  auto table_classes = classes_by_name.find(normalize_name(t.name));
  if (table_classes == classes_by_name.end()) {
    throw UnknownTableClassError("table '" + t.name + "' matches no ontology class");
  }
  if (table_classes->second.size() > 1) {
    throw UnknownTableClassError("table '" + t.name + "' matches several ontology classes");
  }
  m.tables.push_back(TableBinding{t.name, table_classes->second.front()});

  for (const auto& attr : t.attributes) {
    std::string n = normalize_name(attr);
    std::optional<std::string> stripped;
    if (n.size() > 2 && n.ends_with("id")) stripped = n.substr(0, n.size() - 2);
    if (n.size() > 4 && n.ends_with("name")) stripped = n.substr(0, n.size() - 4);
    if (stripped) {
      auto it = classes_by_name.find(*stripped);
      if (it != classes_by_name.end()) {
        if (it->second.size() == 1) {
          m.attributes.push_back(
              AttributeBinding{t.name, attr, BindingKind::kClassKey, it->second.front()});
          report.elevated.push_back(attr);
        } else {
          report.ambiguous.emplace_back(attr, it->second);
        }
        continue;
      }
    }
    auto it = props_by_name.find(n);
    if (it == props_by_name.end()) {
      report.unbound.push_back(attr);
    } else if (it->second.size() > 1) {
      report.ambiguous.emplace_back(attr, it->second);
    } else {
      m.attributes.push_back(
          AttributeBinding{t.name, attr, BindingKind::kDataProperty, it->second.front()});
      report.auto_bound.push_back(attr);
    }
  }
  return {std::move(m), std::move(report)};
}

// ---------------------------------------------------------------------------
// Mapping DSL

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string expand_ref(const std::string& ref, const Graph::PrefixMap& prefixes, std::size_t line) {
  if (ref.size() >= 2 && ref.front() == '<' && ref.back() == '>') {
    std::string iri = ref.substr(1, ref.size() - 2);
    if (iri.empty()) throw SyntaxError(line, 1, "empty IRI");
    return iri;
  }
  auto colon = ref.find(':');
  if (colon == std::string::npos) throw SyntaxError(line, 1, "expected CURIE or <IRI>, found '" + ref + "'");
  auto it = prefixes.find(ref.substr(0, colon));
  if (it == prefixes.end()) {
    throw SyntaxError(line, 1, "undeclared prefix '" + ref.substr(0, colon) + "'");
  }
  return it->second + ref.substr(colon + 1);
}

bool is_plain_local(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

std::string compact_ref(const std::string& iri, const Graph::PrefixMap& prefixes) {
  std::string best;
  std::size_t best_len = 0;
  for (const auto& [p, ns] : prefixes) {
    if (ns.size() > best_len && iri.starts_with(ns) &&
        is_plain_local(std::string_view(iri).substr(ns.size()))) {
      best = p + ":" + iri.substr(ns.size());
      best_len = ns.size();
    }
  }
  return best.empty() ? "<" + iri + ">" : best;
}

}  // namespace

MappingSpec parse_mapping(std::string_view text) {
  static const std::regex hint_re(R"(^hint\s+(\S+)\s+-\[(\S+)\]->\s+(\S+)\s*$)");
  MappingSpec m;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto toks = split_ws(line);
    const std::string& kw = toks[0];
    if (kw == "prefix") {
      if (toks.size() != 3) throw SyntaxError(line_no, 1, "expected: prefix <pfx> <iri>");
      std::string pfx = toks[1];
      if (!pfx.empty() && pfx.back() == ':') pfx.pop_back();
      std::string iri = toks[2];
      if (iri.size() >= 2 && iri.front() == '<' && iri.back() == '>') iri = iri.substr(1, iri.size() - 2);
      if (pfx.empty() || iri.empty()) throw SyntaxError(line_no, 1, "empty prefix or IRI");
      auto [it, inserted] = m.prefixes.emplace(pfx, iri);
      if (!inserted && it->second != iri) {
        throw SyntaxError(line_no, 1, "prefix '" + pfx + "' rebound to a different IRI");
      }
    } else if (kw == "table") {
      if (toks.size() != 5 || toks[2] != "=>" || toks[3] != "class") {
        throw SyntaxError(line_no, 1, "expected: table <name> => class <iri>");
      }
      m.tables.push_back(TableBinding{toks[1], expand_ref(toks[4], m.prefixes, line_no)});
    } else if (kw == "attr") {
      if (toks.size() != 5 || toks[2] != "=>" || (toks[3] != "dataprop" && toks[3] != "classkey")) {
        throw SyntaxError(line_no, 1, "expected: attr <table>.<attr> => dataprop|classkey <iri>");
      }
      auto dot = toks[1].find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == toks[1].size()) {
        throw SyntaxError(line_no, 1, "expected <table>.<attr>, found '" + toks[1] + "'");
      }
      m.attributes.push_back(AttributeBinding{
          toks[1].substr(0, dot), toks[1].substr(dot + 1),
          toks[3] == "dataprop" ? BindingKind::kDataProperty : BindingKind::kClassKey,
          expand_ref(toks[4], m.prefixes, line_no)});
    } else if (kw == "hint") {
      std::smatch match;
      if (!std::regex_match(line, match, hint_re)) {
        throw SyntaxError(line_no, 1, "expected: hint <classA> -[<property>]-> <classB>");
      }
      m.hints.push_back(ConnectionHint{expand_ref(match[1], m.prefixes, line_no),
                                       expand_ref(match[2], m.prefixes, line_no),
                                       expand_ref(match[3], m.prefixes, line_no)});
    } else {
      throw SyntaxError(line_no, 1, "unknown directive '" + kw + "'");
    }
  }
  return m;
}

std::string serialize_mapping(const MappingSpec& m) {
  std::ostringstream out;
  for (const auto& [p, iri] : m.prefixes) out << "prefix " << p << " <" << iri << ">\n";
  for (const auto& t : m.tables) {
    out << "table " << t.table << " => class " << compact_ref(t.cls, m.prefixes) << '\n';
  }
  for (const auto& a : m.attributes) {
    out << "attr " << a.table << '.' << a.attribute << " => "
        << (a.kind == BindingKind::kDataProperty ? "dataprop " : "classkey ")
        << compact_ref(a.iri, m.prefixes) << '\n';
  }
  for (const auto& h : m.hints) {
    out << "hint " << compact_ref(h.from, m.prefixes) << " -[" << compact_ref(h.property, m.prefixes)
        << "]-> " << compact_ref(h.to, m.prefixes) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kUnknownIri: return "UnknownIriViolation";
    case Violation::Kind::kWrongKind: return "WrongKindViolation";
    case Violation::Kind::kDuplicateBinding: return "DuplicateBindingViolation";
    case Violation::Kind::kUnboundTable: return "UnboundTableViolation";
    case Violation::Kind::kUnknownTable: return "UnknownTableViolation";
    case Violation::Kind::kUnknownAttribute: return "UnknownAttributeViolation";
    case Violation::Kind::kBadHint: return "BadHintViolation";
  }
  return "Violation";
}

std::vector<Violation> validate_mapping(const MappingSpec& m, const OntologyGraph& o,
                                        const std::vector<TableData>& tables) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  auto find_table = [&](const std::string& name) -> const TableData* {
    for (const auto& t : tables) {
      if (t.name == name) return &t;
    }
    return nullptr;
  };
  auto check_iri = [&](const std::string& iri, bool want_class, const std::string& what) {
    if (!o.contains_iri(iri)) {
      out.push_back({K::kUnknownIri, what + ": <" + iri + "> is not in the ontology"});
      return;
    }
    bool ok = want_class ? o.has_class(iri) : o.datatype_properties.contains(iri);
    if (!ok) {
      out.push_back({K::kWrongKind, what + ": <" + iri + "> is not a " +
                                        (want_class ? "class" : "datatype property")});
    }
  };

  std::set<std::string> bound_tables;
  for (const auto& t : m.tables) {
    if (!bound_tables.insert(t.table).second) {
      out.push_back({K::kDuplicateBinding, "table '" + t.table + "' bound more than once"});
    }
    check_iri(t.cls, true, "table '" + t.table + "'");
    if (!tables.empty() && !find_table(t.table)) {
      out.push_back({K::kUnknownTable, "table '" + t.table + "' has no data"});
    }
  }

  std::set<std::pair<std::string, std::string>> bound_attrs;
  for (const auto& a : m.attributes) {
    std::string what = "attribute '" + a.table + "." + a.attribute + "'";
    if (!bound_attrs.emplace(a.table, a.attribute).second) {
      out.push_back({K::kDuplicateBinding, what + " bound more than once"});
    }
    if (!bound_tables.contains(a.table)) {
      out.push_back({K::kUnboundTable, what + " belongs to an unbound table"});
    }
    check_iri(a.iri, a.kind == BindingKind::kClassKey, what);
    if (!tables.empty()) {
      const TableData* t = find_table(a.table);
      if (t && !t->column(a.attribute)) {
        out.push_back({K::kUnknownAttribute, what + " is not a column of the table"});
      }
    }
  }

  for (const auto& h : m.hints) {
    std::string what = "hint <" + h.from + "> -[<" + h.property + ">]-> <" + h.to + ">";
    if (!o.has_class(h.from) || !o.has_class(h.to)) {
      out.push_back({K::kBadHint, what + ": endpoints must be ontology classes"});
      continue;
    }
    if (o.has_class(h.property) || o.datatype_properties.contains(h.property)) {
      out.push_back({K::kBadHint, what + ": property is not an object property"});
      continue;
    }
    auto it = o.object_properties.find(h.property);
    if (it != o.object_properties.end() &&
        (it->second.domain != h.from || it->second.range != h.to)) {
      out.push_back({K::kBadHint, what + ": contradicts the property's domain/range"});
    }
  }
  return out;
}

}  // namespace orkg
