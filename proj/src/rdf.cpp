#include "orkg/rdf.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include "orkg/detail/lexer.hpp"
#include "orkg/error.hpp"

namespace orkg {

using detail::Token;
using detail::TokenKind;

namespace {

const std::regex& integer_pattern() {
  static const std::regex re("[+-]?[0-9]+");
  return re;
}

const std::regex& decimal_pattern() {
  static const std::regex re("[+-]?([0-9]+\\.[0-9]*|\\.[0-9]+|[0-9]+)");
  return re;
}

bool is_alnum_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

const std::string& datatype_iri(LiteralType type) {
  switch (type) {
    case LiteralType::kInteger: return vocab::kXsdInteger;
    case LiteralType::kDecimal: return vocab::kXsdDecimal;
    case LiteralType::kString: break;
  }
  return vocab::kXsdString;
}

Term::Term(TermKind kind, std::string value, LiteralType type)
    : kind_(kind), value_(std::move(value)), literal_type_(type) {
  switch (kind_) {
    case TermKind::kIri:
      text_ = "<" + value_ + ">";
      break;
    case TermKind::kBlank:
      text_ = "_:" + value_;
      break;
    case TermKind::kLiteral:
      text_ = "\"" + detail::escape_string(value_) + "\"";
      if (literal_type_ != LiteralType::kString) text_ += "^^<" + datatype_iri(literal_type_) + ">";
      break;
  }
}

Term Term::iri(std::string value) {
  if (value.empty()) throw InvalidTermError("empty IRI");
  for (char c : value) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '>' || c == '"') {
      throw InvalidTermError("invalid character in IRI '" + value + "'");
    }
  }
  return Term(TermKind::kIri, std::move(value), LiteralType::kString);
}

Term Term::blank(std::string label) {
  if (!is_alnum_label(label)) throw InvalidTermError("invalid blank node label '" + label + "'");
  return Term(TermKind::kBlank, std::move(label), LiteralType::kString);
}

Term Term::literal(std::string lexical, LiteralType type) {
  if (type == LiteralType::kInteger && !std::regex_match(lexical, integer_pattern())) {
    throw InvalidTermError("not an integer: '" + lexical + "'");
  }
  if (type == LiteralType::kDecimal && !std::regex_match(lexical, decimal_pattern())) {
    throw InvalidTermError("not a decimal: '" + lexical + "'");
  }
  return Term(TermKind::kLiteral, std::move(lexical), type);
}

double Term::numeric_value() const { return std::stod(value_); }

Triple make_triple(Term subject, Term predicate, Term object) {
  if (subject.is_literal()) throw InvalidTermError("literal in subject position");
  if (!predicate.is_iri()) throw InvalidTermError("predicate must be an IRI");
  return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

std::string local_name(std::string_view iri) {
  auto pos = iri.find_last_of("#/");
  return std::string(pos == std::string_view::npos ? iri : iri.substr(pos + 1));
}

std::string iri_namespace(std::string_view iri) {
  auto pos = iri.find_last_of("#/");
  return std::string(pos == std::string_view::npos ? std::string_view{} : iri.substr(0, pos + 1));
}

// ---------------------------------------------------------------------------
// Graph

bool Graph::insert(Triple t) {
  if (t.subject.is_literal() || !t.predicate.is_iri()) {
    throw InvalidTermError("malformed triple " + t.subject.canonical());
  }
  return triples_.insert(std::move(t)).second;
}

void Graph::bind_prefix(const std::string& prefix, const std::string& iri) {
  auto [it, inserted] = prefixes_.emplace(prefix, iri);
  if (!inserted && it->second != iri) {
    throw DuplicatePrefixError("prefix '" + prefix + ":' bound to <" + it->second +
                               "> and <" + iri + ">");
  }
}

void Graph::merge(const Graph& other) {
  std::set<std::string> taken;
  for (const auto& t : triples_) {
    if (t.subject.is_blank()) taken.insert(t.subject.value());
    if (t.object.is_blank()) taken.insert(t.object.value());
  }
  std::map<std::string, std::string> renamed;
  std::size_t counter = 0;
  auto relabel = [&](const Term& term) {
    if (!term.is_blank()) return term;
    auto it = renamed.find(term.value());
    if (it == renamed.end()) {
      std::string label = term.value();
      while (taken.contains(label)) label = "m" + std::to_string(counter++);
      taken.insert(label);
      it = renamed.emplace(term.value(), label).first;
    }
    return Term::blank(it->second);
  };
  for (const auto& t : other.triples_) {
    insert(Triple{relabel(t.subject), t.predicate, relabel(t.object)});
  }
  for (const auto& [p, iri] : other.prefixes_) prefixes_.emplace(p, iri);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::kEnd) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  [[noreturn]] void fail(const Token& at, const std::string& reason) const {
    throw SyntaxError(at.line, at.column, reason);
  }

  void expect_punct(std::string_view p) {
    const Token& t = next();
    if (!t.is_punct(p)) {
      fail(t, "expected '" + std::string(p) + "', found " + detail::token_kind_name(t.kind) +
                  (t.text.empty() ? "" : " '" + t.text + "'"));
    }
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

LiteralType literal_type_for(const std::string& datatype, const Token& at) {
  if (datatype == vocab::kXsdInteger) return LiteralType::kInteger;
  if (datatype == vocab::kXsdDecimal) return LiteralType::kDecimal;
  if (datatype == vocab::kXsdString) return LiteralType::kString;
  throw SyntaxError(at.line, at.column, "unsupported datatype <" + datatype + ">");
}

Term make_literal(const std::string& lexical, LiteralType type, const Token& at) {
  try {
    return Term::literal(lexical, type);
  } catch (const InvalidTermError& e) {
    throw SyntaxError(at.line, at.column, e.what());
  }
}

Term make_iri(const std::string& iri, const Token& at) {
  try {
    return Term::iri(iri);
  } catch (const InvalidTermError& e) {
    throw SyntaxError(at.line, at.column, e.what());
  }
}

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : cur_(detail::tokenize(text)) {}

  Graph run() {
    while (!cur_.at_end()) {
      const Token& t = cur_.peek();
      if (t.is(TokenKind::kWord, "@prefix")) {
        cur_.next();
        prefix_directive(true);
      } else if (t.kind == TokenKind::kWord && upper(t.text) == "PREFIX") {
        cur_.next();
        prefix_directive(false);
      } else {
        statement();
      }
    }
    return std::move(graph_);
  }

 private:
  static std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }

  void prefix_directive(bool needs_dot) {
    const Token& name = cur_.next();
    if (name.kind != TokenKind::kPName || name.text.back() != ':') {
      cur_.fail(name, "expected prefix name ending in ':'");
    }
    const Token& iri = cur_.next();
    if (iri.kind != TokenKind::kIriRef) cur_.fail(iri, "expected IRI in prefix directive");
    graph_.bind_prefix(name.text.substr(0, name.text.size() - 1), iri.text);
    if (needs_dot) cur_.expect_punct(".");
  }

  Term expand_pname(const Token& t) {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    auto it = graph_.prefixes().find(prefix);
    if (it == graph_.prefixes().end()) cur_.fail(t, "undeclared prefix '" + prefix + ":'");
    return make_iri(it->second + t.text.substr(colon + 1), t);
  }

  Term subject() {
    const Token& t = cur_.next();
    switch (t.kind) {
      case TokenKind::kIriRef: return make_iri(t.text, t);
      case TokenKind::kPName: return expand_pname(t);
      case TokenKind::kBlank: return Term::blank(t.text);
      default: cur_.fail(t, "expected subject, found " + detail::token_kind_name(t.kind));
    }
  }

  Term predicate() {
    const Token& t = cur_.next();
    switch (t.kind) {
      case TokenKind::kIriRef: return make_iri(t.text, t);
      case TokenKind::kPName: return expand_pname(t);
      case TokenKind::kWord:
        if (t.text == "a") return Term::iri(vocab::kRdfType);
        [[fallthrough]];
      default: cur_.fail(t, "expected predicate, found " + detail::token_kind_name(t.kind));
    }
  }

  Term object() {
    const Token& t = cur_.next();
    switch (t.kind) {
      case TokenKind::kIriRef: return make_iri(t.text, t);
      case TokenKind::kPName: return expand_pname(t);
      case TokenKind::kBlank: return Term::blank(t.text);
      case TokenKind::kInteger: return make_literal(t.text, LiteralType::kInteger, t);
      case TokenKind::kDecimal: return make_literal(t.text, LiteralType::kDecimal, t);
      case TokenKind::kString: {
        if (cur_.peek().is_punct("^^")) {
          cur_.next();
          const Token& dt = cur_.next();
          std::string dt_iri;
          if (dt.kind == TokenKind::kIriRef) {
            dt_iri = dt.text;
          } else if (dt.kind == TokenKind::kPName) {
            dt_iri = expand_pname(dt).value();
          } else {
            cur_.fail(dt, "expected datatype IRI");
          }
          return make_literal(t.text, literal_type_for(dt_iri, dt), dt);
        }
        if (cur_.peek().kind == TokenKind::kWord && cur_.peek().text.starts_with("@")) {
          cur_.fail(cur_.peek(), "language tags are not supported");
        }
        return Term::literal(t.text);
      }
      default: cur_.fail(t, "expected object, found " + detail::token_kind_name(t.kind));
    }
  }

  void statement() {
    Term s = subject();
    while (true) {
      Term p = predicate();
      while (true) {
        graph_.insert(Triple{s, p, object()});
        if (!cur_.peek().is_punct(",")) break;
        cur_.next();
      }
      if (!cur_.peek().is_punct(";")) break;
      cur_.next();
      // Trailing ';' before '.' is allowed.
      if (cur_.peek().is_punct(".")) break;
    }
    cur_.expect_punct(".");
  }

  TokenCursor cur_;
  Graph graph_;
};

}  // namespace

Graph parse_turtle(std::string_view text) { return TurtleParser(text).run(); }

Graph parse_ntriples(std::string_view text) {
  Graph g;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    std::vector<Token> toks;
    try {
      toks = detail::tokenize(line);
    } catch (const SyntaxError& e) {
      throw SyntaxError(line_no, e.column(), e.reason());
    }
    if (toks.size() == 1) {
      if (end == text.size()) break;
      continue;  // blank or comment line
    }
    auto fail = [&](const Token& t, const std::string& reason) {
      throw SyntaxError(line_no, t.column, reason);
    };
    std::size_t i = 0;
    auto node = [&](bool allow_literal) -> Term {
      const Token& t = toks[i++];
      if (t.kind == TokenKind::kIriRef) return make_iri(t.text, t);
      if (t.kind == TokenKind::kBlank) return Term::blank(t.text);
      if (allow_literal && t.kind == TokenKind::kString) {
        if (toks[i].is_punct("^^")) {
          ++i;
          const Token& dt = toks[i++];
          if (dt.kind != TokenKind::kIriRef) fail(dt, "expected datatype IRI");
          try {
            return Term::literal(t.text, literal_type_for(dt.text, dt));
          } catch (const InvalidTermError& e) {
            fail(dt, e.what());
          }
        }
        return Term::literal(t.text);
      }
      fail(t, "unexpected " + detail::token_kind_name(t.kind));
      return Term::iri("urn:unreachable");
    };
    Term s = node(false);
    const Token& pt = toks[i];
    if (pt.kind != TokenKind::kIriRef) fail(pt, "predicate must be an IRI");
    Term p = node(false);
    Term o = node(true);
    if (!toks[i].is_punct(".")) fail(toks[i], "expected '.' at end of triple");
    ++i;
    if (toks[i].kind != TokenKind::kEnd) fail(toks[i], "trailing content after '.'");
    g.insert(Triple{std::move(s), std::move(p), std::move(o)});
    if (end == text.size()) break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_ntriples(const Graph& g) {
  std::string out;
  for (const auto& t : g) {
    out += t.subject.canonical();
    out += ' ';
    out += t.predicate.canonical();
    out += ' ';
    out += t.object.canonical();
    out += " .\n";
  }
  return out;
}

namespace {

bool is_plain_local(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

class TurtleWriter {
 public:
  explicit TurtleWriter(const Graph& g) : g_(g) {}

  std::string run() {
    std::ostringstream out;
    for (const auto& [p, iri] : g_.prefixes()) out << "@prefix " << p << ": <" << iri << "> .\n";
    if (!g_.prefixes().empty() && !g_.empty()) out << '\n';

    auto it = g_.begin();
    while (it != g_.end()) {
      const Term& s = it->subject;
      out << term(s);
      bool first_pred = true;
      while (it != g_.end() && it->subject == s) {
        const Term& p = it->predicate;
        out << (first_pred ? " " : " ;\n    ");
        first_pred = false;
        out << (p.value() == vocab::kRdfType ? "a" : term(p)) << ' ';
        bool first_obj = true;
        while (it != g_.end() && it->subject == s && it->predicate == p) {
          if (!first_obj) out << ", ";
          first_obj = false;
          out << term(it->object);
          ++it;
        }
      }
      out << " .\n";
    }
    return out.str();
  }

 private:
  std::string term(const Term& t) const {
    if (t.is_iri()) {
      std::string best;
      std::size_t best_len = 0;
      for (const auto& [p, ns] : g_.prefixes()) {
        if (ns.size() > best_len && t.value().starts_with(ns) &&
            is_plain_local(std::string_view(t.value()).substr(ns.size()))) {
          best = p + ":" + t.value().substr(ns.size());
          best_len = ns.size();
        }
      }
      return best.empty() ? t.canonical() : best;
    }
    if (t.is_literal()) {
      const auto& v = t.value();
      if (t.literal_type() == LiteralType::kInteger && std::regex_match(v, integer_pattern())) {
        return v;
      }
      static const std::regex bare_decimal("[+-]?[0-9]+\\.[0-9]+");
      if (t.literal_type() == LiteralType::kDecimal && std::regex_match(v, bare_decimal)) {
        return v;
      }
    }
    return t.canonical();
  }

  const Graph& g_;
};

}  // namespace

std::string serialize_turtle(const Graph& g) { return TurtleWriter(g).run(); }

GraphStats graph_stats(const Graph& g) {
  GraphStats stats;
  std::set<std::string_view> entities;
  std::set<std::string_view> blanks;
  for (const auto& t : g) {
    if (t.subject.is_iri()) entities.insert(t.subject.value());
    if (t.subject.is_blank()) blanks.insert(t.subject.value());
    if (t.object.is_blank()) blanks.insert(t.object.value());
    // Each line is "<s> <p> <o> .\n".
    stats.storage_bytes += t.subject.canonical().size() + t.predicate.canonical().size() +
                           t.object.canonical().size() + 5;
  }
  stats.entity_count = entities.size();
  stats.blank_node_count = blanks.size();
  stats.triple_count = g.size();
  return stats;
}

}  // namespace orkg
