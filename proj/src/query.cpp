#include "orkg/query.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "orkg/detail/lexer.hpp"
#include "orkg/error.hpp"

namespace orkg {

using detail::Token;
using detail::TokenKind;

PatternTerm PatternTerm::variable(std::string name) {
  PatternTerm t;
  t.is_variable_ = true;
  t.name_ = std::move(name);
  return t;
}

PatternTerm PatternTerm::constant(Term term) {
  PatternTerm t;
  t.is_variable_ = false;
  t.term_ = std::move(term);
  return t;
}

std::string op_text(CompareOp op) {
  switch (op) {
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kEq: return "=";
    case CompareOp::kGe: return ">=";
    case CompareOp::kGt: return ">";
  }
  return "=";
}

namespace {

std::optional<CompareOp> op_from_text(std::string_view s) {
  if (s == "<") return CompareOp::kLt;
  if (s == "<=") return CompareOp::kLe;
  if (s == "=") return CompareOp::kEq;
  if (s == ">=") return CompareOp::kGe;
  if (s == ">") return CompareOp::kGt;
  return std::nullopt;
}

bool keyword(const Token& t, std::string_view word) {
  if (t.kind != TokenKind::kWord || t.text.size() != word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != word[i]) return false;
  }
  return true;
}

// Undirected adjacency over pattern subjects and objects.
std::map<std::string, std::set<std::string>> query_graph(const BgpQuery& q) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& p : q.patterns) {
    auto s = p.subject.key();
    auto o = p.object.key();
    adj[s].insert(o);
    adj[o].insert(s);
  }
  return adj;
}

std::map<std::string, std::size_t> bfs(const std::map<std::string, std::set<std::string>>& adj,
                                       const std::string& from) {
  std::map<std::string, std::size_t> dist{{from, 0}};
  std::vector<std::string> frontier{from};
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const auto& u : frontier) {
      for (const auto& v : adj.at(u)) {
        if (dist.emplace(v, dist[u] + 1).second) next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace

std::vector<std::string> BgpQuery::columns() const {
  std::vector<std::string> out = select;
  if (count_variable) out.push_back(count_alias);
  return out;
}

void BgpQuery::check() const {
  if (patterns.empty()) throw DisconnectedPatternError("query has no triple patterns");
  std::set<std::string> bound;
  for (const auto& p : patterns) {
    for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
      if (t->is_variable()) bound.insert(t->name());
    }
  }
  auto need = [&](const std::string& v, const char* where) {
    if (!bound.contains(v)) {
      throw UnboundVariableError("?" + v + " in " + where + " does not occur in any triple pattern");
    }
  };
  for (const auto& v : select) need(v, "SELECT");
  for (const auto& v : group_by) need(v, "GROUP BY");
  for (const auto& f : filters) need(f.variable, "FILTER");
  if (count_variable) {
    need(*count_variable, "COUNT");
    if (bound.contains(count_alias)) {
      throw InvalidIntentError("count alias ?" + count_alias + " shadows a pattern variable");
    }
    for (const auto& v : select) {
      if (std::find(group_by.begin(), group_by.end(), v) == group_by.end()) {
        throw InvalidIntentError("?" + v + " is selected but not grouped");
      }
    }
  } else if (!group_by.empty()) {
    throw InvalidIntentError("GROUP BY without an aggregate");
  }
  if (select.empty() && !count_variable) throw InvalidIntentError("empty SELECT list");
  auto adj = query_graph(*this);
  if (bfs(adj, adj.begin()->first).size() != adj.size()) {
    throw DisconnectedPatternError("triple patterns do not form a connected graph");
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class SparqlParser {
 public:
  explicit SparqlParser(std::string_view text)
      : toks_(detail::tokenize(text, {.comparison_operators = true, .variables = true})) {}

  BgpQuery run() {
    while (keyword(peek(), "PREFIX")) prefix();
    if (!keyword(next(), "SELECT")) fail(prev(), "expected SELECT");
    if (keyword(peek(), "DISTINCT")) {
      next();
      q_.distinct = true;
    }
    select_list();
    if (!keyword(next(), "WHERE")) fail(prev(), "expected WHERE");
    expect("{");
    body();
    if (keyword(peek(), "GROUP")) {
      next();
      if (!keyword(next(), "BY")) fail(prev(), "expected BY");
      while (peek().kind == TokenKind::kVariable) q_.group_by.push_back(next().text);
      if (q_.group_by.empty()) fail(peek(), "GROUP BY needs at least one variable");
    }
    if (peek().kind != TokenKind::kEnd) fail(peek(), "unexpected '" + peek().text + "' after query");
    q_.check();
    return std::move(q_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != TokenKind::kEnd) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const Token& at, const std::string& reason) const {
    throw SyntaxError(at.line, at.column, reason);
  }
  void expect(std::string_view p) {
    if (!next().is_punct(p)) fail(prev(), "expected '" + std::string(p) + "'");
  }

  void prefix() {
    next();
    const Token& name = next();
    if (name.kind != TokenKind::kPName || name.text.back() != ':') fail(name, "expected prefix name");
    const Token& iri = next();
    if (iri.kind != TokenKind::kIriRef) fail(iri, "expected IRI");
    std::string p = name.text.substr(0, name.text.size() - 1);
    for (const auto& [k, v] : q_.prefixes) {
      if (k == p) fail(name, "prefix '" + p + ":' declared twice");
    }
    q_.prefixes.emplace_back(p, iri.text);
  }

  void select_list() {
    while (true) {
      if (peek().kind == TokenKind::kVariable) {
        if (q_.count_variable) fail(peek(), "variables must precede the aggregate");
        q_.select.push_back(next().text);
      } else if (peek().is_punct("(")) {
        if (q_.count_variable) fail(peek(), "only one aggregate is supported");
        next();
        if (!keyword(next(), "COUNT")) fail(prev(), "expected COUNT");
        expect("(");
        if (!keyword(next(), "DISTINCT")) fail(prev(), "expected DISTINCT");
        const Token& v = next();
        if (v.kind != TokenKind::kVariable) fail(v, "expected variable");
        q_.count_variable = v.text;
        expect(")");
        if (!keyword(next(), "AS")) fail(prev(), "expected AS");
        const Token& alias = next();
        if (alias.kind != TokenKind::kVariable) fail(alias, "expected alias variable");
        q_.count_alias = alias.text;
        expect(")");
      } else {
        break;
      }
    }
    if (q_.select.empty() && !q_.count_variable) fail(peek(), "empty SELECT list");
  }

  void body() {
    while (true) {
      const Token& t = peek();
      if (t.is_punct("}")) {
        next();
        return;
      }
      if (keyword(t, "FILTER")) {
        filter();
        continue;
      }
      if (t.kind == TokenKind::kEnd) fail(t, "unterminated WHERE block");
      PatternTerm s = term(false);
      while (true) {
        PatternTerm p = predicate();
        while (true) {
          q_.patterns.push_back(TriplePattern{s, p, term(true)});
          if (!peek().is_punct(",")) break;
          next();
        }
        if (!peek().is_punct(";")) break;
        next();
        if (peek().is_punct(".") || peek().is_punct("}")) break;
      }
      if (peek().is_punct(".")) {
        next();
      } else if (!peek().is_punct("}") && !keyword(peek(), "FILTER")) {
        fail(peek(), "expected '.' or '}'");
      }
    }
  }

  void filter() {
    next();
    expect("(");
    const Token& v = next();
    if (v.kind != TokenKind::kVariable) fail(v, "FILTER must start with a variable");
    const Token& o = next();
    auto op = o.kind == TokenKind::kPunct ? op_from_text(o.text) : std::nullopt;
    if (!op) fail(o, "expected comparison operator");
    PatternTerm c = term(true);
    if (c.is_variable()) fail(prev(), "FILTER compares a variable with a constant");
    expect(")");
    q_.filters.push_back(Filter{v.text, *op, c.term()});
  }

  std::string expand(const Token& t) {
    auto colon = t.text.find(':');
    std::string p = t.text.substr(0, colon);
    for (const auto& [k, v] : q_.prefixes) {
      if (k == p) return v + t.text.substr(colon + 1);
    }
    fail(t, "undeclared prefix '" + p + ":'");
  }

  Term make(const Token& at, auto fn) {
    try {
      return fn();
    } catch (const InvalidTermError& e) {
      fail(at, e.what());
    }
  }

  PatternTerm predicate() {
    if (peek().kind == TokenKind::kWord && peek().text == "a") {
      next();
      return PatternTerm::constant(Term::iri(vocab::kRdfType));
    }
    PatternTerm p = term(false);
    if (!p.is_variable() && !p.term().is_iri()) fail(prev(), "predicate must be an IRI or variable");
    return p;
  }

  PatternTerm term(bool allow_literal) {
    const Token& t = next();
    switch (t.kind) {
      case TokenKind::kVariable: return PatternTerm::variable(t.text);
      case TokenKind::kIriRef: return PatternTerm::constant(make(t, [&] { return Term::iri(t.text); }));
      case TokenKind::kPName: {
        std::string iri = expand(t);
        return PatternTerm::constant(make(t, [&] { return Term::iri(iri); }));
      }
      case TokenKind::kBlank: return PatternTerm::constant(make(t, [&] { return Term::blank(t.text); }));
      default: break;
    }
    if (!allow_literal) fail(t, "expected variable or IRI");
    switch (t.kind) {
      case TokenKind::kInteger:
        return PatternTerm::constant(make(t, [&] { return Term::literal(t.text, LiteralType::kInteger); }));
      case TokenKind::kDecimal:
        return PatternTerm::constant(make(t, [&] { return Term::literal(t.text, LiteralType::kDecimal); }));
      case TokenKind::kString: {
        LiteralType type = LiteralType::kString;
        if (peek().is_punct("^^")) {
          next();
          const Token& dt = next();
          std::string iri;
          if (dt.kind == TokenKind::kIriRef) {
            iri = dt.text;
          } else if (dt.kind == TokenKind::kPName) {
            iri = expand(dt);
          } else {
            fail(dt, "expected datatype IRI");
          }
          if (iri == vocab::kXsdInteger) {
            type = LiteralType::kInteger;
          } else if (iri == vocab::kXsdDecimal) {
            type = LiteralType::kDecimal;
          } else if (iri != vocab::kXsdString) {
            fail(dt, "unsupported datatype <" + iri + ">");
          }
        }
        return PatternTerm::constant(make(t, [&] { return Term::literal(t.text, type); }));
      }
      default: break;
    }
    fail(t, "unexpected " + detail::token_kind_name(t.kind) + (t.text.empty() ? "" : " '" + t.text + "'"));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  BgpQuery q_;
};

bool is_plain_local(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

std::string write_term(const BgpQuery& q, const PatternTerm& pt) {
  if (pt.is_variable()) return "?" + pt.name();
  const Term& t = pt.term();
  if (t.is_iri()) {
    std::string best;
    std::size_t best_len = 0;
    for (const auto& [p, ns] : q.prefixes) {
      if (ns.size() > best_len && t.value().starts_with(ns) &&
          is_plain_local(std::string_view(t.value()).substr(ns.size()))) {
        best = p + ":" + t.value().substr(ns.size());
        best_len = ns.size();
      }
    }
    return best.empty() ? t.canonical() : best;
  }
  if (t.is_literal()) {
    static const std::regex bare_integer("[+-]?[0-9]+");
    static const std::regex bare_decimal("[+-]?[0-9]+\\.[0-9]+");
    if (t.literal_type() == LiteralType::kInteger && std::regex_match(t.value(), bare_integer)) {
      return t.value();
    }
    if (t.literal_type() == LiteralType::kDecimal && std::regex_match(t.value(), bare_decimal)) {
      return t.value();
    }
  }
  return t.canonical();
}

}  // namespace

BgpQuery parse_sparql(std::string_view text) { return SparqlParser(text).run(); }

std::string serialize_sparql(const BgpQuery& q) {
  std::ostringstream out;
  for (const auto& [p, iri] : q.prefixes) out << "PREFIX " << p << ": <" << iri << ">\n";
  out << "SELECT";
  if (q.distinct) out << " DISTINCT";
  for (const auto& v : q.select) out << " ?" << v;
  if (q.count_variable) out << " (COUNT(DISTINCT ?" << *q.count_variable << ") AS ?" << q.count_alias << ")";
  out << "\nWHERE {\n";
  for (const auto& p : q.patterns) {
    std::string pred = !p.predicate.is_variable() && p.predicate.term().value() == vocab::kRdfType
                           ? "a"
                           : write_term(q, p.predicate);
    out << "  " << write_term(q, p.subject) << ' ' << pred << ' ' << write_term(q, p.object) << " .\n";
  }
  for (const auto& f : q.filters) {
    out << "  FILTER(?" << f.variable << ' ' << op_text(f.op) << ' '
        << write_term(q, PatternTerm::constant(f.constant)) << ")\n";
  }
  out << "}\n";
  if (!q.group_by.empty()) {
    out << "GROUP BY";
    for (const auto& v : q.group_by) out << " ?" << v;
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Depth

std::size_t query_depth(const BgpQuery& q) {
  if (q.patterns.empty()) throw DisconnectedPatternError("query has no triple patterns");
  auto adj = query_graph(q);
  std::size_t depth = 0;
  for (const auto& [node, _] : adj) {
    auto dist = bfs(adj, node);
    if (dist.size() != adj.size()) {
      throw DisconnectedPatternError("triple patterns do not form a connected graph");
    }
    for (const auto& [__, d] : dist) depth = std::max(depth, d);
  }
  return depth;
}

}  // namespace orkg
