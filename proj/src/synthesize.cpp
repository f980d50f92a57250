#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "orkg/error.hpp"
#include "orkg/query.hpp"

namespace orkg {

std::vector<AttributeRef> QueryIntent::attributes() const {
  std::vector<AttributeRef> out;
  auto add = [&](const AttributeRef& a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  for (const auto& a : targets) add(a);
  if (group_key) add(*group_key);
  if (filter) add(filter->attribute);
  for (const auto& a : context) add(a);
  return out;
}

void QueryIntent::check() const {
  std::string who = "intent '" + name + "': ";
  if (targets.empty()) throw InvalidIntentError(who + "no target attributes");
  if (kind == IntentKind::kSummary) {
    if (!group_key) throw InvalidIntentError(who + "summary intents need a group key");
    if (targets.size() != 1) throw InvalidIntentError(who + "summary intents count exactly one target");
  } else if (group_key) {
    throw InvalidIntentError(who + "only summary intents take a group key");
  }
  if (kind == IntentKind::kDiagnostic && !filter) {
    throw InvalidIntentError(who + "diagnostic intents need a filter");
  }
  for (const auto& a : attributes()) {
    if (a.table != targets.front().table) {
      throw InvalidIntentError(who + "attributes span tables '" + targets.front().table + "' and '" +
                               a.table + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Intent files

namespace {

const char* kind_code(IntentKind k) {
  switch (k) {
    case IntentKind::kInspection: return "I";
    case IntentKind::kSummary: return "II";
    case IntentKind::kDiagnostic: return "III";
  }
  return "I";
}

Term constant_term(const std::string& text) {
  Cell c = Cell::classify(text);
  if (c.kind == Cell::Kind::kNull) return Term::literal("");
  return c.to_literal();
}

}  // namespace

std::vector<QueryIntent> parse_intents(std::string_view text) {
  std::vector<QueryIntent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    auto fail = [&](const std::string& reason) -> void { throw SyntaxError(line_no, 1, reason); };
    if (w[0] != "intent" || w.size() < 2) fail("expected 'intent <name> key=value ...'");
    QueryIntent intent;
    intent.name = w[1];
    if (!names.insert(intent.name).second) fail("intent '" + intent.name + "' defined twice");
    auto attr = [&](const std::string& s) {
      auto dot = s.find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) {
        fail("expected <table>.<attribute>, found '" + s + "'");
      }
      return AttributeRef{s.substr(0, dot), s.substr(dot + 1)};
    };
    auto list = [&](const std::string& s) {
      std::vector<AttributeRef> refs;
      std::size_t start = 0;
      while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        refs.push_back(attr(s.substr(start, comma - start)));
        start = comma + 1;
      }
      return refs;
    };
    bool has_kind = false;
    std::set<std::string> seen;
    for (std::size_t i = 2; i < w.size(); ++i) {
      auto eq = w[i].find('=');
      if (eq == std::string::npos) fail("expected key=value, found '" + w[i] + "'");
      std::string key = w[i].substr(0, eq), value = w[i].substr(eq + 1);
      if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
      if (key == "kind") {
        has_kind = true;
        if (value == "I" || value == "Inspection") {
          intent.kind = IntentKind::kInspection;
        } else if (value == "II" || value == "Summary") {
          intent.kind = IntentKind::kSummary;
        } else if (value == "III" || value == "Diagnostic") {
          intent.kind = IntentKind::kDiagnostic;
        } else {
          fail("unknown intent kind '" + value + "'");
        }
      } else if (key == "targets") {
        intent.targets = list(value);
      } else if (key == "group") {
        intent.group_key = attr(value);
      } else if (key == "context") {
        intent.context = list(value);
      } else if (key == "filter") {
        auto pos = value.find_first_of("<>=");
        if (pos == std::string::npos) fail("filter needs a comparison operator");
        std::size_t len = pos + 1 < value.size() && value[pos + 1] == '=' && value[pos] != '=' ? 2 : 1;
        std::string op = value.substr(pos, len);
        CompareOp cmp = op == "<" ? CompareOp::kLt
                        : op == "<=" ? CompareOp::kLe
                        : op == "=" ? CompareOp::kEq
                        : op == ">=" ? CompareOp::kGe
                                     : CompareOp::kGt;
        std::string constant = value.substr(pos + len);
        if (constant.empty()) fail("filter needs a constant");
        intent.filter = IntentFilter{attr(value.substr(0, pos)), cmp, constant_term(constant)};
      } else {
        fail("unknown key '" + key + "'");
      }
    }
    if (!has_kind) fail("missing kind=");
    try {
      intent.check();
    } catch (const InvalidIntentError& e) {
      fail(e.what());
    }
    out.push_back(std::move(intent));
  }
  return out;
}

std::string serialize_intents(const std::vector<QueryIntent>& intents) {
  std::ostringstream out;
  auto list = [](const std::vector<AttributeRef>& refs) {
    std::string s;
    for (std::size_t i = 0; i < refs.size(); ++i) s += (i ? "," : "") + refs[i].text();
    return s;
  };
  for (const auto& i : intents) {
    out << "intent " << i.name << " kind=" << kind_code(i.kind) << " targets=" << list(i.targets);
    if (i.group_key) out << " group=" << i.group_key->text();
    if (i.filter) {
      out << " filter=" << i.filter->attribute.text() << op_text(i.filter->op)
          << i.filter->constant.value();
    }
    if (!i.context.empty()) out << " context=" << list(i.context);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  if (out.empty()) out = "v";
  return out;
}

}  // namespace

BgpQuery synthesize(const QueryIntent& intent, const AccessPlan& plan) {
  intent.check();
  if (intent.targets.front().table != plan.table) {
    throw InvalidIntentError("intent '" + intent.name + "' is over table '" +
                             intent.targets.front().table + "', plan is for '" + plan.table + "'");
  }
  auto attrs = intent.attributes();
  std::vector<const AccessPlan::Attribute*> plan_attrs;
  for (const auto& a : attrs) {
    const auto* pa = plan.attribute(a.attribute);
    if (!pa) throw InvalidIntentError("intent '" + intent.name + "': unknown attribute " + a.text());
    plan_attrs.push_back(pa);
  }

  // Variable names: attributes first, then the remaining plan nodes.
  std::set<std::string> taken;
  auto fresh = [&](std::string base) {
    std::string name = base;
    for (int n = 2; taken.contains(name); ++n) name = base + "_" + std::to_string(n);
    taken.insert(name);
    return name;
  };
  std::map<std::string, std::string> attr_var;
  std::map<std::size_t, std::string> node_var;
  for (const auto* pa : plan_attrs) {
    if (pa->is_key() || (pa->name == plan.self_key)) {
      auto it = node_var.find(pa->node);
      attr_var[pa->name] = it != node_var.end() ? it->second : (node_var[pa->node] = fresh(sanitize(pa->name)));
    } else {
      attr_var[pa->name] = fresh(sanitize(pa->name));
    }
  }
  auto var_of = [&](std::size_t node) {
    auto it = node_var.find(node);
    if (it != node_var.end()) return it->second;
    return node_var[node] = fresh(node == 0 ? "row" : "n" + std::to_string(node));
  };

  BgpQuery q;
  auto add = [&](TriplePattern p) {
    if (std::find(q.patterns.begin(), q.patterns.end(), p) == q.patterns.end()) {
      q.patterns.push_back(std::move(p));
    }
  };
  add(TriplePattern{PatternTerm::variable(var_of(0)), PatternTerm::constant(Term::iri(vocab::kRdfType)),
                    PatternTerm::constant(Term::iri(plan.table_class))});
  for (const auto* pa : plan_attrs) {
    for (std::size_t e : pa->path) {
      const auto& edge = plan.edges[e];
      auto from = PatternTerm::variable(var_of(edge.from));
      auto to = PatternTerm::variable(var_of(edge.to));
      auto p = PatternTerm::constant(Term::iri(edge.property));
      add(edge.forward ? TriplePattern{from, p, to} : TriplePattern{to, p, from});
    }
    if (!pa->is_key()) {
      add(TriplePattern{PatternTerm::variable(var_of(pa->node)), PatternTerm::constant(Term::iri(pa->property)),
                        PatternTerm::variable(attr_var.at(pa->name))});
    }
  }

  auto var = [&](const AttributeRef& a) { return attr_var.at(a.attribute); };
  switch (intent.kind) {
    case IntentKind::kInspection:
      for (const auto& a : intent.targets) q.select.push_back(var(a));
      break;
    case IntentKind::kSummary:
      q.select.push_back(var(*intent.group_key));
      q.group_by.push_back(var(*intent.group_key));
      q.count_variable = var(intent.targets.front());
      q.count_alias = fresh("count");
      break;
    case IntentKind::kDiagnostic:
      for (const auto& a : intent.targets) q.select.push_back(var(a));
      for (const auto& a : intent.context) {
        if (std::find(q.select.begin(), q.select.end(), var(a)) == q.select.end()) q.select.push_back(var(a));
      }
      break;
  }
  if (intent.filter) {
    q.filters.push_back(Filter{var(intent.filter->attribute), intent.filter->op, intent.filter->constant});
  }
  q.check();
  return q;
}

namespace {

template <typename PlanFn>
BgpQuery synthesize_with(const QueryIntent& intent, PlanFn make_plan) {
  intent.check();
  AccessPlan plan;
  try {
    plan = make_plan(intent.targets.front().table);
  } catch (const NoPathError& e) {
    throw UnreachableAttributeError(std::string("intent '") + intent.name + "': " + e.what());
  } catch (const MissingHomeError& e) {
    throw UnreachableAttributeError(std::string("intent '") + intent.name + "': " + e.what());
  }
  return synthesize(intent, plan);
}

}  // namespace

BgpQuery synthesize(const QueryIntent& intent, const OntologyGraph& o, const MappingSpec& m) {
  return synthesize_with(intent, [&](const std::string& t) { return baseline_plan(o, m, t); });
}

BgpQuery synthesize(const QueryIntent& intent, const ReshapedSchema& s, const MappingSpec& m) {
  return synthesize_with(intent, [&](const std::string& t) { return reshaped_plan(s, m, t); });
}

}  // namespace orkg
