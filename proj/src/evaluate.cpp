#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

#include "orkg/error.hpp"
#include "orkg/query.hpp"

namespace orkg {

namespace {

using Binding = std::vector<const Term*>;

struct Slot {
  int var = -1;  // variable index, or -1 for a constant
  const Term* constant = nullptr;
};

// Positional indexes over a graph's triples.
class TripleIndex {
 public:
  explicit TripleIndex(const Graph& g) {
    for (const auto& t : g) {
      all_.push_back(&t);
      by_subject_[t.subject.canonical()].push_back(&t);
      by_predicate_[t.predicate.canonical()].push_back(&t);
      by_object_[t.object.canonical()].push_back(&t);
    }
  }

  const std::vector<const Triple*>& candidates(const Term* s, const Term* p, const Term* o) const {
    static const std::vector<const Triple*> kNone;
    const std::vector<const Triple*>* best = &all_;
    auto narrow = [&](const std::map<std::string, std::vector<const Triple*>>& idx, const Term* t) {
      if (!t) return;
      auto it = idx.find(t->canonical());
      const auto* list = it == idx.end() ? &kNone : &it->second;
      if (list->size() < best->size()) best = list;
    };
    narrow(by_subject_, s);
    narrow(by_object_, o);
    narrow(by_predicate_, p);
    return *best;
  }

 private:
  std::vector<const Triple*> all_;
  std::map<std::string, std::vector<const Triple*>> by_subject_, by_predicate_, by_object_;
};

bool passes(const Filter& f, const Term& value) {
  if (f.constant.is_numeric()) {
    if (!value.is_numeric()) {
      throw TypeMismatchError("FILTER compares " + value.canonical() + " numerically with " +
                              f.constant.value());
    }
    double a = value.numeric_value();
    double b = f.constant.numeric_value();
    switch (f.op) {
      case CompareOp::kLt: return a < b;
      case CompareOp::kLe: return a <= b;
      case CompareOp::kEq: return a == b;
      case CompareOp::kGe: return a >= b;
      case CompareOp::kGt: return a > b;
    }
  }
  if (f.op != CompareOp::kEq) {
    throw TypeMismatchError("FILTER orders against non-numeric constant " + f.constant.canonical());
  }
  return value == f.constant;
}

}  // namespace

ResultSet evaluate(const BgpQuery& q, const Graph& g) {
  std::map<std::string, int> vars;
  auto var_index = [&](const std::string& name) {
    auto [it, inserted] = vars.emplace(name, static_cast<int>(vars.size()));
    return it->second;
  };
  std::vector<std::array<Slot, 3>> patterns;
  for (const auto& p : q.patterns) {
    std::array<Slot, 3> slots;
    const PatternTerm* parts[] = {&p.subject, &p.predicate, &p.object};
    for (int k = 0; k < 3; ++k) {
      if (parts[k]->is_variable()) {
        slots[k].var = var_index(parts[k]->name());
      } else {
        slots[k].constant = &parts[k]->term();
      }
    }
    patterns.push_back(slots);
  }
  auto lookup = [&](const std::string& name) {
    auto it = vars.find(name);
    if (it == vars.end()) throw UnboundVariableError("?" + name + " does not occur in any triple pattern");
    return it->second;
  };

  ResultSet out;
  out.columns = q.columns();
  if (patterns.empty()) return out;

  TripleIndex index(g);
  std::vector<Binding> solutions;
  Binding binding(vars.size(), nullptr);
  std::vector<bool> done(patterns.size(), false);

  // Depth-first join; at each level pick the pending pattern with the most
  // bound positions, breaking ties by pattern order.
  auto bound_count = [&](const std::array<Slot, 3>& s) {
    int n = 0;
    for (const auto& slot : s) n += slot.var < 0 || binding[slot.var] != nullptr;
    return n;
  };
  std::function<void(std::size_t)> join = [&](std::size_t level) {
    if (level == patterns.size()) {
      solutions.push_back(binding);
      return;
    }
    std::size_t pick = patterns.size();
    int best = -1;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (done[i]) continue;
      int b = bound_count(patterns[i]);
      if (b > best) {
        best = b;
        pick = i;
      }
    }
    const auto& s = patterns[pick];
    auto value = [&](const Slot& slot) -> const Term* {
      return slot.var < 0 ? slot.constant : binding[slot.var];
    };
    done[pick] = true;
    for (const Triple* t : index.candidates(value(s[0]), value(s[1]), value(s[2]))) {
      const Term* parts[] = {&t->subject, &t->predicate, &t->object};
      std::vector<int> newly;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        const Term* v = value(s[k]);
        if (v) {
          ok = *v == *parts[k];
        } else {
          binding[s[k].var] = parts[k];
          newly.push_back(s[k].var);
        }
      }
      if (ok) join(level + 1);
      for (int v : newly) binding[v] = nullptr;
    }
    done[pick] = false;
  };
  join(0);

  std::vector<std::pair<int, const Filter*>> filters;
  for (const auto& f : q.filters) filters.emplace_back(lookup(f.variable), &f);
  std::erase_if(solutions, [&](const Binding& b) {
    for (const auto& [v, f] : filters) {
      if (!passes(*f, *b[v])) return true;
    }
    return false;
  });

  if (q.count_variable) {
    int counted = lookup(*q.count_variable);
    std::vector<int> keys;
    for (const auto& v : q.group_by) keys.push_back(lookup(v));
    std::map<std::vector<Term>, std::set<Term>> groups;
    for (const auto& b : solutions) {
      std::vector<Term> key;
      for (int k : keys) key.push_back(*b[k]);
      groups[key].insert(*b[counted]);
    }
    for (const auto& [key, members] : groups) {
      std::vector<Term> row;
      for (const auto& v : q.select) {
        auto pos = std::find(q.group_by.begin(), q.group_by.end(), v) - q.group_by.begin();
        row.push_back(key[static_cast<std::size_t>(pos)]);
      }
      row.push_back(Term::literal(std::to_string(members.size()), LiteralType::kInteger));
      out.rows.push_back(std::move(row));
    }
  } else {
    std::vector<int> cols;
    for (const auto& v : q.select) cols.push_back(lookup(v));
    for (const auto& b : solutions) {
      std::vector<Term> row;
      for (int c : cols) row.push_back(*b[c]);
      out.rows.push_back(std::move(row));
    }
  }
  std::sort(out.rows.begin(), out.rows.end());
  if (q.distinct) out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
  return out;
}

std::string result_csv(const ResultSet& r) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + field(r.columns[i]);
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + field(row[i].is_blank() ? "_:" + row[i].value() : row[i].value());
    }
    out += "\n";
  }
  return out;
}

}  // namespace orkg
