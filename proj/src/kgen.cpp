#include "orkg/kgen.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>
#include <optional>

#include <json.hpp>

#include "orkg/error.hpp"

namespace orkg {

std::string variant_name(KgVariant v) { return v == KgVariant::kBaseline ? "baseline" : "reshaped"; }

KgVariant parse_variant(const std::string& name) {
  if (name == "baseline") return KgVariant::kBaseline;
  if (name == "reshaped") return KgVariant::kReshaped;
  throw InputError("unknown variant '" + name + "' (expected baseline or reshaped)");
}

std::string KgBuildReport::to_json() const {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(variant);
  j["entity_count"] = graph_stats.entity_count;
  j["blank_node_count"] = graph_stats.blank_node_count;
  j["triple_count"] = graph_stats.triple_count;
  j["storage_bytes"] = graph_stats.storage_bytes;
  j["build_wall_time_s"] = build_wall_time;
  j["rows_processed"] = rows_processed;
  j["triples_per_row"] = triples_per_row;
  return j.dump();
}

std::string url_encode(std::string_view s) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string EntityMintingPolicy::row_iri(const std::string& cls, const std::string& table,
                                         std::size_t index) const {
  return base + "/" + local_name(cls) + "/" + url_encode(table) + "_" + std::to_string(index);
}

std::string EntityMintingPolicy::key_iri(const std::string& cls, const std::string& value) const {
  return base + "/" + local_name(cls) + "/" + url_encode(value);
}

const AccessPlan::Attribute* AccessPlan::attribute(std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

namespace {

using Node = AccessPlan::Node;

// Incremental plan construction shared by both variants.
class PlanBuilder {
 public:
  PlanBuilder(const MappingSpec& m, const std::string& table) {
    const TableBinding* binding = m.table(table);
    if (!binding) throw InvalidMappingError("table '" + table + "' has no class binding");
    plan_.table = table;
    plan_.table_class = binding->cls;
    plan_.nodes.push_back(Node{Node::Kind::kRow, binding->cls, "", 0, false});
    for (const auto* a : m.attributes_of(table)) {
      if (a->kind != BindingKind::kClassKey) continue;
      if (a->iri == binding->cls) {
        if (!plan_.self_key.empty()) {
          throw InvalidMappingError("table '" + table + "' has two keys for its own class");
        }
        plan_.self_key = a->attribute;
      } else if (!key_attribute_.contains(a->iri)) {
        key_attribute_[a->iri] = a->attribute;
      }
    }
    for (const auto& a : m.attributes) {
      if (a.kind == BindingKind::kDataProperty) data_properties_.insert(a.iri);
    }
  }

  const std::string& table_class() const { return plan_.table_class; }
  bool elevated(const std::string& cls) const { return key_attribute_.contains(cls); }
  const std::set<std::string>& data_properties() const { return data_properties_; }

  std::size_t key_node(const std::string& cls) {
    auto it = key_nodes_.find(cls);
    if (it != key_nodes_.end()) return it->second;
    plan_.nodes.push_back(Node{Node::Kind::kKey, cls, key_attribute_.at(cls), 0, false});
    return key_nodes_[cls] = plan_.nodes.size() - 1;
  }

  std::size_t scoped_node(std::size_t scope, const std::string& cls, bool carries_data) {
    auto key = std::make_pair(scope, cls);
    auto it = scoped_nodes_.find(key);
    if (it != scoped_nodes_.end()) return it->second;
    plan_.nodes.push_back(Node{Node::Kind::kScoped, cls, "", scope, carries_data});
    return scoped_nodes_[key] = plan_.nodes.size() - 1;
  }

  std::size_t edge(std::size_t from, std::size_t to, const std::string& property, bool forward) {
    AccessPlan::Edge e{from, to, property, forward};
    for (std::size_t i = 0; i < plan_.edges.size(); ++i) {
      if (plan_.edges[i] == e) return i;
    }
    plan_.edges.push_back(e);
    return plan_.edges.size() - 1;
  }

  void add(AccessPlan::Attribute a) { plan_.attributes.push_back(std::move(a)); }
  AccessPlan take() { return std::move(plan_); }

 private:
  AccessPlan plan_;
  std::map<std::string, std::string> key_attribute_;  // elevated class -> first key column
  std::map<std::string, std::size_t> key_nodes_;
  std::map<std::pair<std::size_t, std::string>, std::size_t> scoped_nodes_;
  std::set<std::string> data_properties_;  // every mapped datatype property
};

}  // namespace

AccessPlan baseline_plan(const OntologyGraph& o, const MappingSpec& m, const std::string& table) {
  PlanBuilder b(m, table);
  const std::string& tcls = b.table_class();
  SchemaIndex index(o);

  // Classes that hold a mapped datatype property anywhere get IRIs, the rest
  // are blank nodes.
  std::set<std::string> data_classes;
  for (const auto& p : b.data_properties()) {
    auto dp = o.datatype_properties.find(p);
    if (dp != o.datatype_properties.end()) data_classes.insert(dp->second.domain);
  }

  // One chain of edges per (scope, end) pair, so two attributes that reach
  // the same entity share the nodes in between.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> chains;

  for (const auto* a : m.attributes_of(table)) {
    AccessPlan::Attribute attr{a->attribute, "", 0, {}};
    std::string target_cls;
    if (a->kind == BindingKind::kClassKey) {
      if (a->iri != tcls) target_cls = a->iri;
    } else {
      attr.property = a->iri;
      auto dp = o.datatype_properties.find(a->iri);
      if (dp == o.datatype_properties.end()) {
        throw InvalidMappingError("<" + a->iri + "> is not a datatype property of the ontology");
      }
      if (dp->second.domain != tcls) target_cls = dp->second.domain;
    }
    if (!target_cls.empty()) {
      std::optional<SchemaPath> path;
      if (o.has_class(tcls) && o.has_class(target_cls)) path = index.shortest_path(tcls, target_cls);
      if (!path) {
        throw NoPathError("no ontology path from <" + tcls + "> to <" + target_cls + "> for " +
                          table + "." + a->attribute);
      }
      std::size_t scope = 0, cur = 0;
      std::vector<std::size_t> pending;
      for (std::size_t k = 0; k < path->steps.size(); ++k) {
        const std::string& cls = path->classes[k + 1];
        bool last = k + 1 == path->steps.size();
        bool anchor = b.elevated(cls);
        std::size_t next = anchor ? b.key_node(cls) : b.scoped_node(scope, cls, data_classes.contains(cls));
        pending.push_back(b.edge(cur, next, path->steps[k].property, path->steps[k].forward));
        cur = next;
        if (anchor || last) {
          auto it = chains.emplace(std::make_pair(scope, next), pending).first;
          attr.path.insert(attr.path.end(), it->second.begin(), it->second.end());
          pending.clear();
          if (anchor) scope = next;
        }
      }
      attr.node = cur;
    }
    b.add(std::move(attr));
  }
  return b.take();
}

AccessPlan reshaped_plan(const ReshapedSchema& s, const MappingSpec& m, const std::string& table) {
  PlanBuilder b(m, table);
  const std::string& tcls = b.table_class();
  for (const auto* a : m.attributes_of(table)) {
    AccessPlan::Attribute attr{a->attribute, "", 0, {}};
    std::string who = table + "." + a->attribute;
    if (a->kind == BindingKind::kClassKey && a->iri == tcls) {
      b.add(std::move(attr));
      continue;
    }
    auto route = s.routes.find({table, a->attribute});
    if (route == s.routes.end() || route->second.empty() || route->second.front() != tcls) {
      throw MissingHomeError("reshaped schema has no route for " + who);
    }
    const auto& classes = route->second;
    for (std::size_t k = 1; k < classes.size(); ++k) {
      if (!b.elevated(classes[k])) {
        throw MissingHomeError("route of " + who + " passes <" + classes[k] +
                               ">, which is not a key entity of the table");
      }
      auto link = s.key_links.find({classes[k - 1], classes[k]});
      if (link == s.key_links.end()) {
        throw NoPathError("reshaped schema has no key link from <" + classes[k - 1] + "> to <" +
                          classes[k] + ">");
      }
      std::size_t next = b.key_node(classes[k]);
      attr.path.push_back(b.edge(attr.node, next, link->second.property, link->second.forward));
      attr.node = next;
    }
    if (a->kind == BindingKind::kDataProperty) {
      auto home = s.attribute_homes.find({table, a->attribute});
      if (home == s.attribute_homes.end()) throw MissingHomeError("no attribute home for " + who);
      if (home->second.host != classes.back()) {
        throw MissingHomeError("home <" + home->second.host + "> of " + who + " is off its route");
      }
      attr.property = home->second.property;
    }
    b.add(std::move(attr));
  }
  return b.take();
}

namespace {

const TableData* find_table(const std::vector<TableData>& tables, const std::string& name) {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

class Emitter {
 public:
  Emitter(Graph& g, const EntityMintingPolicy& policy) : g_(g), policy_(policy) {}

  void table(const AccessPlan& plan, const TableData& data) {
    auto column = [&](const std::string& attribute) {
      auto c = data.column(attribute);
      if (!c) {
        throw InvalidMappingError("table '" + data.name + "' has no column '" + attribute + "'");
      }
      return *c;
    };
    std::vector<std::size_t> attr_col;
    for (const auto& a : plan.attributes) attr_col.push_back(column(a.name));
    std::vector<std::optional<std::size_t>> node_col(plan.nodes.size());
    for (std::size_t n = 0; n < plan.nodes.size(); ++n) {
      if (plan.nodes[n].kind == Node::Kind::kKey) node_col[n] = column(plan.nodes[n].key_attribute);
    }
    std::optional<std::size_t> self_col;
    if (!plan.self_key.empty()) self_col = column(plan.self_key);

    const Term type = Term::iri(vocab::kRdfType);
    std::set<std::string> seen_keys;
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
      const auto& row = data.rows[r];
      std::vector<std::optional<Term>> ids(plan.nodes.size());
      std::vector<bool> typed(plan.nodes.size(), false);
      std::function<const std::optional<Term>&(std::size_t)> id =
          [&](std::size_t n) -> const std::optional<Term>& {
        if (ids[n]) return ids[n];
        const Node& node = plan.nodes[n];
        switch (node.kind) {
          case Node::Kind::kRow:
            if (self_col && row[*self_col].kind != Cell::Kind::kNull) {
              ids[n] = Term::iri(policy_.key_iri(node.cls, row[*self_col].text));
            } else {
              ids[n] = Term::iri(policy_.row_iri(node.cls, plan.table, r));
            }
            break;
          case Node::Kind::kKey:
            if (row[*node_col[n]].kind != Cell::Kind::kNull) {
              ids[n] = Term::iri(policy_.key_iri(node.cls, row[*node_col[n]].text));
            }
            break;
          case Node::Kind::kScoped: {
            const auto& scope = id(node.scope);
            if (!scope) break;
            if (node.carries_data) {
              ids[n] = Term::iri(scope->value() + "/" + local_name(node.cls));
            } else {
              auto key = scope->canonical() + " " + node.cls;
              auto it = blank_labels_.find(key);
              if (it == blank_labels_.end()) {
                it = blank_labels_.emplace(key, "b" + std::to_string(blank_labels_.size())).first;
              }
              ids[n] = Term::blank(it->second);
            }
            break;
          }
        }
        return ids[n];
      };
      auto touch = [&](std::size_t n) {
        if (!typed[n]) {
          typed[n] = true;
          g_.insert(*id(n), type, Term::iri(plan.nodes[n].cls));
        }
      };

      if (self_col && row[*self_col].kind != Cell::Kind::kNull &&
          !seen_keys.insert(row[*self_col].text).second) {
        throw DuplicateKeyError("table '" + data.name + "' repeats key '" + row[*self_col].text +
                                "' in column '" + plan.self_key + "'");
      }
      touch(0);
      for (std::size_t k = 0; k < plan.attributes.size(); ++k) {
        const auto& a = plan.attributes[k];
        const Cell& cell = row[attr_col[k]];
        if (cell.kind == Cell::Kind::kNull) continue;
        // Anything reached through a null key value is skipped.
        if (!id(a.node) || std::any_of(a.path.begin(), a.path.end(),
                                       [&](std::size_t e) { return !id(plan.edges[e].from); })) {
          continue;
        }
        for (std::size_t e : a.path) {
          const auto& edge = plan.edges[e];
          touch(edge.from);
          touch(edge.to);
          const Term& from = *id(edge.from);
          const Term& to = *id(edge.to);
          Term p = Term::iri(edge.property);
          if (edge.forward) {
            g_.insert(from, p, to);
          } else {
            g_.insert(to, p, from);
          }
        }
        touch(a.node);
        if (!a.is_key()) g_.insert(*id(a.node), Term::iri(a.property), cell.to_literal());
      }
    }
  }

 private:
  Graph& g_;
  const EntityMintingPolicy& policy_;
  std::map<std::string, std::string> blank_labels_;  // "<scope> <class>" -> label
};

template <typename PlanFn>
KgBuild build(KgVariant variant, const MappingSpec& m, const std::vector<TableData>& tables,
              const EntityMintingPolicy& policy, PlanFn plan_for) {
  KgBuild out;
  out.report.variant = variant;
  std::vector<std::pair<AccessPlan, const TableData*>> work;
  for (const auto& t : m.tables) {
    const TableData* data = find_table(tables, t.table);
    if (!data) continue;
    work.emplace_back(plan_for(t.table), data);
    out.report.rows_processed += data->rows.size();
  }
  auto start = std::chrono::steady_clock::now();
  Emitter emit(out.graph, policy);
  for (std::size_t i = 0; i < work.size(); ++i) emit.table(work[i].first, *work[i].second);
  out.report.build_wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report.graph_stats = graph_stats(out.graph);
  out.report.triples_per_row = static_cast<double>(out.report.graph_stats.triple_count) /
                               static_cast<double>(std::max<std::size_t>(out.report.rows_processed, 1));
  return out;
}

}  // namespace

KgBuild build_baseline(const OntologyGraph& o, const MappingSpec& m,
                       const std::vector<TableData>& tables, const EntityMintingPolicy& policy) {
  return build(KgVariant::kBaseline, m, tables, policy,
               [&](const std::string& t) { return baseline_plan(o, m, t); });
}

KgBuild build_reshaped(const ReshapedSchema& s, const MappingSpec& m,
                       const std::vector<TableData>& tables, const EntityMintingPolicy& policy) {
  return build(KgVariant::kReshaped, m, tables, policy,
               [&](const std::string& t) { return reshaped_plan(s, m, t); });
}

std::multiset<std::pair<std::string, std::string>> literal_payload(const Graph& g) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (const auto& t : g) {
    if (t.object.is_literal()) out.emplace(local_name(t.predicate.value()), t.object.canonical());
  }
  return out;
}

}  // namespace orkg
