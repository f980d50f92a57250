#include "orkg/reshape.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "orkg/error.hpp"

namespace orkg {

namespace {

class UnionFind {
 public:
  void add(const std::string& x) { parent_.emplace(x, x); }

  const std::string& find(const std::string& x) {
    std::string* p = &parent_.at(x);
    if (*p == x) return *p;
    *p = find(*p);
    return *p;
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    // Smaller IRI becomes the root so component order is stable.
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
  }

  // Components ordered by smallest member.
  std::vector<std::set<std::string>> components() {
    std::map<std::string, std::set<std::string>> by_root;
    for (const auto& [x, _] : parent_) by_root[find(x)].insert(x);
    std::vector<std::set<std::string>> out;
    for (auto& [_, members] : by_root) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return out;
  }

 private:
  std::map<std::string, std::string> parent_;
};

SchemaPath single_step(const std::string& from, const std::string& property, const std::string& to) {
  return SchemaPath{{from, to}, {PathStep{property, true}}};
}

std::string strip_trailing_separator(std::string s) {
  while (!s.empty() && (s.back() == '#' || s.back() == '/')) s.pop_back();
  return s;
}

}  // namespace

std::set<std::string> FragmentSet::classes() const {
  std::set<std::string> out;
  for (const auto& f : fragments) out.insert(f.classes.begin(), f.classes.end());
  return out;
}

FragmentSet select_subgraph(const OntologyGraph& o, const MappingSpec& m) {
  std::set<std::string> nodes;
  std::set<std::string> bound_props;
  for (const auto& t : m.tables) {
    if (o.has_class(t.cls)) nodes.insert(t.cls);
  }
  for (const auto& a : m.attributes) {
    if (a.kind == BindingKind::kClassKey) {
      if (o.has_class(a.iri)) nodes.insert(a.iri);
    } else if (auto it = o.datatype_properties.find(a.iri); it != o.datatype_properties.end()) {
      nodes.insert(it->second.domain);
      bound_props.insert(a.iri);
    }
  }

  UnionFind uf;
  for (const auto& n : nodes) uf.add(n);
  for (const auto& [iri, op] : o.object_properties) {
    if (nodes.contains(op.domain) && nodes.contains(op.range)) uf.unite(op.domain, op.range);
  }

  FragmentSet out;
  for (auto& members : uf.components()) {
    Fragment f;
    f.classes = std::move(members);
    for (const auto& [iri, op] : o.object_properties) {
      if (f.classes.contains(op.domain) && f.classes.contains(op.range)) f.edges.insert(iri);
    }
    for (const auto& p : bound_props) {
      if (f.classes.contains(o.datatype_properties.at(p).domain)) f.datatype_properties.insert(p);
    }
    out.fragments.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Connection

ConnectedSchema connect_fragments(const OntologyGraph& o, const FragmentSet& f,
                                  const std::vector<ConnectionHint>& hints) {
  ConnectedSchema out;
  std::set<std::string> edge_keys;  // property|domain|range
  auto add_edge = [&](SchemaEdge e) {
    std::string key = e.property + "|" + e.domain + "|" + e.range;
    if (edge_keys.insert(key).second) out.edges.push_back(std::move(e));
  };

  for (const auto& frag : f.fragments) {
    out.selected.insert(frag.classes.begin(), frag.classes.end());
    for (const auto& p : frag.edges) {
      const auto& op = o.object_properties.at(p);
      add_edge(SchemaEdge{p, op.domain, op.range, single_step(op.domain, p, op.range), false});
    }
  }
  out.classes = out.selected;
  if (out.classes.empty() && hints.empty()) return out;

  auto components = [&]() {
    UnionFind uf;
    for (const auto& c : out.classes) uf.add(c);
    for (const auto& e : out.edges) uf.unite(e.domain, e.range);
    return uf.components();
  };

  for (const auto& h : hints) {
    auto before = components();
    auto component_of = [&](const std::string& c) -> int {
      for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i].contains(c)) return static_cast<int>(i);
      }
      return -1;
    };
    bool joins = component_of(h.from) != component_of(h.to) || component_of(h.from) < 0;
    for (const auto& c : {h.from, h.to}) {
      out.retained.insert(c);
      out.classes.insert(c);
    }
    add_edge(SchemaEdge{h.property, h.from, h.to, single_step(h.from, h.property, h.to), true});
    if (joins) {
      ConnectorLogEntry log;
      log.from_class = h.from;
      log.to_class = h.to;
      log.hint = h;
      log.cost = 0;
      out.log.push_back(std::move(log));
    }
  }

  SchemaIndex index(o);
  std::map<std::string, std::map<std::string, std::size_t>> dist_cache;
  auto distances = [&](const std::string& c) -> const std::map<std::string, std::size_t>& {
    auto it = dist_cache.find(c);
    if (it == dist_cache.end()) {
      it = dist_cache.emplace(c, o.has_class(c) ? index.distances_from(c)
                                                 : std::map<std::string, std::size_t>{})
               .first;
    }
    return it->second;
  };

  while (true) {
    auto comps = components();
    if (comps.size() <= 1) break;

    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    std::size_t best = kInf;
    std::string best_a, best_b;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (std::size_t j = i + 1; j < comps.size(); ++j) {
        for (const auto& a : comps[i]) {
          const auto& da = distances(a);
          for (const auto& b : comps[j]) {
            auto it = da.find(b);
            if (it != da.end() && it->second < best) {
              best = it->second;
              best_a = a;
              best_b = b;
            }
          }
        }
      }
    }
    if (best == kInf) {
      out.connected = false;
      ConnectorLogEntry warn;
      warn.warning = true;
      warn.message = "DisconnectedResultWarning: " + std::to_string(comps.size()) +
                     " components cannot be joined through the ontology";
      out.log.push_back(std::move(warn));
      break;
    }

    SchemaPath path = *index.shortest_path(best_a, best_b);
    ConnectorLogEntry log;
    log.from_class = best_a;
    log.to_class = best_b;
    log.cost = path.length();
    for (std::size_t k = 1; k + 1 < path.classes.size(); ++k) {
      const auto& c = path.classes[k];
      if (out.classes.insert(c).second) {
        out.connectors.insert(c);
        ++log.imported;
      }
    }
    for (std::size_t k = 0; k < path.steps.size(); ++k) {
      const auto& p = path.steps[k].property;
      const auto& op = o.object_properties.at(p);
      add_edge(SchemaEdge{p, op.domain, op.range, single_step(op.domain, p, op.range), false});
    }
    log.path = std::move(path);
    out.log.push_back(std::move(log));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compaction

std::string schema_base(const MappingSpec& m) {
  for (const auto& t : m.tables) return strip_trailing_separator(iri_namespace(t.cls));
  return "urn:orkg:schema";
}

namespace {

std::string composite_name(const SchemaPath& path) {
  std::string name;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    if (i > 0) name += "_" + local_name(path.classes[i]) + "_";
    name += local_name(path.steps[i].property);
    if (!path.steps[i].forward) name += "-inv";
  }
  return name;
}

std::size_t forward_steps(const SchemaPath& p) {
  return static_cast<std::size_t>(
      std::count_if(p.steps.begin(), p.steps.end(), [](const PathStep& s) { return s.forward; }));
}

// Orients `path` (A..B) so that it runs domain -> range: prefer more forward
// steps, then the smaller endpoint IRI as domain.
SchemaPath orient(const SchemaPath& path) {
  SchemaPath rev = path.reversed();
  std::size_t f = forward_steps(path), r = forward_steps(rev);
  if (f != r) return f > r ? path : rev;
  return path.source() <= path.target() ? path : rev;
}

class Compactor {
 public:
  Compactor(const OntologyGraph& o, const ConnectedSchema& c, const MappingSpec& m)
      : o_(o), connected_(c), m_(m), base_(schema_base(m)) {}

  ReshapedSchema run() {
    ReshapedSchema s;
    s.connector_log = connected_.log;
    s.retained = connected_.retained;
    s.ontology.prefixes = o_.prefixes;

    std::set<std::string> identity = connected_.retained;
    std::map<std::string, std::string> table_class;
    for (const auto& t : m_.tables) {
      table_class[t.table] = t.cls;
      identity.insert(t.cls);
    }
    std::map<std::string, std::set<std::string>> elevated;  // table -> classes
    for (const auto& a : m_.attributes) {
      if (a.kind == BindingKind::kClassKey) {
        identity.insert(a.iri);
        elevated[a.table].insert(a.iri);
      }
    }

    edges_ = connected_.edges;
    for (const auto& [iri, _] : o_.object_properties) taken_.insert(iri);
    for (const auto& e : edges_) taken_.insert(e.property);

    std::set<std::string> classes = connected_.classes;
    for (const auto& x : connected_.classes) {
      if (identity.contains(x)) continue;
      contract(x);
      classes.erase(x);
    }

    s.ontology.classes = classes;
    for (const auto& e : edges_) {
      s.ontology.object_properties[e.property] = ObjectProperty{e.domain, e.range};
      if (composites_.contains(e.property)) s.composite_provenance[e.property] = e.provenance;
    }

    // Routes: the kept classes met along the shortest ontology path from the
    // table class to each attribute's class. Data is homed on the last one,
    // and consecutive route classes are joined by a key link.
    SchemaIndex index(o_);
    for (const auto& a : m_.attributes) {
      auto tc = table_class.find(a.table);
      if (tc == table_class.end()) continue;
      const std::string& tcls = tc->second;
      const auto& kept = elevated[a.table];
      std::string target = a.kind == BindingKind::kClassKey ? a.iri : o_.datatype_properties.at(a.iri).domain;
      std::vector<std::string> route{tcls};
      if (target != tcls && o_.has_class(tcls) && o_.has_class(target)) {
        if (auto path = index.shortest_path(tcls, target)) {
          for (std::size_t k = 1; k < path->classes.size(); ++k) {
            if (kept.contains(path->classes[k]) && path->classes[k] != tcls) route.push_back(path->classes[k]);
          }
        }
      }
      if (a.kind == BindingKind::kClassKey && route.back() != target) {
        throw NoPathError("elevated class <" + target + "> is unreachable from table class <" + tcls + ">");
      }
      for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        ClassPair link{route[k], route[k + 1]};
        if (!s.key_links.contains(link)) s.key_links[link] = key_link(s, link.first, link.second);
      }
      s.routes[{a.table, a.attribute}] = route;
      if (a.kind != BindingKind::kDataProperty) continue;
      const std::string& host = route.back();
      std::string prop = a.iri;
      auto existing = s.ontology.datatype_properties.find(prop);
      if (existing != s.ontology.datatype_properties.end() && existing->second.domain != host) {
        prop = base_ + "/rehomed/" + local_name(host) + "/" + local_name(a.iri);
      }
      s.ontology.datatype_properties[prop] = DatatypeProperty{host};
      s.attribute_homes[{a.table, a.attribute}] = AttributeHome{host, prop};
    }
    for (const auto& [iri, label] : o_.labels) {
      if (s.ontology.contains_iri(iri)) s.ontology.labels[iri] = label;
    }
    return s;
  }

 private:
  std::string mint(const SchemaPath& path) {
    std::string iri = base_ + "/composite/" + composite_name(path);
    std::string candidate = iri;
    for (int n = 2; taken_.contains(candidate); ++n) candidate = iri + "_" + std::to_string(n);
    taken_.insert(candidate);
    composites_.insert(candidate);
    return candidate;
  }

  void contract(const std::string& x) {
    std::vector<SchemaEdge> incident, rest;
    for (auto& e : edges_) {
      if (e.domain == x && e.range == x) continue;  // self-loop on a contracted class
      (e.domain == x || e.range == x ? incident : rest).push_back(std::move(e));
    }
    std::vector<SchemaEdge> added;
    for (std::size_t i = 0; i < incident.size(); ++i) {
      for (std::size_t j = i + 1; j < incident.size(); ++j) {
        const auto& ei = incident[i];
        const auto& ej = incident[j];
        SchemaPath into = ei.range == x ? ei.provenance : ei.provenance.reversed();
        SchemaPath out_of = ej.domain == x ? ej.provenance : ej.provenance.reversed();
        SchemaPath joined = into.concat(out_of);
        std::set<std::string> inner(joined.classes.begin() + 1, joined.classes.end() - 1);
        if (inner.size() + 2 != joined.classes.size() || inner.contains(joined.source()) ||
            inner.contains(joined.target())) {
          continue;  // revisits a class: a longer copy of an existing route
        }
        if (joined.source() == joined.target()) {
          std::string text;
          for (const auto& c : joined.classes) text += "<" + c + "> ";
          throw CompactionCycleError("contracting <" + x + "> would loop <" + joined.source() +
                                     "> onto itself via " + text);
        }
        SchemaPath oriented = orient(joined);
        added.push_back(SchemaEdge{mint(oriented), oriented.source(), oriented.target(), oriented,
                                   false});
      }
    }
    rest.insert(rest.end(), added.begin(), added.end());
    edges_ = std::move(rest);
  }

  PathStep key_link(ReshapedSchema& s, const std::string& from, const std::string& to) {
    std::optional<PathStep> best;
    std::string best_iri;
    for (const auto& [iri, op] : s.ontology.object_properties) {
      bool fwd = op.domain == from && op.range == to;
      bool rev = op.domain == to && op.range == from;
      if ((fwd || rev) && (!best || iri < best_iri)) {
        best = PathStep{iri, fwd};
        best_iri = iri;
      }
    }
    if (best) return *best;
    auto path = shortest_schema_path(o_, from, to);
    if (!path) {
      throw NoPathError("elevated class <" + to + "> is unreachable from table class <" + from + ">");
    }
    SchemaPath oriented = orient(*path);
    std::string iri = mint(oriented);
    s.ontology.object_properties[iri] = ObjectProperty{oriented.source(), oriented.target()};
    s.composite_provenance[iri] = oriented;
    return PathStep{iri, oriented.source() == from};
  }

  const OntologyGraph& o_;
  const ConnectedSchema& connected_;
  const MappingSpec& m_;
  std::string base_;
  std::vector<SchemaEdge> edges_;
  std::set<std::string> taken_;
  std::set<std::string> composites_;
};

}  // namespace

ReshapedSchema compact(const OntologyGraph& o, const ConnectedSchema& connected,
                       const MappingSpec& m) {
  return Compactor(o, connected, m).run();
}

ReshapedSchema reshape(const OntologyGraph& o, const MappingSpec& m,
                       const std::vector<ConnectionHint>& hints) {
  FragmentSet fragments = select_subgraph(o, m);
  ConnectedSchema connected = connect_fragments(o, fragments, hints);
  return compact(o, connected, m);
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_schema_turtle(const ReshapedSchema& s) {
  Graph g = ontology_to_graph(s.ontology);
  return serialize_turtle(g);
}

namespace {

std::string path_text(const SchemaPath& p) {
  std::string out;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (i > 0) out += " / <" + p.classes[i] + "> / ";
    out += (p.steps[i].forward ? "<" : "^<") + p.steps[i].property + ">";
  }
  return out;
}

}  // namespace

std::string serialize_provenance(const ReshapedSchema& s) {
  std::ostringstream out;
  for (const auto& [iri, path] : s.composite_provenance) {
    out << "composite <" << iri << "> := " << path_text(path) << '\n';
  }
  for (const auto& [key, home] : s.attribute_homes) {
    out << "home " << key.first << '.' << key.second << " => <" << home.host << "> <"
        << home.property << ">\n";
  }
  for (const auto& [key, route] : s.routes) {
    out << "route " << key.first << '.' << key.second << " :=";
    for (const auto& c : route) out << " <" << c << ">";
    out << '\n';
  }
  for (const auto& [pair, step] : s.key_links) {
    out << "keylink <" << pair.first << "> -> <" << pair.second << "> := "
        << (step.forward ? "<" : "^<") << step.property << ">\n";
  }
  for (const auto& c : s.retained) out << "retained <" << c << ">\n";
  for (const auto& e : s.connector_log) {
    if (e.warning) {
      out << "# " << e.message << '\n';
      continue;
    }
    out << "connector <" << e.from_class << "> <" << e.to_class << "> cost=" << e.cost
        << " imported=" << e.imported;
    if (e.hint) out << " hint=<" << e.hint->property << ">";
    if (e.path) out << " path=" << path_text(*e.path);
    out << '\n';
  }
  return out.str();
}

}  // namespace orkg
