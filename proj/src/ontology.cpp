#include "orkg/ontology.hpp"

#include <deque>

#include "orkg/error.hpp"

namespace orkg {

void OntologyGraph::check_invariants() const {
  for (const auto& [iri, op] : object_properties) {
    if (!classes.contains(op.domain)) {
      throw UndeclaredClassError("domain <" + op.domain + "> of <" + iri + "> is not a class");
    }
    if (!classes.contains(op.range)) {
      throw UndeclaredClassError("range <" + op.range + "> of <" + iri + "> is not a class");
    }
    if (datatype_properties.contains(iri)) {
      throw OntologyConflictError("<" + iri + "> is both an object and a datatype property");
    }
  }
  for (const auto& [iri, dp] : datatype_properties) {
    if (!classes.contains(dp.domain)) {
      throw UndeclaredClassError("domain <" + dp.domain + "> of <" + iri + "> is not a class");
    }
  }
}

SchemaPath SchemaPath::reversed() const {
  SchemaPath out;
  out.classes.assign(classes.rbegin(), classes.rend());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    out.steps.push_back(PathStep{it->property, !it->forward});
  }
  return out;
}

SchemaPath SchemaPath::concat(const SchemaPath& tail) const {
  if (classes.empty()) return tail;
  if (tail.classes.empty()) return *this;
  SchemaPath out = *this;
  out.classes.insert(out.classes.end(), tail.classes.begin() + 1, tail.classes.end());
  out.steps.insert(out.steps.end(), tail.steps.begin(), tail.steps.end());
  return out;
}

bool path_is_valid(const SchemaPath& path, const OntologyGraph& o) {
  if (path.classes.empty()) return path.steps.empty();
  if (path.classes.size() != path.steps.size() + 1) return false;
  for (const auto& c : path.classes) {
    if (!o.has_class(c)) return false;
  }
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    auto it = o.object_properties.find(path.steps[i].property);
    if (it == o.object_properties.end()) return false;
    const auto& from = path.classes[i];
    const auto& to = path.classes[i + 1];
    bool ok = path.steps[i].forward ? (it->second.domain == from && it->second.range == to)
                                    : (it->second.range == from && it->second.domain == to);
    if (!ok) return false;
  }
  return true;
}

OntologyGraph load_ontology(const Graph& g) {
  OntologyGraph o;
  o.prefixes = g.prefixes();
  std::set<std::string> object_props;
  std::set<std::string> datatype_props;
  std::map<std::string, std::vector<std::string>> domains;
  std::map<std::string, std::vector<std::string>> ranges;

  for (const auto& t : g) {
    if (!t.subject.is_iri()) continue;
    const std::string& s = t.subject.value();
    const std::string& p = t.predicate.value();
    if (p == vocab::kRdfType && t.object.is_iri()) {
      const std::string& type = t.object.value();
      if (type == vocab::kOwlClass || type == vocab::kRdfsClass) o.classes.insert(s);
      if (type == vocab::kOwlObjectProperty) object_props.insert(s);
      if (type == vocab::kOwlDatatypeProperty) datatype_props.insert(s);
    } else if (p == vocab::kRdfsDomain && t.object.is_iri()) {
      domains[s].push_back(t.object.value());
    } else if (p == vocab::kRdfsRange && t.object.is_iri()) {
      ranges[s].push_back(t.object.value());
    } else if (p == vocab::kRdfsLabel && t.object.is_literal()) {
      o.labels[s] = t.object.value();
    }
  }

  auto single = [](const std::map<std::string, std::vector<std::string>>& m,
                   const std::string& iri) -> std::optional<std::string> {
    auto it = m.find(iri);
    if (it == m.end() || it->second.empty()) return std::nullopt;
    if (it->second.size() > 1) {
      throw OntologyConflictError("<" + iri + "> has more than one domain or range");
    }
    return it->second.front();
  };

  for (const auto& iri : object_props) {
    if (datatype_props.contains(iri)) {
      throw OntologyConflictError("<" + iri + "> is declared both object and datatype property");
    }
    auto domain = single(domains, iri);
    if (!domain) throw MissingDomainError("object property <" + iri + "> has no rdfs:domain");
    auto range = single(ranges, iri);
    if (!range) throw MissingRangeError("object property <" + iri + "> has no rdfs:range");
    o.object_properties[iri] = ObjectProperty{*domain, *range};
  }
  for (const auto& iri : datatype_props) {
    auto domain = single(domains, iri);
    if (!domain) throw MissingDomainError("datatype property <" + iri + "> has no rdfs:domain");
    o.datatype_properties[iri] = DatatypeProperty{*domain};
  }
  o.check_invariants();
  return o;
}

Graph ontology_to_graph(const OntologyGraph& o) {
  Graph g;
  for (const auto& [p, iri] : o.prefixes) g.bind_prefix(p, iri);
  const Term type = Term::iri(vocab::kRdfType);
  const Term domain = Term::iri(vocab::kRdfsDomain);
  const Term range = Term::iri(vocab::kRdfsRange);
  for (const auto& c : o.classes) g.insert(Term::iri(c), type, Term::iri(vocab::kOwlClass));
  for (const auto& [iri, op] : o.object_properties) {
    g.insert(Term::iri(iri), type, Term::iri(vocab::kOwlObjectProperty));
    g.insert(Term::iri(iri), domain, Term::iri(op.domain));
    g.insert(Term::iri(iri), range, Term::iri(op.range));
  }
  for (const auto& [iri, dp] : o.datatype_properties) {
    g.insert(Term::iri(iri), type, Term::iri(vocab::kOwlDatatypeProperty));
    g.insert(Term::iri(iri), domain, Term::iri(dp.domain));
  }
  for (const auto& [iri, label] : o.labels) {
    if (o.contains_iri(iri)) g.insert(Term::iri(iri), Term::iri(vocab::kRdfsLabel), Term::literal(label));
  }
  return g;
}

SchemaIndex::SchemaIndex(const OntologyGraph& o) : o_(&o) {
  for (const auto& c : o.classes) adj_[c];
  for (const auto& [iri, op] : o.object_properties) {
    adj_[op.domain].push_back(Edge{iri, op.range, true});
    adj_[op.range].push_back(Edge{iri, op.domain, false});
  }
  for (auto& [_, edges] : adj_) std::sort(edges.begin(), edges.end());
}

const std::vector<SchemaIndex::Edge>& SchemaIndex::neighbours(const std::string& cls) const {
  static const std::vector<Edge> kNone;
  auto it = adj_.find(cls);
  return it == adj_.end() ? kNone : it->second;
}

std::map<std::string, std::size_t> SchemaIndex::distances_from(const std::string& cls) const {
  std::map<std::string, std::size_t> dist{{cls, 0}};
  std::deque<std::string> queue{cls};
  while (!queue.empty()) {
    std::string u = std::move(queue.front());
    queue.pop_front();
    for (const auto& e : neighbours(u)) {
      if (dist.emplace(e.other, dist[u] + 1).second) queue.push_back(e.other);
    }
  }
  return dist;
}

std::optional<SchemaPath> SchemaIndex::shortest_path(const std::string& from,
                                                     const std::string& to) const {
  auto to_target = distances_from(to);
  auto it = to_target.find(from);
  if (it == to_target.end()) return std::nullopt;
  // Walk from `from`, always taking the smallest (property, class) edge that
  // stays on some shortest path; this yields the lexicographically smallest
  // sequence among all shortest paths.
  SchemaPath path;
  path.classes.push_back(from);
  std::string cur = from;
  std::size_t remaining = it->second;
  while (remaining > 0) {
    const Edge* best = nullptr;
    for (const auto& e : neighbours(cur)) {
      auto d = to_target.find(e.other);
      if (d != to_target.end() && d->second == remaining - 1) {
        best = &e;
        break;
      }
    }
    path.steps.push_back(PathStep{best->property, best->forward});
    path.classes.push_back(best->other);
    cur = best->other;
    --remaining;
  }
  return path;
}

std::optional<SchemaPath> shortest_schema_path(const OntologyGraph& o, const std::string& from,
                                               const std::string& to) {
  if (!o.has_class(from)) throw UnknownClassError("unknown class <" + from + ">");
  if (!o.has_class(to)) throw UnknownClassError("unknown class <" + to + ">");
  return SchemaIndex(o).shortest_path(from, to);
}

}  // namespace orkg
