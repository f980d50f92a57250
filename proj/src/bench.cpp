#include "orkg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "orkg/error.hpp"
#include "orkg/kgen.hpp"
#include "orkg/reshape.hpp"

namespace orkg {

namespace {

// Small, portable generator: the standard distributions are not specified
// bit-for-bit across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::uint64_t state_;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  Rng r(a * 0x100000001B3ull ^ b);
  return r.next();
}

const char* const kClassNames[] = {
    "WeldingOperation", "Machine", "WeldingProgram", "WeldingGun", "Controller", "Schedule",
    "Stage", "Electrode", "Cap", "Sensor", "CurrentCurve", "VoltageCurve", "ResistanceCurve",
    "QualityIndicator", "Spot", "Sheet", "Dress", "Transformer", "Cable", "Robot",
};

struct Suffix {
  const char* text;
  enum Kind { kDecimal, kInteger, kString } kind;
};
const Suffix kSuffixes[] = {
    {"Mean", Suffix::kDecimal}, {"Max", Suffix::kDecimal},   {"Min", Suffix::kDecimal},
    {"Std", Suffix::kDecimal},  {"Count", Suffix::kInteger}, {"Type", Suffix::kString},
    {"Rms", Suffix::kDecimal},  {"Status", Suffix::kString}, {"Duration", Suffix::kInteger},
    {"Slope", Suffix::kDecimal},
};

std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

void SynthConfig::check() const {
  if (classes == 0 || depth == 0 || branching == 0 || tables == 0 || attributes_per_table == 0 ||
      rows_per_table == 0) {
    throw ConfigError("synthetic config sizes must all be positive");
  }
  if (!(elevation_fraction >= 0 && elevation_fraction <= 1)) {
    throw ConfigError("elevation fraction must lie in [0, 1]");
  }
  if (classes < depth + 1) throw ConfigError("depth " + std::to_string(depth) + " needs more classes");
  double capacity = 0, level = 1;
  for (std::size_t d = 0; d <= depth; ++d, level *= static_cast<double>(branching)) capacity += level;
  if (static_cast<double>(classes) > capacity) {
    throw ConfigError(std::to_string(classes) + " classes do not fit depth " + std::to_string(depth) +
                      " with branching " + std::to_string(branching));
  }
  if (tables > 1 + std::min(branching, classes - 1)) {
    throw ConfigError("more tables than the root and its children can host");
  }
}

SynthCorpus generate_synthetic(const SynthConfig& cfg) {
  cfg.check();
  Rng rng(cfg.seed);
  const std::string ns = "http://example.org/weld#";
  SynthCorpus out;
  auto& o = out.ontology;
  o.prefixes["weld"] = ns;

  // Classes level by level, parents taken round-robin, holding back one class
  // per remaining level so the configured depth is reached.
  std::vector<std::string> names;
  std::vector<std::size_t> parent, level;
  std::vector<std::vector<std::size_t>> children;
  auto add_class = [&](std::optional<std::size_t> p) {
    std::size_t i = names.size();
    names.push_back(ns + (i < std::size(kClassNames) ? kClassNames[i] : "Part" + std::to_string(i)));
    parent.push_back(p.value_or(i));
    level.push_back(p ? level[*p] + 1 : 0);
    children.emplace_back();
    if (p) children[*p].push_back(i);
    o.classes.insert(names.back());
    if (p) {
      o.object_properties[ns + "has" + local_name(names.back())] = {names[*p], names.back()};
    }
  };
  add_class(std::nullopt);
  std::vector<std::size_t> previous{0};
  for (std::size_t d = 1; d <= cfg.depth; ++d) {
    std::size_t room = cfg.classes - names.size() - (cfg.depth - d);
    std::size_t count = std::min(room, previous.size() * cfg.branching);
    std::vector<std::size_t> current;
    for (std::size_t k = 0; k < count; ++k) {
      current.push_back(names.size());
      add_class(previous[k % previous.size()]);
    }
    previous = std::move(current);
  }

  auto subtree = [&](std::size_t root) {
    std::vector<std::size_t> out, stack{root};
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      out.push_back(c);
      for (auto it = children[c].rbegin(); it != children[c].rend(); ++it) stack.push_back(*it);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<std::size_t> table_class{0};
  for (std::size_t c : children[0]) {
    if (table_class.size() < cfg.tables) table_class.push_back(c);
  }

  auto& m = out.mapping;
  m.prefixes["weld"] = ns;
  for (std::size_t t = 0; t < cfg.tables; ++t) {
    std::size_t tc = table_class[t];
    std::string tname = local_name(names[tc]);
    m.tables.push_back({tname, names[tc]});
    auto below = subtree(tc);
    std::erase(below, tc);

    // Key columns: the table's own key, every other table class for the root
    // table, then a sample of the classes below the table class. Classes under
    // another table class belong to that table.
    auto is_table_class = [&](std::size_t c) {
      return std::find(table_class.begin(), table_class.end(), c) != table_class.end();
    };
    auto ancestors = [&](std::size_t c) {
      std::vector<std::size_t> up;
      while (c != tc && parent[c] != c) up.push_back(c = parent[c]);
      return up;
    };
    std::vector<std::size_t> own;
    for (std::size_t c : below) {
      auto up = ancestors(c);
      if (!is_table_class(c) && std::none_of(up.begin(), up.end(), [&](std::size_t a) {
            return a != tc && is_table_class(a);
          })) {
        own.push_back(c);
      }
    }
    std::vector<std::size_t> keyed{tc};
    if (t == 0) keyed.insert(keyed.end(), table_class.begin() + 1, table_class.end());
    // Keys go to leaves only: an interior key entity shared by many rows would
    // collect the row-level data below it. At least one leaf keeps the data
    // unless every class is elevated.
    std::vector<std::size_t> pool;
    for (std::size_t c : own) {
      if (children[c].empty()) pool.push_back(c);
    }
    auto elevated = static_cast<std::size_t>(std::lround(cfg.elevation_fraction * static_cast<double>(pool.size())));
    if (cfg.elevation_fraction < 1 && elevated == pool.size() && elevated > 0) --elevated;
    for (std::size_t k = 0; k < elevated; ++k) {
      std::size_t pick = rng.below(pool.size());
      keyed.push_back(pool[pick]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    // Data columns on the remaining leaves under the table class.
    std::vector<std::size_t> leaves = pool;
    if (leaves.empty()) leaves.push_back(tc);
    struct Column {
      std::string name;
      std::size_t cls;
      bool key;
      Suffix::Kind kind;
    };
    std::vector<Column> columns;
    std::set<std::string> taken;
    for (std::size_t c : keyed) {
      columns.push_back({lower_first(local_name(names[c])) + "ID", c, true, Suffix::kString});
      taken.insert(columns.back().name);
    }
    for (std::size_t a = 0; a < cfg.attributes_per_table; ++a) {
      std::size_t leaf = leaves[rng.below(leaves.size())];
      std::string base = lower_first(local_name(names[leaf]));
      const Suffix* suffix = nullptr;
      std::string name;
      for (std::size_t tries = 0; tries < 2 * std::size(kSuffixes) && (name.empty() || taken.contains(name)); ++tries) {
        suffix = &kSuffixes[rng.below(std::size(kSuffixes))];
        name = base + suffix->text;
      }
      for (std::size_t n = 2; taken.contains(name); ++n) name = base + suffix->text + std::to_string(n);
      taken.insert(name);
      columns.push_back({name, leaf, false, suffix->kind});
      o.datatype_properties[ns + name] = {names[leaf]};
    }

    TableData data;
    data.name = tname;
    for (const auto& c : columns) {
      data.attributes.push_back(c.name);
      m.attributes.push_back({tname, c.name, c.key ? BindingKind::kClassKey : BindingKind::kDataProperty,
                              c.key ? names[c.cls] : ns + c.name});
    }
    for (std::size_t r = 0; r < cfg.rows_per_table; ++r) {
      std::vector<Cell> row;
      for (const auto& c : columns) {
        std::string text;
        if (c.key) {
          std::string prefix = local_name(names[c.cls]) + "-";
          if (c.cls == tc) {
            text = prefix + std::to_string(r);
          } else if (!rng.chance(2)) {
            std::size_t values = is_table_class(c.cls) ? cfg.rows_per_table
                                                       : std::max<std::size_t>(1, cfg.rows_per_table / 10);
            text = prefix + std::to_string(rng.below(values));
          }
        } else if (!rng.chance(3)) {
          char buf[32];
          switch (c.kind) {
            case Suffix::kDecimal:
              std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(rng.below(100000)) / 100.0);
              text = buf;
              break;
            case Suffix::kInteger:
              text = std::to_string(rng.below(500));
              break;
            case Suffix::kString:
              text = std::string("v") + static_cast<char>('A' + rng.below(4));
              break;
          }
        }
        row.push_back(Cell::classify(text));
      }
      data.rows.push_back(std::move(row));
    }
    out.tables.push_back(std::move(data));
  }
  return out;
}

MappingSpec subsample_attributes(const MappingSpec& m, std::size_t k, std::uint64_t seed) {
  std::size_t n = m.attributes.size();
  if (k > n) {
    throw SampleTooLargeError("cannot sample " + std::to_string(k) + " of " + std::to_string(n) +
                              " attribute bindings");
  }
  // Partial Fisher-Yates over indices, then restore file order.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());

  MappingSpec out;
  out.prefixes = m.prefixes;
  out.hints = m.hints;
  std::set<std::string> used;
  for (std::size_t i : idx) {
    out.attributes.push_back(m.attributes[i]);
    used.insert(m.attributes[i].table);
  }
  for (const auto& t : m.tables) {
    if (used.contains(t.table)) out.tables.push_back(t);
  }
  return out;
}

std::vector<QueryIntent> instantiate_intents(const MappingSpec& m, const std::vector<TableData>& tables,
                                             const std::set<IntentKind>& kinds) {
  std::vector<QueryIntent> out;
  std::size_t n_inspect = 0, n_summary = 0, n_diagnose = 0;
  for (const auto& t : m.tables) {
    auto attrs = m.attributes_of(t.table);
    if (attrs.empty()) continue;
    const TableData* data = nullptr;
    for (const auto& d : tables) {
      if (d.name == t.table) data = &d;
    }
    auto ref = [&](const AttributeBinding* a) { return AttributeRef{t.table, a->attribute}; };
    auto other_than = [&](const AttributeBinding* a) -> const AttributeBinding* {
      for (const auto* b : attrs) {
        if (b != a) return b;
      }
      return nullptr;
    };

    if (kinds.contains(IntentKind::kInspection)) {
      for (std::size_t i = 0; i < attrs.size(); i += 3) {
        QueryIntent q{"inspect_" + std::to_string(++n_inspect), IntentKind::kInspection, {}, {}, {}, {}};
        for (std::size_t j = i; j < std::min(i + 3, attrs.size()); ++j) q.targets.push_back(ref(attrs[j]));
        out.push_back(std::move(q));
      }
    }
    if (kinds.contains(IntentKind::kSummary)) {
      for (const auto* a : attrs) {
        if (a->kind != BindingKind::kClassKey) continue;
        const auto* target = other_than(a);
        if (!target) continue;
        out.push_back({"summary_" + std::to_string(++n_summary), IntentKind::kSummary, {ref(target)},
                       ref(a), {}, {}});
      }
    }
    if (kinds.contains(IntentKind::kDiagnostic) && data) {
      for (const auto* a : attrs) {
        if (a->kind != BindingKind::kDataProperty) continue;
        auto col = data->column(a->attribute);
        if (!col || !data->is_numeric_column(*col)) continue;
        std::vector<const Cell*> values;
        for (const auto& row : data->rows) {
          if (!row[*col].is_null()) values.push_back(&row[*col]);
        }
        auto by_value = [](const Cell* x, const Cell* y) { return std::stod(x->text) < std::stod(y->text); };
        std::sort(values.begin(), values.end(), by_value);
        const Cell* median = values[(values.size() - 1) / 2];
        QueryIntent q{"diagnose_" + std::to_string(++n_diagnose), IntentKind::kDiagnostic, {ref(a)}, {},
                      IntentFilter{ref(a), CompareOp::kLt, median->to_literal()}, {}};
        if (const auto* c = other_than(a)) q.context.push_back(ref(c));
        out.push_back(std::move(q));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::check() const {
  if (sizes.empty()) throw ConfigError("no subset sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ConfigError("subset sizes must be positive");
    if (i && sizes[i] <= sizes[i - 1]) throw ConfigError("subset sizes must be strictly increasing");
  }
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
  if (templates.empty()) throw ConfigError("no intent templates selected");
  synth.check();
}

namespace {

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(what + ": expected a non-negative integer, found '" + s + "'");
  return v;
}

double parse_fraction(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(what + ": expected a number, found '" + s + "'");
  return v;
}

std::string format_fraction(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    std::string where = "config line " + std::to_string(line_no);
    auto one = [&]() -> const std::string& {
      if (w.size() != 2) throw ConfigError(where + ": '" + w[0] + "' takes one value");
      return w[1];
    };
    if (w[0] == "sizes") {
      cfg.sizes.clear();
      for (std::size_t i = 1; i < w.size(); ++i) cfg.sizes.push_back(parse_uint(w[i], where));
    } else if (w[0] == "repetitions") {
      cfg.repetitions = parse_uint(one(), where);
    } else if (w[0] == "seed") {
      cfg.seed = parse_uint(one(), where);
    } else if (w[0] == "threads") {
      cfg.threads = parse_uint(one(), where);
    } else if (w[0] == "equivalence") {
      const auto& v = one();
      if (v != "yes" && v != "no") throw ConfigError(where + ": equivalence takes yes or no");
      cfg.check_equivalence = v == "yes";
    } else if (w[0] == "templates") {
      cfg.templates.clear();
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] == "I") {
          cfg.templates.insert(IntentKind::kInspection);
        } else if (w[i] == "II") {
          cfg.templates.insert(IntentKind::kSummary);
        } else if (w[i] == "III") {
          cfg.templates.insert(IntentKind::kDiagnostic);
        } else {
          throw ConfigError(where + ": unknown template '" + w[i] + "'");
        }
      }
    } else if (w[0] == "synth") {
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto eq = w[i].find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key=value, found '" + w[i] + "'");
        std::string key = w[i].substr(0, eq), value = w[i].substr(eq + 1);
        auto& s = cfg.synth;
        if (key == "classes") {
          s.classes = parse_uint(value, where);
        } else if (key == "depth") {
          s.depth = parse_uint(value, where);
        } else if (key == "branching") {
          s.branching = parse_uint(value, where);
        } else if (key == "tables") {
          s.tables = parse_uint(value, where);
        } else if (key == "attributes") {
          s.attributes_per_table = parse_uint(value, where);
        } else if (key == "rows") {
          s.rows_per_table = parse_uint(value, where);
        } else if (key == "elevation") {
          s.elevation_fraction = parse_fraction(value, where);
        } else if (key == "seed") {
          s.seed = parse_uint(value, where);
        } else {
          throw ConfigError(where + ": unknown synth key '" + key + "'");
        }
      }
    } else {
      throw ConfigError(where + ": unknown setting '" + w[0] + "'");
    }
  }
  try {
    cfg.check();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string serialize_experiment_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "sizes";
  for (auto s : cfg.sizes) out << ' ' << s;
  out << "\nrepetitions " << cfg.repetitions << "\nseed " << cfg.seed << "\nthreads " << cfg.threads
      << "\ntemplates";
  if (cfg.templates.contains(IntentKind::kInspection)) out << " I";
  if (cfg.templates.contains(IntentKind::kSummary)) out << " II";
  if (cfg.templates.contains(IntentKind::kDiagnostic)) out << " III";
  const auto& s = cfg.synth;
  out << "\nequivalence " << (cfg.check_equivalence ? "yes" : "no") << "\nsynth classes=" << s.classes
      << " depth=" << s.depth << " branching=" << s.branching << " tables=" << s.tables
      << " attributes=" << s.attributes_per_table << " rows=" << s.rows_per_table
      << " elevation=" << format_fraction(s.elevation_fraction) << " seed=" << s.seed << '\n';
  return out.str();
}

ExperimentConfig demo_experiment_config() {
  ExperimentConfig cfg;
  cfg.check_equivalence = true;
  return cfg;
}

// ---------------------------------------------------------------------------
// Report

std::vector<ExperimentSummary> ExperimentReport::summaries() const {
  std::vector<ExperimentSummary> out;
  for (std::size_t size : sizes) {
    for (const char* variant : {"baseline", "reshaped"}) {
      ExperimentSummary s;
      s.size = size;
      s.variant = variant;
      for (const auto& r : rows) {
        if (r.size != size || r.variant != variant || !r.error.empty()) continue;
        ++s.cells;
        s.avg_depth += r.avg_depth;
        s.max_depth += static_cast<double>(r.max_depth);
        s.entity_count += static_cast<double>(r.entity_count);
        s.blank_node_count += static_cast<double>(r.blank_node_count);
        s.storage_bytes += static_cast<double>(r.storage_bytes);
        s.build_time += r.build_time;
      }
      if (s.cells) {
        double n = static_cast<double>(s.cells);
        s.avg_depth /= n;
        s.max_depth /= n;
        s.entity_count /= n;
        s.blank_node_count /= n;
        s.storage_bytes /= n;
        s.build_time /= n;
      }
      out.push_back(s);
    }
  }
  return out;
}

std::optional<ExperimentSummary> ExperimentReport::summary(std::size_t size, std::string_view variant) const {
  for (auto& s : summaries()) {
    if (s.size == size && s.variant == variant) return s;
  }
  return std::nullopt;
}

double ExperimentReport::build_time_ratio() const {
  double base = 0, resh = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    (r.variant == "baseline" ? base : resh) += r.build_time;
  }
  return resh > 0 ? base / resh : 0;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render_markdown(const ExperimentReport& r) {
  auto sums = r.summaries();
  auto find = [&](std::size_t size, const std::string& variant) {
    for (const auto& s : sums) {
      if (s.size == size && s.variant == variant) return s;
    }
    return ExperimentSummary{};
  };
  std::ostringstream out;
  auto table = [&](const std::string& corner, const std::vector<std::pair<std::string, std::function<std::string(std::size_t)>>>& lines) {
    out << "| " << corner << " |";
    for (std::size_t i = 0; i < r.sizes.size(); ++i) out << " Set " << i + 1 << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < r.sizes.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& [label, cell] : lines) {
      out << "| " << label << " |";
      for (std::size_t size : r.sizes) out << ' ' << cell(size) << " |";
      out << '\n';
    }
  };
  auto stat = [&](const std::string& variant, auto field, int digits) {
    return [&, variant, field, digits](std::size_t size) { return fixed(find(size, variant).*field, digits); };
  };

  out << "# Query depth\n\n";
  table("", {
                {"attributes", [](std::size_t size) { return std::to_string(size); }},
                {"baseline avg. query depth", stat("baseline", &ExperimentSummary::avg_depth, 1)},
                {"reshaped avg. query depth", stat("reshaped", &ExperimentSummary::avg_depth, 1)},
                {"baseline max. query depth", stat("baseline", &ExperimentSummary::max_depth, 1)},
                {"reshaped max. query depth", stat("reshaped", &ExperimentSummary::max_depth, 1)},
            });
  out << "\n# Graph statistics\n\n";
  table("", {
                {"baseline entities", stat("baseline", &ExperimentSummary::entity_count, 1)},
                {"reshaped entities", stat("reshaped", &ExperimentSummary::entity_count, 1)},
                {"baseline blank nodes", stat("baseline", &ExperimentSummary::blank_node_count, 1)},
                {"reshaped blank nodes", stat("reshaped", &ExperimentSummary::blank_node_count, 1)},
                {"baseline storage bytes", stat("baseline", &ExperimentSummary::storage_bytes, 0)},
                {"reshaped storage bytes", stat("reshaped", &ExperimentSummary::storage_bytes, 0)},
                {"baseline build time (s)", stat("baseline", &ExperimentSummary::build_time, 4)},
                {"reshaped build time (s)", stat("reshaped", &ExperimentSummary::build_time, 4)},
            });
  out << "\nbuild time ratio (baseline / reshaped): " << fixed(r.build_time_ratio(), 2) << '\n';
  std::size_t failed = 0;
  for (const auto& row : r.rows) failed += !row.error.empty();
  if (failed) out << "\nfailed cells: " << failed << '\n';
  return out.str();
}

std::string render_csv(const ExperimentReport& r, bool with_timing) {
  std::ostringstream out;
  out << "size,repetition,variant,intents,avg_depth,max_depth,entity_count,blank_node_count,"
         "triple_count,storage_bytes,checked,mismatches,error";
  if (with_timing) out << ",build_time_s";
  out << '\n';
  for (const auto& row : r.rows) {
    std::string error = row.error;
    std::replace(error.begin(), error.end(), '"', '\'');
    out << row.size << ',' << row.repetition << ',' << row.variant << ',' << row.intents << ','
        << fixed(row.avg_depth, 4) << ',' << row.max_depth << ',' << row.entity_count << ','
        << row.blank_node_count << ',' << row.triple_count << ',' << row.storage_bytes << ','
        << row.checked << ',' << row.mismatches << ',' << (error.empty() ? "" : "\"" + error + "\"");
    if (with_timing) out << ',' << fixed(row.build_time, 6);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

struct CellOutput {
  ExperimentRow baseline, reshaped;
  std::string baseline_nt, reshaped_nt;
  std::string baseline_json, reshaped_json;
};

void fill_stats(ExperimentRow& row, const KgBuild& b) {
  row.entity_count = b.report.graph_stats.entity_count;
  row.blank_node_count = b.report.graph_stats.blank_node_count;
  row.triple_count = b.report.graph_stats.triple_count;
  row.storage_bytes = b.report.graph_stats.storage_bytes;
  row.build_time = b.report.build_wall_time;
}

std::string build_json(const KgBuild& b, std::size_t size, std::size_t rep) {
  nlohmann::ordered_json j;
  j["size"] = size;
  j["repetition"] = rep;
  auto fields = nlohmann::ordered_json::parse(b.report.to_json());
  for (auto& [k, v] : fields.items()) j[k] = v;
  return j.dump();
}

CellOutput run_cell(const ExperimentConfig& cfg, const OntologyGraph& o, const std::vector<TableData>& tables,
                    const MappingSpec& m, std::size_t size, std::size_t rep, bool keep_graphs) {
  CellOutput out;
  out.baseline.size = out.reshaped.size = size;
  out.baseline.repetition = out.reshaped.repetition = rep;
  out.baseline.variant = "baseline";
  out.reshaped.variant = "reshaped";
  try {
    MappingSpec sub = subsample_attributes(m, size, mix(mix(cfg.seed, size), rep));
    ReshapedSchema schema = reshape(o, sub);
    KgBuild base = build_baseline(o, sub, tables);
    KgBuild resh = build_reshaped(schema, sub, tables);
    fill_stats(out.baseline, base);
    fill_stats(out.reshaped, resh);
    auto intents = instantiate_intents(sub, tables, cfg.templates);
    std::size_t base_sum = 0, resh_sum = 0, checked = 0, mismatches = 0;
    for (const auto& intent : intents) {
      BgpQuery qb = synthesize(intent, o, sub);
      BgpQuery qr = synthesize(intent, schema, sub);
      std::size_t db = query_depth(qb), dr = query_depth(qr);
      base_sum += db;
      resh_sum += dr;
      out.baseline.max_depth = std::max(out.baseline.max_depth, db);
      out.reshaped.max_depth = std::max(out.reshaped.max_depth, dr);
      if (cfg.check_equivalence) {
        ++checked;
        if (evaluate(qb, base.graph).rows != evaluate(qr, resh.graph).rows) ++mismatches;
      }
    }
    for (auto* row : {&out.baseline, &out.reshaped}) {
      row->intents = intents.size();
      row->checked = checked;
      row->mismatches = mismatches;
    }
    if (!intents.empty()) {
      out.baseline.avg_depth = static_cast<double>(base_sum) / static_cast<double>(intents.size());
      out.reshaped.avg_depth = static_cast<double>(resh_sum) / static_cast<double>(intents.size());
    }
    out.baseline_json = build_json(base, size, rep);
    out.reshaped_json = build_json(resh, size, rep);
    if (keep_graphs) {
      out.baseline_nt = serialize_ntriples(base.graph);
      out.reshaped_nt = serialize_ntriples(resh.graph);
    }
  } catch (const std::exception& e) {
    out.baseline.error = out.reshaped.error = e.what();
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const OntologyGraph& o,
                                const std::vector<TableData>& tables, const MappingSpec& m) {
  cfg.check();
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t size : cfg.sizes) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) cells.emplace_back(size, rep);
  }
  // Graphs are kept for the first repetition only; every repetition of every
  // size would be hundreds of megabytes on the default grid.
  bool persist = !cfg.output_dir.empty();
  std::vector<CellOutput> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      auto [size, rep] = cells[i];
      results[i] = run_cell(cfg, o, tables, m, size, rep, persist && rep == 0);
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  ExperimentReport report;
  report.sizes = cfg.sizes;
  for (const auto& c : results) {
    report.rows.push_back(c.baseline);
    report.rows.push_back(c.reshaped);
  }
  if (persist) {
    namespace fs = std::filesystem;
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir / "cells");
    write_file(dir / "report.md", render_markdown(report));
    write_file(dir / "report.csv", render_csv(report));
    std::string jsonl;
    for (const auto& c : results) {
      if (!c.baseline_json.empty()) jsonl += c.baseline_json + "\n" + c.reshaped_json + "\n";
      if (!c.baseline_nt.empty()) {
        std::string stem = "k" + std::to_string(c.baseline.size) + "_r" + std::to_string(c.baseline.repetition);
        write_file(dir / "cells" / (stem + "_baseline.nt"), c.baseline_nt);
        write_file(dir / "cells" / (stem + "_reshaped.nt"), c.reshaped_nt);
      }
    }
    write_file(dir / "builds.jsonl", jsonl);
  }
  return report;
}

}  // namespace orkg
