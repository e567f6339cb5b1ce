#include "icin/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "icin/format.hpp"

namespace icin {

using nlohmann::json;

namespace {

json parse_json(const std::string& path) {
  json j = json::parse(read_text_file(path), nullptr, false);
  require(!j.is_discarded(), errc::invalid_argument, path + ": malformed JSON");
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  // simple CSV: no quoting, comma separator, trailing \r tolerated
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string pattern_key(const Pattern& m) { return m.str(); }

Schema schema_from_json(const json& j, const std::vector<int>& levels) {
  Schema s = Schema::defaults(levels);
  if (j.contains("items")) {
    require(j["items"].is_array() && j["items"].size() == levels.size(),
            errc::invalid_argument, "items must list one name per item");
    s.items.clear();
    for (const auto& v : j["items"]) s.items.push_back(v.get<std::string>());
  }
  if (j.contains("labels")) {
    require(j["labels"].is_array() && j["labels"].size() == levels.size(),
            errc::invalid_argument, "labels must list one label array per item");
    s.labels.clear();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& arr = j["labels"][i];
      require(arr.is_array() && static_cast<int>(arr.size()) == levels[i],
              errc::invalid_argument, "labels arity mismatch at item " + std::to_string(i + 1));
      std::vector<std::string> lv;
      for (const auto& v : arr) lv.push_back(v.get<std::string>());
      s.labels.push_back(std::move(lv));
    }
  }
  s.validate();
  return s;
}

json schema_to_json(const Schema& schema) {
  json j;
  j["items"] = schema.items;
  j["labels"] = schema.labels;
  return j;
}

// shared reader for mass/count tables keyed by pattern
template <class T>
void read_cell_table(const json& j, const std::string& path, const std::string& field,
                     const CategoricalSpace& space, const PatternSet& ps,
                     std::vector<std::vector<T>>& out) {
  require(j.contains(field) && j[field].is_object(), errc::invalid_argument,
          path + ": missing \"" + field + "\" object");
  out.assign(static_cast<std::size_t>(ps.size()), {});
  std::vector<int> full(static_cast<std::size_t>(space.item_count()), 0);
  for (int i = 0; i < ps.size(); ++i) {
    const Pattern& m = ps.at(i);
    const std::string key = pattern_key(m);
    require(j[field].contains(key), errc::invalid_argument,
            path + ": no entries for pattern " + key);
    const std::size_t nobs = space.observed_cell_count(m);
    auto& vec = out[static_cast<std::size_t>(i)];
    vec.assign(nobs, T{});
    std::vector<bool> seen(nobs, false);
    for (const auto& entry : j[field][key]) {
      require(entry.contains("cell") && entry.contains(field), errc::invalid_argument,
              path + ": each entry needs cell and " + field);
      std::vector<int> obs_cell;
      for (const auto& v : entry["cell"]) obs_cell.push_back(v.get<int>() - 1);
      int nobs_items = 0;
      for (int t = 0; t < space.item_count(); ++t)
        if (m.observed(t)) ++nobs_items;
      require(static_cast<int>(obs_cell.size()) == nobs_items, errc::invalid_argument,
              path + ": cell arity mismatch for pattern " + key);
      std::fill(full.begin(), full.end(), 0);
      int t2 = 0;
      for (int t = 0; t < space.item_count(); ++t)
        if (m.observed(t)) {
          const int lvl = obs_cell[static_cast<std::size_t>(t2++)];
          require(lvl >= 0 && lvl < space.levels(t), errc::invalid_argument,
                  path + ": level out of range in pattern " + key);
          full[static_cast<std::size_t>(t)] = lvl;
        }
      const std::size_t o = space.observed_index(full, m);
      require(!seen[o], errc::invalid_argument,
              path + ": duplicate cell in pattern " + key);
      seen[o] = true;
      vec[o] = entry[field].get<T>();
    }
    for (std::size_t o = 0; o < nobs; ++o)
      require(seen[o], errc::invalid_argument,
              path + ": pattern " + key + " is missing an observed cell");
  }
}

json cell_table_to_json(const CategoricalSpace& space, const PatternSet& ps,
                        const std::vector<std::vector<double>>& mass, bool as_count) {
  json table = json::object();
  for (int i = 0; i < ps.size(); ++i) {
    const Pattern& m = ps.at(i);
    json rows = json::array();
    const std::size_t nobs = space.observed_cell_count(m);
    for (std::size_t o = 0; o < nobs; ++o) {
      const std::vector<int> vals = space.observed_cell_at(o, m);
      json cell = json::array();
      for (int v : vals) cell.push_back(v + 1);
      json entry;
      entry["cell"] = cell;
      if (as_count)
        entry["count"] = static_cast<std::int64_t>(mass[static_cast<std::size_t>(i)][o]);
      else
        entry["mass"] = mass[static_cast<std::size_t>(i)][o];
      rows.push_back(entry);
    }
    table[pattern_key(m)] = rows;
  }
  return table;
}

PatternSet patterns_from_json(const json& j, const std::string& path, int p) {
  require(j.contains("patterns") && j["patterns"].is_array(), errc::invalid_argument,
          path + ": missing \"patterns\" array");
  std::vector<Pattern> ms;
  for (const auto& v : j["patterns"]) ms.push_back(Pattern::from_string(v.get<std::string>()));
  try {
    return PatternSet(p, std::move(ms));
  } catch (const error& e) {
    fail(errc::invalid_argument, path + ": " + e.what());
  }
}

}  // namespace

Schema Schema::defaults(const std::vector<int>& levels) {
  Schema s;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    s.items.push_back("X" + std::to_string(j + 1));
    std::vector<std::string> lv;
    for (int k = 0; k < levels[j]; ++k) lv.push_back(std::to_string(k + 1));
    s.labels.push_back(std::move(lv));
  }
  return s;
}

std::vector<int> Schema::level_counts() const {
  std::vector<int> out;
  for (const auto& lv : labels) out.push_back(static_cast<int>(lv.size()));
  return out;
}

int Schema::item_index(const std::string& name) const {
  for (std::size_t j = 0; j < items.size(); ++j)
    if (items[j] == name) return static_cast<int>(j);
  return -1;
}

int Schema::level_index(int item, const std::string& label) const {
  const auto& lv = labels[static_cast<std::size_t>(item)];
  for (std::size_t k = 0; k < lv.size(); ++k)
    if (lv[k] == label) return static_cast<int>(k);
  return -1;
}

void Schema::validate() const {
  require(!items.empty() && items.size() == labels.size(), errc::invalid_argument,
          "schema needs one label list per item");
  std::set<std::string> names(items.begin(), items.end());
  require(names.size() == items.size(), errc::invalid_argument, "item names must be unique");
  for (std::size_t j = 0; j < labels.size(); ++j) {
    require(labels[j].size() >= 2, errc::invalid_argument,
            "item " + items[j] + " needs at least 2 levels");
    std::set<std::string> lv(labels[j].begin(), labels[j].end());
    require(lv.size() == labels[j].size(), errc::invalid_argument,
            "duplicate level label under item " + items[j]);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), errc::io, "cannot write " + tmp);
    out << content;
    require(out.good(), errc::io, "write failed for " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, errc::io,
          "cannot rename " + tmp + " to " + path);
}

std::string hash_file(const std::string& path) {
  const std::string data = read_text_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MicrodataTable read_microdata_csv(const std::string& path,
                                  const std::optional<Schema>& schema_in) {
  std::istringstream in(read_text_file(path));
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::invalid_argument,
          path + ": empty file (header row required)");
  const std::vector<std::string> header = split_csv_line(line);

  MicrodataTable table;
  std::vector<int> item_cols;
  int weight_col = -1;

  if (schema_in) {
    table.schema = *schema_in;
    table.schema.validate();
    for (const auto& item : table.schema.items) {
      auto it = std::find(header.begin(), header.end(), item);
      require(it != header.end(), errc::invalid_argument,
              path + ": missing column " + item);
      item_cols.push_back(static_cast<int>(it - header.begin()));
    }
    if (!table.schema.weight_column.empty()) {
      auto it = std::find(header.begin(), header.end(), table.schema.weight_column);
      require(it != header.end(), errc::invalid_argument,
              path + ": missing weight column " + table.schema.weight_column);
      weight_col = static_cast<int>(it - header.begin());
    }
  } else {
    // infer: every column is an item, levels discovered from the data
    for (std::size_t c = 0; c < header.size(); ++c) {
      table.schema.items.push_back(header[c]);
      item_cols.push_back(static_cast<int>(c));
    }
    table.schema.labels.resize(header.size());
  }

  const auto& missing = table.schema.missing_tokens;
  auto is_missing = [&](const std::string& tok) {
    return std::find(missing.begin(), missing.end(), tok) != missing.end();
  };

  std::vector<std::vector<std::string>> raw_rows;
  std::vector<std::size_t> lines;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    require(fields.size() == header.size(), errc::invalid_argument,
            path + ":" + std::to_string(line_no) + ": expected " +
                std::to_string(header.size()) + " fields");
    for (auto& f : fields) {
      auto it = table.schema.recode.find(f);
      if (it != table.schema.recode.end()) f = it->second;
    }
    raw_rows.push_back(std::move(fields));
    lines.push_back(line_no);
  }
  require(!raw_rows.empty(), errc::invalid_argument, path + ": no data rows");

  if (!schema_in) {
    // discover sorted distinct labels per item
    for (std::size_t t = 0; t < table.schema.items.size(); ++t) {
      std::set<std::string> seen;
      for (const auto& row : raw_rows) {
        const std::string& tok = row[static_cast<std::size_t>(item_cols[t])];
        if (!is_missing(tok)) seen.insert(tok);
      }
      require(seen.size() >= 2, errc::invalid_argument,
              path + ": column " + table.schema.items[t] +
                  " has fewer than 2 observed levels");
      table.schema.labels[t].assign(seen.begin(), seen.end());
    }
    table.schema.validate();
  }

  for (std::size_t r = 0; r < raw_rows.size(); ++r) {
    std::vector<int> row(table.schema.items.size(), -1);
    for (std::size_t t = 0; t < table.schema.items.size(); ++t) {
      const std::string& tok = raw_rows[r][static_cast<std::size_t>(item_cols[t])];
      if (is_missing(tok)) continue;
      const int lvl = table.schema.level_index(static_cast<int>(t), tok);
      require(lvl >= 0, errc::invalid_argument,
              path + ":" + std::to_string(lines[r]) + ": level \"" + tok +
                  "\" is outside the domain of " + table.schema.items[t]);
      row[t] = lvl;
    }
    double w = 1.0;
    if (weight_col >= 0) {
      try {
        w = std::stod(raw_rows[r][static_cast<std::size_t>(weight_col)]);
      } catch (...) {
        fail(errc::invalid_argument,
             path + ":" + std::to_string(lines[r]) + ": bad weight");
      }
      require(w > 0, errc::invalid_argument,
              path + ":" + std::to_string(lines[r]) + ": weights must be positive");
    }
    table.rows.push_back(std::move(row));
    table.weights.push_back(w);
    table.line_numbers.push_back(lines[r]);
  }
  return table;
}

void require_monotone_rows(const MicrodataTable& table) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    bool seen_missing = false;
    for (int v : table.rows[r]) {
      if (v < 0)
        seen_missing = true;
      else
        require(!seen_missing, errc::invalid_argument,
                "row at line " + std::to_string(table.line_numbers[r]) +
                    ": blanks must be a trailing run for dropout data");
    }
  }
}

LabeledCounts aggregate(const MicrodataTable& table) {
  require(!table.rows.empty(), errc::invalid_argument, "no rows to aggregate");
  const CategoricalSpace space(table.schema.level_counts());
  const int p = space.item_count();

  std::vector<Pattern> seen;
  for (const auto& row : table.rows) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j)
      bits[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)] < 0 ? 1 : 0;
    Pattern m(std::move(bits));
    if (std::find(seen.begin(), seen.end(), m) == seen.end()) seen.push_back(m);
  }
  const Pattern zero = Pattern::zeros(p);
  require(std::find(seen.begin(), seen.end(), zero) != seen.end(), errc::invalid_argument,
          "the all-observed pattern never occurs in the data");
  PatternSet ps(p, std::move(seen));

  std::vector<std::vector<std::int64_t>> counts(static_cast<std::size_t>(ps.size()));
  for (int i = 0; i < ps.size(); ++i)
    counts[static_cast<std::size_t>(i)].assign(space.observed_cell_count(ps.at(i)), 0);

  std::vector<int> cell(static_cast<std::size_t>(p));
  for (const auto& row : table.rows) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      bits[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)] < 0 ? 1 : 0;
      cell[static_cast<std::size_t>(j)] = std::max(0, row[static_cast<std::size_t>(j)]);
    }
    const Pattern m(std::move(bits));
    const int i = ps.index_of(m);
    counts[static_cast<std::size_t>(i)][space.observed_index(cell, m)] += 1;
  }
  return LabeledCounts{ObservedCounts{space, ps, std::move(counts)}, table.schema};
}

LabeledObserved read_observed_json(const std::string& path) {
  const json j = parse_json(path);
  require(j.contains("levels") && j["levels"].is_array(), errc::invalid_argument,
          path + ": missing \"levels\" array");
  std::vector<int> levels;
  for (const auto& v : j["levels"]) levels.push_back(v.get<int>());
  const CategoricalSpace space(levels);
  const Schema schema = schema_from_json(j, levels);
  PatternSet ps = patterns_from_json(j, path, space.item_count());

  std::vector<std::vector<double>> mass;
  read_cell_table<double>(j, path, "mass", space, ps, mass);

  ObservedDistribution dist{space, std::move(ps), std::move(mass)};
  const double total = dist.total();
  require(std::fabs(total - 1.0) <= 1e-9, errc::invalid_argument,
          path + ": masses sum to " + fmt_full(total) + ", expected 1 within 1e-9");
  for (auto& pm : dist.mass)
    for (double& v : pm) v /= total;
  dist.validate();
  return LabeledObserved{std::move(dist), schema};
}

void write_observed_json(const std::string& path, const ObservedDistribution& dist,
                         const Schema& schema) {
  json j = schema_to_json(schema);
  j["levels"] = dist.space.all_levels();
  json pats = json::array();
  for (const auto& m : dist.patterns.order()) pats.push_back(pattern_key(m));
  j["patterns"] = pats;
  j["mass"] = cell_table_to_json(dist.space, dist.patterns, dist.mass, false);
  write_text_file_atomic(path, j.dump(2) + "\n");
}

LabeledCounts read_counts_json(const std::string& path) {
  const json j = parse_json(path);
  require(j.contains("levels") && j["levels"].is_array(), errc::invalid_argument,
          path + ": missing \"levels\" array");
  std::vector<int> levels;
  for (const auto& v : j["levels"]) levels.push_back(v.get<int>());
  const CategoricalSpace space(levels);
  const Schema schema = schema_from_json(j, levels);
  PatternSet ps = patterns_from_json(j, path, space.item_count());

  std::vector<std::vector<std::int64_t>> counts;
  read_cell_table<std::int64_t>(j, path, "count", space, ps, counts);
  ObservedCounts oc{space, std::move(ps), std::move(counts)};
  oc.validate();
  return LabeledCounts{std::move(oc), schema};
}

void write_counts_json(const std::string& path, const ObservedCounts& counts,
                       const Schema& schema) {
  json j = schema_to_json(schema);
  j["levels"] = counts.space.all_levels();
  json pats = json::array();
  for (const auto& m : counts.patterns.order()) pats.push_back(pattern_key(m));
  j["patterns"] = pats;
  std::vector<std::vector<double>> as_double(counts.counts.size());
  for (std::size_t i = 0; i < counts.counts.size(); ++i)
    as_double[i].assign(counts.counts[i].begin(), counts.counts[i].end());
  j["count"] = cell_table_to_json(counts.space, counts.patterns, as_double, true);
  write_text_file_atomic(path, j.dump(2) + "\n");
}

void write_full_data_csv(const std::string& path, const FullDataDistribution& g) {
  std::ostringstream out;
  const int p = g.space.item_count();
  for (int j = 0; j < p; ++j) out << "x" << (j + 1) << ",";
  out << "m,g\n";
  std::vector<int> cell;
  for (int i = 0; i < g.patterns.size(); ++i) {
    const Pattern& m = g.patterns.at(i);
    for (std::size_t x = 0; x < g.space.cell_count(); ++x) {
      g.space.decode(x, cell);
      for (int j = 0; j < p; ++j) out << (cell[static_cast<std::size_t>(j)] + 1) << ",";
      out << m.str() << "," << fmt_full(std::exp(g.log_mass(i, x))) << "\n";
    }
  }
  write_text_file_atomic(path, out.str());
}

void write_full_data_json(const std::string& path, const FullDataDistribution& g,
                          const Schema& schema) {
  json j = schema_to_json(schema);
  j["levels"] = g.space.all_levels();
  json pats = json::array();
  for (const auto& m : g.patterns.order()) pats.push_back(pattern_key(m));
  j["patterns"] = pats;
  json table = json::object();
  std::vector<int> cell;
  for (int i = 0; i < g.patterns.size(); ++i) {
    json rows = json::array();
    for (std::size_t x = 0; x < g.space.cell_count(); ++x) {
      g.space.decode(x, cell);
      json jcell = json::array();
      for (int v : cell) jcell.push_back(v + 1);
      json entry;
      entry["cell"] = jcell;
      entry["g"] = std::exp(g.log_mass(i, x));
      rows.push_back(entry);
    }
    table[pattern_key(g.patterns.at(i))] = rows;
  }
  j["g"] = table;
  write_text_file_atomic(path, j.dump(2) + "\n");
}

namespace {

std::vector<int> reference_from_json(const json& j, const std::string& path,
                                     const CategoricalSpace& space, const Schema& schema) {
  std::vector<int> ref(static_cast<std::size_t>(space.item_count()), 0);
  if (!j.contains("reference")) return ref;
  require(j["reference"].is_object(), errc::invalid_argument,
          path + ": \"reference\" must map item name to level label");
  for (const auto& [name, label] : j["reference"].items()) {
    const int item = schema.item_index(name);
    require(item >= 0, errc::invalid_argument, path + ": unknown item " + name);
    const int lvl = schema.level_index(item, label.get<std::string>());
    require(lvl >= 0, errc::invalid_argument,
            path + ": unknown level for item " + name);
    ref[static_cast<std::size_t>(item)] = lvl;
  }
  return ref;
}

}  // namespace

SensitivityFunction read_xi_json(const std::string& path, const CategoricalSpace& space,
                                 const Schema& schema) {
  const json j = parse_json(path);
  const std::vector<int> ref = reference_from_json(j, path, space, schema);
  std::vector<std::vector<double>> off(static_cast<std::size_t>(space.item_count()));
  for (int t = 0; t < space.item_count(); ++t)
    off[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(space.levels(t)), 0.0);
  if (j.contains("offsets")) {
    require(j["offsets"].is_object(), errc::invalid_argument,
            path + ": \"offsets\" must map item name to {level: offset}");
    for (const auto& [name, tab] : j["offsets"].items()) {
      const int item = schema.item_index(name);
      require(item >= 0, errc::invalid_argument, path + ": unknown item " + name);
      require(tab.is_object(), errc::invalid_argument,
              path + ": only per-item additive offsets are supported; give " + name +
                  " a {level: offset} object");
      for (const auto& [label, val] : tab.items()) {
        const int lvl = schema.level_index(item, label);
        require(lvl >= 0, errc::invalid_argument,
                path + ": unknown level \"" + label + "\" for item " + name);
        require(val.is_number(), errc::invalid_argument,
                path + ": offsets must be numbers (general xi tables are not supported)");
        off[static_cast<std::size_t>(item)][static_cast<std::size_t>(lvl)] =
            val.get<double>();
      }
    }
  }
  return SensitivityFunction(space, std::move(off), ref);
}

SensitivityGrid read_grid_json(const std::string& path, const CategoricalSpace& space,
                               const Schema& schema) {
  const json j = parse_json(path);
  const std::vector<int> ref = reference_from_json(j, path, space, schema);
  require(j.contains("axes") && j["axes"].is_array() && !j["axes"].empty(),
          errc::invalid_argument, path + ": missing non-empty \"axes\" array");
  std::vector<GridAxis> axes;
  for (const auto& ja : j["axes"]) {
    GridAxis ax;
    require(ja.contains("item") && ja.contains("level") && ja.contains("values"),
            errc::invalid_argument, path + ": each axis needs item, level, values");
    ax.item = schema.item_index(ja["item"].get<std::string>());
    require(ax.item >= 0, errc::invalid_argument,
            path + ": unknown axis item " + ja["item"].get<std::string>());
    ax.level = schema.level_index(ax.item, ja["level"].get<std::string>());
    require(ax.level >= 0, errc::invalid_argument, path + ": unknown axis level");
    for (const auto& v : ja["values"]) ax.values.push_back(v.get<double>());
    ax.name = ja.contains("name") ? ja["name"].get<std::string>()
                                  : schema.items[static_cast<std::size_t>(ax.item)];
    axes.push_back(std::move(ax));
  }
  return make_grid(space, axes, ref);
}

NamedEvent parse_functional(const std::string& spec, const CategoricalSpace& space,
                            const Schema& schema) {
  const std::size_t eq = spec.find('=');
  require(eq != std::string::npos && eq > 0, errc::invalid_argument,
          "functional spec must look like name=ITEM=LEVEL&ITEM=LEVEL: " + spec);
  NamedEvent ev;
  ev.name = spec.substr(0, eq);
  std::vector<std::pair<int, int>> constraints;
  std::string rest = spec.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const std::size_t amp = rest.find('&', pos);
    const std::string clause =
        rest.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
    const std::size_t ceq = clause.find('=');
    require(ceq != std::string::npos, errc::invalid_argument,
            "bad functional clause \"" + clause + "\" in " + spec);
    const std::string item_name = clause.substr(0, ceq);
    const std::string label = clause.substr(ceq + 1);
    const int item = schema.item_index(item_name);
    require(item >= 0, errc::invalid_argument,
            "unknown item \"" + item_name + "\" in functional " + spec);
    const int lvl = schema.level_index(item, label);
    require(lvl >= 0 && lvl < space.levels(item), errc::invalid_argument,
            "unknown level \"" + label + "\" in functional " + spec);
    constraints.emplace_back(item, lvl);
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  ev.pred = [constraints](const std::vector<int>& cell) {
    for (const auto& [item, lvl] : constraints)
      if (cell[static_cast<std::size_t>(item)] != lvl) return false;
    return true;
  };
  return ev;
}

WeightedSample read_weighted_sample_csv(const std::string& path,
                                        const std::string& weight_column) {
  std::istringstream in(read_text_file(path));
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::invalid_argument,
          path + ": empty file (header row required)");
  const std::vector<std::string> header = split_csv_line(line);
  int c1 = -1, c2 = -1, cw = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "x1") c1 = static_cast<int>(c);
    if (header[c] == "x2") c2 = static_cast<int>(c);
    if (header[c] == weight_column) cw = static_cast<int>(c);
  }
  require(c1 >= 0 && c2 >= 0, errc::invalid_argument,
          path + ": need columns x1 and x2");

  WeightedSample sample;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv_line(line);
    require(f.size() == header.size(), errc::invalid_argument,
            path + ":" + std::to_string(line_no) + ": wrong field count");
    WeightedRecord rec;
    auto parse_opt = [&](int col) -> std::optional<double> {
      const std::string& tok = f[static_cast<std::size_t>(col)];
      if (tok.empty() || tok == "NA") return std::nullopt;
      try {
        return std::stod(tok);
      } catch (...) {
        fail(errc::invalid_argument,
             path + ":" + std::to_string(line_no) + ": bad number \"" + tok + "\"");
      }
    };
    rec.x1 = parse_opt(c1);
    rec.x2 = parse_opt(c2);
    if (cw >= 0) {
      const auto w = parse_opt(cw);
      require(w.has_value() && *w > 0, errc::invalid_argument,
              path + ":" + std::to_string(line_no) + ": weights must be positive");
      rec.weight = *w;
    }
    sample.records.push_back(rec);
  }
  sample.validate();
  return sample;
}

void write_feasibility_json(const std::string& path, const FeasibilityReport& report,
                            const Schema& schema) {
  json j;
  j["assumption"] = {{"independent_item", schema.items[static_cast<std::size_t>(report.k)]},
                     {"missingness_of", schema.items[static_cast<std::size_t>(report.j)]}};
  j["tol"] = report.tol;
  j["overall"] = report.overall_feasible ? "not refuted" : "infeasible";
  j["worst_violation"] = report.worst_violation;
  json strata = json::array();
  for (const auto& s : report.strata) {
    json js;
    json vals = json::object();
    std::size_t t = 0;
    for (int item = 0; item < static_cast<int>(schema.items.size()); ++item) {
      if (item == report.j || item == report.k) continue;
      vals[schema.items[static_cast<std::size_t>(item)]] =
          schema.labels[static_cast<std::size_t>(item)][static_cast<std::size_t>(s.stratum[t])];
      ++t;
    }
    js["values"] = vals;
    js["verdict"] = s.status == StratumStatus::feasible      ? "feasible"
                    : s.status == StratumStatus::infeasible ? "infeasible"
                                                             : "undetermined";
    js["violation"] = s.violation;
    js["degenerate"] = s.degenerate;
    if (!s.note.empty()) js["note"] = s.note;
    json coefs = json::array();
    for (double c : s.coefficients) coefs.push_back(c);
    js["coefficients"] = coefs;
    strata.push_back(js);
  }
  j["strata"] = strata;
  write_text_file_atomic(path, j.dump(2) + "\n");
}

void write_masked_records_csv(const std::string& path,
                              const std::vector<MaskedRecord>& records,
                              const Schema& schema) {
  std::ostringstream out;
  for (std::size_t j = 0; j < schema.items.size(); ++j) {
    if (j) out << ",";
    out << schema.items[j];
  }
  out << "\n";
  for (const auto& r : records) {
    for (std::size_t j = 0; j < schema.items.size(); ++j) {
      if (j) out << ",";
      if (!r.pattern.missing(static_cast<int>(j)))
        out << schema.labels[j][static_cast<std::size_t>(r.values[j])];
    }
    out << "\n";
  }
  write_text_file_atomic(path, out.str());
}

void write_manifest_json(const std::string& path, const Manifest& manifest) {
  json j;
  j["mode"] = manifest.mode;
  j["inputs"] = manifest.inputs;
  j["params"] = manifest.params;
  j["outputs"] = manifest.outputs;
  j["format_version"] = 1;
  write_text_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace icin
