#include "dashforge/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "html_scan.hpp"

namespace dashforge {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string stem_of(std::string_view file) {
  return fs::path(std::string(file)).stem().string();
}

void warn(const LoadOptions& opts, std::string message) {
  if (opts.warnings) opts.warnings->push_back(std::move(message));
}

void expect_kind(std::string_view file, ComponentKind kind) {
  if (classify_artifact(file) != kind) {
    fail(Errc::UnknownKind, std::string(file) + " is not a " + std::string(to_string(kind)) + " artifact");
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::string_view strip_bom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  return s;
}

// pandas' default to_csv() writes an unnamed leading index column.
bool has_positional_index(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  if (header.empty() || !header.front().empty() || rows.empty()) return false;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty() || rows[r].front() != std::to_string(r)) return false;
  }
  return true;
}

}  // namespace

const MetricGroup* ArtifactSet::find_metrics(std::string_view file) const noexcept {
  for (const auto& g : metrics) {
    if (g.file == file) return &g;
  }
  return nullptr;
}

const ChartArtifact* ArtifactSet::find_chart(std::string_view file) const noexcept {
  for (const auto& c : charts) {
    if (c.file == file) return &c;
  }
  return nullptr;
}

const TableArtifact* ArtifactSet::find_table(std::string_view file) const noexcept {
  for (const auto& t : tables) {
    if (t.file == file) return &t;
  }
  return nullptr;
}

bool ArtifactSet::contains(const ComponentRef& ref) const noexcept {
  switch (ref.kind) {
    case ComponentKind::chart: return find_chart(ref.path) != nullptr;
    case ComponentKind::table: return find_table(ref.path) != nullptr;
    case ComponentKind::metrics: return find_metrics(ref.path) != nullptr;
  }
  return false;
}

namespace {
template <typename T>
void add_unique(std::vector<T>& list, T item, std::string_view kind) {
  for (const auto& existing : list) {
    if (existing.name == item.name) {
      fail(Errc::SchemaViolation, "duplicate " + std::string(kind) + " name '" + item.name + "'");
    }
  }
  list.push_back(std::move(item));
}
}  // namespace

void ArtifactSet::add(MetricGroup group) { add_unique(metrics, std::move(group), "metrics"); }
void ArtifactSet::add(ChartArtifact chart) { add_unique(charts, std::move(chart), "chart"); }
void ArtifactSet::add(TableArtifact table) { add_unique(tables, std::move(table), "table"); }

ComponentKind classify_artifact(std::string_view file) {
  const auto kind = kind_for_filename(file);
  if (!kind) fail(Errc::UnknownKind, "unsupported artifact type: " + std::string(file));
  return *kind;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------- metrics ----------------

MetricGroup parse_metrics(std::string_view text, std::string_view file, const LoadOptions& opts) {
  json doc;
  try {
    doc = json::parse(strip_bom(text));
  } catch (const json::exception& e) {
    fail(Errc::MalformedDocument, std::string(file) + ": " + e.what());
  }
  if (!doc.is_array()) fail(Errc::MalformedDocument, std::string(file) + ": expected a list of metrics");

  MetricGroup group{stem_of(file), std::string(file), {}};
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    const std::string where = std::string(file) + "[" + std::to_string(i) + "]";
    if (!entry.is_object()) fail(Errc::MalformedDocument, where + ": expected an object");
    Metric m;
    for (auto [key, slot] : {std::pair{"Indicator", &m.indicator}, std::pair{"Value", &m.value},
                             std::pair{"Unit", &m.unit}}) {
      const auto it = entry.find(key);
      if (it == entry.end()) fail(Errc::MissingField, where + ": missing \"" + key + "\"");
      if (it->is_string()) {
        *slot = it->get<std::string>();
      } else if (it->is_number()) {
        *slot = it->dump();
      } else {
        fail(Errc::MalformedDocument, where + ": \"" + key + "\" must be a string");
      }
      if (slot->empty()) fail(Errc::MissingField, where + ": \"" + key + "\" is empty");
    }
    group.metrics.push_back(std::move(m));
  }
  if (group.metrics.empty()) {
    if (opts.strict) fail(Errc::EmptyGroup, std::string(file) + ": metric list is empty");
    warn(opts, std::string(file) + ": metric list is empty");
  }
  return group;
}

MetricGroup load_metrics(const fs::path& dir, std::string_view file, const LoadOptions& opts) {
  expect_kind(file, ComponentKind::metrics);
  return parse_metrics(read_file(dir / std::string(file)), file, opts);
}

// ---------------- tables ----------------

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool quoted_field = false;
  bool record_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    quoted_field = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || quoted_field) {
          fail(Errc::MalformedCsv, "stray quote in field at byte " + std::to_string(i));
        }
        in_quotes = true;
        quoted_field = true;
        record_started = true;
        break;
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        if (quoted_field) fail(Errc::MalformedCsv, "text after closing quote at byte " + std::to_string(i));
        field.push_back(c);
        record_started = true;
    }
  }
  if (in_quotes) fail(Errc::MalformedCsv, "unterminated quoted field");
  if (record_started || !field.empty()) end_record();
  // blank lines carry no record
  std::erase_if(records, [](const auto& r) { return r.size() == 1 && r.front().empty(); });
  return records;
}

TableArtifact parse_table(std::string_view text, std::string_view file, const LoadOptions& opts) {
  auto records = parse_csv(strip_bom(text));
  if (records.empty()) fail(Errc::MalformedCsv, std::string(file) + ": no header record");

  TableArtifact table{stem_of(file), std::string(file), std::move(records.front()), {}};
  table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      fail(Errc::MalformedCsv, std::string(file) + ": record " + std::to_string(r + 2) + " has " +
                                   std::to_string(table.rows[r].size()) + " fields, header has " +
                                   std::to_string(table.header.size()));
    }
  }
  if (has_positional_index(table.header, table.rows)) {
    table.header.erase(table.header.begin());
    for (auto& row : table.rows) row.erase(row.begin());
    warn(opts, std::string(file) + ": dropped unnamed row-index column");
  }

  std::string problem;
  if (table.rows.size() < 10) {
    problem = "has " + std::to_string(table.rows.size()) + " rows, at least 10 required";
  } else if (table.header.size() < 3 || table.header.size() > 5) {
    problem = "has " + std::to_string(table.header.size()) + " columns, 3 to 5 required";
  }
  if (!problem.empty()) {
    if (opts.strict) fail(Errc::ConstraintViolation, std::string(file) + " " + problem);
    warn(opts, std::string(file) + " " + problem);
  }
  return table;
}

TableArtifact load_table(const fs::path& dir, std::string_view file, const LoadOptions& opts) {
  expect_kind(file, ComponentKind::table);
  return parse_table(read_file(dir / std::string(file)), file, opts);
}

// ---------------- charts ----------------

namespace {

std::vector<std::string> referenced_ids(std::string_view script) {
  static const std::regex by_id(R"(getElementById\(\s*['"]([^'"]+)['"]\s*\))");
  static const std::regex by_selector(R"(querySelector\(\s*['"]#([A-Za-z0-9_\-:.]+)['"]\s*\))");
  std::vector<std::pair<std::size_t, std::string>> hits;
  const std::string s(script);
  for (const auto* re : {&by_id, &by_selector}) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), *re); it != std::sregex_iterator(); ++it) {
      hits.emplace_back(static_cast<std::size_t>(it->position(0)), (*it)[1].str());
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::string> ids;
  for (auto& [pos, id] : hits) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
  }
  return ids;
}

std::size_t count_id_attrs(std::string_view markup, std::string_view id) {
  std::size_t n = 0;
  for (const auto& tag : html::scan(markup)) {
    if (tag.type == html::Tag::Type::start && tag.attr("id") == std::string(id)) ++n;
  }
  return n;
}

}  // namespace

ChartArtifact parse_chart(std::string_view text, std::string_view file) {
  if (trim(text).empty()) fail(Errc::EmptyDocument, std::string(file) + " is empty");
  const auto tags = html::scan(text);

  ChartArtifact chart;
  chart.name = stem_of(file);
  chart.file = std::string(file);

  std::vector<std::size_t> inline_scripts;
  std::vector<std::pair<std::string, std::size_t>> elements_by_id;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    const auto& tag = tags[k];
    if (tag.type != html::Tag::Type::start) continue;
    if (tag.name == "script") {
      if (auto src = tag.attr("src")) {
        if (!src->empty() &&
            std::find(chart.dependencies.begin(), chart.dependencies.end(), *src) == chart.dependencies.end()) {
          chart.dependencies.push_back(*src);
        }
      } else if (!trim(text.substr(tag.raw_begin, tag.raw_end - tag.raw_begin)).empty()) {
        inline_scripts.push_back(k);
      }
      continue;
    }
    if (tag.name == "style") continue;
    if (auto id = tag.attr("id"); id && !id->empty()) elements_by_id.emplace_back(*id, k);
  }
  if (inline_scripts.empty()) fail(Errc::MalformedChart, std::string(file) + ": no inline script");

  for (std::size_t k : inline_scripts) {
    const auto& script_tag = tags[k];
    const auto body = trim(text.substr(script_tag.raw_begin, script_tag.raw_end - script_tag.raw_begin));
    for (const auto& id : referenced_ids(body)) {
      const auto el = std::find_if(elements_by_id.begin(), elements_by_id.end(),
                                   [&](const auto& e) { return e.first == id; });
      if (el == elements_by_id.end()) continue;
      const auto end = html::matching_end(tags, el->second);
      if (!end) fail(Errc::MalformedChart, std::string(file) + ": element '" + id + "' is not closed");
      chart.container_id = id;
      chart.container_markup = std::string(text.substr(tags[el->second].begin, *end - tags[el->second].begin));
      chart.init_script = std::string(body);
      if (count_id_attrs(chart.container_markup, id) != 1) {
        fail(Errc::MalformedChart, std::string(file) + ": id '" + id + "' is not unique in its container");
      }
      return chart;
    }
  }
  fail(Errc::MalformedChart, std::string(file) + ": no inline script targets an element in the document");
}

ChartArtifact load_chart(const fs::path& dir, std::string_view file) {
  expect_kind(file, ComponentKind::chart);
  return parse_chart(read_file(dir / std::string(file)), file);
}

// ---------------- sets ----------------

ArtifactSet load_artifacts(const fs::path& dir, const std::vector<std::string>& files, const LoadOptions& opts) {
  ArtifactSet set;
  std::set<std::string> seen;
  for (const auto& file : files) {
    if (!seen.insert(file).second) continue;
    switch (classify_artifact(file)) {
      case ComponentKind::metrics: set.add(load_metrics(dir, file, opts)); break;
      case ComponentKind::table: set.add(load_table(dir, file, opts)); break;
      case ComponentKind::chart: set.add(load_chart(dir, file)); break;
    }
  }
  return set;
}

ArtifactSet load_referenced(const fs::path& dir, const DashboardConfig& config, const LoadOptions& opts) {
  std::vector<std::string> files;
  for (const auto& [coord, ref] : config.placements) {
    // Missing files stay out of the set; compile reports them as dangling.
    std::error_code ec;
    if (fs::is_regular_file(dir / ref.path, ec)) files.push_back(ref.path);
  }
  return load_artifacts(dir, files, opts);
}

}  // namespace dashforge
