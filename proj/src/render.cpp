#include "dashforge/render.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace dashforge {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

bool is_word_char(char c) { return is_ident_char(c) || c == '-'; }

enum class RewriteMode { markup, script };

// Replaces whole-token occurrences of `from`. In script mode a bare token or
// one glued to an identifier by '_' becomes `ident`, while string and
// selector contexts get `to`.
std::string rewrite_id(std::string_view text, std::string_view from, std::string_view to, std::string_view ident,
                       RewriteMode mode) {
  std::string out;
  out.reserve(text.size());
  std::size_t last = 0;
  for (std::size_t i = text.find(from); i != std::string_view::npos; i = text.find(from, i + from.size())) {
    const char prev = i > 0 ? text[i - 1] : '\0';
    const std::size_t after = i + from.size();
    const char next = after < text.size() ? text[after] : '\0';
    std::string_view replacement;
    const bool token = !is_word_char(prev) && !is_word_char(next);
    if (token) {
      const bool string_ctx = prev == '"' || prev == '\'' || prev == '`' || prev == '#';
      replacement = (mode == RewriteMode::markup || string_ctx) ? to : ident;
    } else if (mode == RewriteMode::script && ((prev == '_' && !is_word_char(next)) ||
                                               (next == '_' && !is_word_char(prev)))) {
      replacement = ident;
    } else {
      continue;
    }
    out.append(text.substr(last, i - last));
    out.append(replacement);
    last = after;
  }
  out.append(text.substr(last));
  return out;
}

// Breaks every "{{" in script text so no placeholder syntax survives into the
// page: outside string literals a space is inserted, inside them the second
// brace becomes an escape sequence.
std::string neutralize_braces_js(std::string_view js) {
  std::string out;
  out.reserve(js.size());
  char quote = '\0';
  for (std::size_t i = 0; i < js.size(); ++i) {
    const char c = js[i];
    if (quote != '\0') {
      if (c == '\\' && i + 1 < js.size()) {
        out.push_back(c);
        out.push_back(js[++i]);
        continue;
      }
      if (c == quote) quote = '\0';
      if (c == '{' && i + 1 < js.size() && js[i + 1] == '{') {
        out.append("{\\x7b");
        ++i;
        continue;
      }
      out.push_back(c);
      continue;
    }
    if (c == '"' || c == '\'' || c == '`') quote = c;
    out.push_back(c);
    if (c == '{' && i + 1 < js.size() && js[i + 1] == '{') out.push_back(' ');
  }
  return out;
}

std::string neutralize_braces_markup(std::string_view markup) {
  std::string out;
  out.reserve(markup.size());
  for (std::size_t i = 0; i < markup.size(); ++i) {
    if (markup[i] == '{' && i + 1 < markup.size() && markup[i + 1] == '{') {
      out.append("&#123;");
    } else {
      out.push_back(markup[i]);
    }
  }
  return out;
}

std::string cell(const Coordinate& c, ComponentKind kind, std::string_view body) {
  std::string out = "<section class=\"dashboard-cell cell-";
  out += to_string(kind);
  out += "\" data-position=\"";
  out += to_string(c.position());
  out += "\" data-order=\"";
  out += std::to_string(c.order());
  out += "\">\n";
  out += body;
  out += "\n</section>";
  return out;
}

}  // namespace

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      case '{':
        if (i + 1 < text.size() && text[i + 1] == '{') {
          out += "&#123;";
        } else {
          out.push_back(c);
        }
        break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fill_slots(const BaseTemplate& tpl, const SlotValues& values, bool strict) {
  for (const auto& name : tpl.slots) {
    if (values.find(name) == values.end()) fail(Errc::UnfilledSlot, "no value for slot {{" + name + "}}");
  }
  if (strict) {
    for (const auto& [name, value] : values) {
      if (!tpl.has_slot(name)) fail(Errc::UnknownSlotValue, "template '" + tpl.id + "' has no slot {{" + name + "}}");
    }
  }
  std::string out;
  out.reserve(tpl.body.size() * 2);
  std::string_view body = tpl.body;
  std::size_t last = 0;
  for (std::size_t i = body.find("{{"); i != std::string_view::npos; i = body.find("{{", last)) {
    const auto close = body.find("}}", i + 2);
    if (close == std::string_view::npos) fail(Errc::MalformedTemplate, "unterminated placeholder in '" + tpl.id + "'");
    const auto name = body.substr(i + 2, close - i - 2);
    const auto value = values.find(name);
    if (value == values.end()) fail(Errc::UnfilledSlot, "no value for slot {{" + std::string(name) + "}}");
    out.append(body.substr(last, i - last));
    out.append(value->second);
    last = close + 2;
  }
  out.append(body.substr(last));
  return out;
}

std::string fragment_metrics(const MetricGroup& group) {
  if (group.metrics.empty()) fail(Errc::EmptyGroup, "metric group '" + group.name + "' is empty");
  std::string out = "<div class=\"metric-panel\">";
  for (const auto& m : group.metrics) {
    out += "\n  <div class=\"stat-card\">";
    out += "\n    <div class=\"stat-indicator\">" + escape_html(m.indicator) + "</div>";
    out += "\n    <div class=\"stat-value\">" + escape_html(m.value) + "<span class=\"stat-unit\">" +
           escape_html(m.unit) + "</span></div>";
    out += "\n  </div>";
  }
  out += "\n</div>";
  return out;
}

std::string fragment_table(const TableArtifact& table, std::size_t row_cap) {
  std::string out = "<div class=\"table-panel\">\n<table class=\"data-table\">\n<thead><tr>";
  for (const auto& h : table.header) out += "<th>" + escape_html(h) + "</th>";
  out += "</tr></thead>\n<tbody>";
  const std::size_t n = std::min(row_cap, table.rows.size());
  for (std::size_t r = 0; r < n; ++r) {
    out += "\n<tr>";
    for (const auto& v : table.rows[r]) out += "<td>" + escape_html(v) + "</td>";
    out += "</tr>";
  }
  out += "\n</tbody>\n</table>\n</div>";
  return out;
}

std::string chart_element_id(const Coordinate& coordinate) {
  return "chart-" + std::string(to_string(coordinate.position())) + "-" + std::to_string(coordinate.order());
}

ChartFragment fragment_chart(const ChartArtifact& chart, const Coordinate& coordinate) {
  ChartFragment frag;
  frag.element_id = chart_element_id(coordinate);
  std::string ident = frag.element_id;
  std::replace(ident.begin(), ident.end(), '-', '_');
  frag.container = neutralize_braces_markup(
      rewrite_id(chart.container_markup, chart.container_id, frag.element_id, ident, RewriteMode::markup));
  frag.script = neutralize_braces_js(
      rewrite_id(chart.init_script, chart.container_id, frag.element_id, ident, RewriteMode::script));
  frag.dependencies = chart.dependencies;
  return frag;
}

RenderOutput compile(const DashboardConfig& config, const ArtifactSet& artifacts, const BaseTemplate& tpl,
                     const CompileOptions& opts) {
  if (auto bad = check_columns(config, tpl.columns); !bad.empty()) {
    fail(Errc::TemplateColumnMismatch, bad.front().message);
  }

  RenderOutput output;
  std::map<Position, std::string> columns;
  std::vector<std::string> dependencies;
  std::vector<std::string> scripts;
  std::set<std::string> element_ids;

  for (const auto& [coord, ref] : config.placements) {
    std::string body;
    std::size_t script_bytes = 0;
    switch (ref.kind) {
      case ComponentKind::metrics: {
        const auto* group = artifacts.find_metrics(ref.path);
        if (!group) fail(Errc::DanglingRef, coord.to_string() + " references missing " + ref.path);
        body = fragment_metrics(*group);
        break;
      }
      case ComponentKind::table: {
        const auto* table = artifacts.find_table(ref.path);
        if (!table) fail(Errc::DanglingRef, coord.to_string() + " references missing " + ref.path);
        body = fragment_table(*table, opts.table_row_cap);
        break;
      }
      case ComponentKind::chart: {
        const auto* chart = artifacts.find_chart(ref.path);
        if (!chart) fail(Errc::DanglingRef, coord.to_string() + " references missing " + ref.path);
        auto frag = fragment_chart(*chart, coord);
        if (!element_ids.insert(frag.element_id).second) {
          fail(Errc::IdCollision, "element id '" + frag.element_id + "' used twice");
        }
        for (auto& dep : frag.dependencies) {
          if (std::find(dependencies.begin(), dependencies.end(), dep) == dependencies.end()) {
            dependencies.push_back(std::move(dep));
          }
        }
        body = "<div class=\"chart-panel\">\n" + frag.container + "\n</div>";
        std::string script = "<script type=\"text/javascript\">\n" + frag.script + "\n</script>";
        script_bytes = script.size();
        scripts.push_back(std::move(script));
        break;
      }
    }
    std::string fragment = cell(coord, ref.kind, body);
    output.manifest.push_back(ManifestEntry{coord, ref, fragment.size() + script_bytes});
    auto& column = columns[coord.position()];
    if (!column.empty()) column += "\n";
    column += fragment;
  }

  SlotValues values;
  values.emplace(slot::kTitle, escape_html(config.title));
  values.emplace(slot::kFootnote, escape_html(config.footnote));
  if (tpl.has_slot(slot::kFontColor)) values.emplace(slot::kFontColor, escape_html(config.font_color));
  std::string dep_tags;
  for (const auto& dep : dependencies) {
    if (!dep_tags.empty()) dep_tags += "\n    ";
    dep_tags += "<script type=\"text/javascript\" src=\"" + escape_html(dep) + "\"></script>";
  }
  values.emplace(slot::kDependence, std::move(dep_tags));
  std::string script_block;
  for (const auto& s : scripts) {
    if (!script_block.empty()) script_block += "\n";
    script_block += s;
  }
  values.emplace(slot::kChartScripts, std::move(script_block));
  for (Position p : tpl.columns.positions()) values.emplace(column_slot(p), columns[p]);

  output.html = fill_slots(tpl, values, /*strict=*/true);
  if (const auto pos = output.html.find("{{"); pos != std::string::npos) {
    fail(Errc::UnfilledSlot, "placeholder syntax left in output at byte " + std::to_string(pos));
  }
  return output;
}

RenderOutput compile(const DashboardConfig& config, const ArtifactSet& artifacts, const TemplateRegistry& registry,
                     const CompileOptions& opts) {
  return compile(config, artifacts, registry.load(config.template_id), opts);
}

}  // namespace dashforge
