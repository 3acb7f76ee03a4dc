#include "dashforge/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

namespace dashforge {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 3> kPositionNames = {"left", "middle", "right"};

// CSS Color Module Level 4 named colors.
constexpr std::string_view kNamedColors[] = {
    "aliceblue", "antiquewhite", "aqua", "aquamarine", "azure", "beige", "bisque", "black",
    "blanchedalmond", "blue", "blueviolet", "brown", "burlywood", "cadetblue", "chartreuse",
    "chocolate", "coral", "cornflowerblue", "cornsilk", "crimson", "cyan", "darkblue", "darkcyan",
    "darkgoldenrod", "darkgray", "darkgreen", "darkgrey", "darkkhaki", "darkmagenta",
    "darkolivegreen", "darkorange", "darkorchid", "darkred", "darksalmon", "darkseagreen",
    "darkslateblue", "darkslategray", "darkslategrey", "darkturquoise", "darkviolet", "deeppink",
    "deepskyblue", "dimgray", "dimgrey", "dodgerblue", "firebrick", "floralwhite", "forestgreen",
    "fuchsia", "gainsboro", "ghostwhite", "gold", "goldenrod", "gray", "green", "greenyellow",
    "grey", "honeydew", "hotpink", "indianred", "indigo", "ivory", "khaki", "lavender",
    "lavenderblush", "lawngreen", "lemonchiffon", "lightblue", "lightcoral", "lightcyan",
    "lightgoldenrodyellow", "lightgray", "lightgreen", "lightgrey", "lightpink", "lightsalmon",
    "lightseagreen", "lightskyblue", "lightslategray", "lightslategrey", "lightsteelblue",
    "lightyellow", "lime", "limegreen", "linen", "magenta", "maroon", "mediumaquamarine",
    "mediumblue", "mediumorchid", "mediumpurple", "mediumseagreen", "mediumslateblue",
    "mediumspringgreen", "mediumturquoise", "mediumvioletred", "midnightblue", "mintcream",
    "mistyrose", "moccasin", "navajowhite", "navy", "oldlace", "olive", "olivedrab", "orange",
    "orangered", "orchid", "palegoldenrod", "palegreen", "paleturquoise", "palevioletred",
    "papayawhip", "peachpuff", "peru", "pink", "plum", "powderblue", "purple", "rebeccapurple",
    "red", "rosybrown", "royalblue", "saddlebrown", "salmon", "sandybrown", "seagreen",
    "seashell", "sienna", "silver", "skyblue", "slateblue", "slategray", "slategrey", "snow",
    "springgreen", "steelblue", "tan", "teal", "thistle", "tomato", "turquoise", "violet",
    "wheat", "white", "whitesmoke", "yellow", "yellowgreen", "transparent"};

constexpr std::string_view kConfigKeys[] = {"version",  "template_id", "title",
                                            "footnote", "font_color",  "placements"};
constexpr std::string_view kPlacementKeys[] = {"position", "order", "kind", "path"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <std::size_t N>
bool one_of(const std::string& key, const std::string_view (&keys)[N]) {
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

}  // namespace

std::string_view to_string(Position p) noexcept { return kPositionNames[static_cast<int>(p)]; }

std::optional<Position> parse_position(std::string_view text) noexcept {
  for (Position p : kAllPositions) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

Coordinate::Coordinate(Position position, int order) : position_(position), order_(order) {
  if (order < 1 || order > kRowsPerColumn) {
    fail(Errc::BadCoordinate, "order " + std::to_string(order) + " outside [1, 3]");
  }
}

std::string Coordinate::to_string() const {
  return std::string(dashforge::to_string(position_)) + "/" + std::to_string(order_);
}

ColumnSet::ColumnSet(std::initializer_list<Position> columns) {
  for (Position p : columns) insert(p);
}

std::size_t ColumnSet::size() const noexcept {
  std::size_t n = 0;
  for (Position p : kAllPositions) n += contains(p) ? 1 : 0;
  return n;
}

std::vector<Position> ColumnSet::positions() const {
  std::vector<Position> out;
  for (Position p : kAllPositions) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

std::string_view to_string(ComponentKind k) noexcept {
  switch (k) {
    case ComponentKind::chart: return "chart";
    case ComponentKind::table: return "table";
    case ComponentKind::metrics: return "metrics";
  }
  return "chart";
}

std::optional<ComponentKind> parse_kind(std::string_view text) noexcept {
  if (text == "chart") return ComponentKind::chart;
  if (text == "table") return ComponentKind::table;
  if (text == "metrics") return ComponentKind::metrics;
  return std::nullopt;
}

std::optional<ComponentKind> kind_for_filename(std::string_view filename) noexcept {
  const auto slash = filename.find_last_of("/\\");
  const std::string_view base = slash == std::string_view::npos ? filename : filename.substr(slash + 1);
  const auto dot = base.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return std::nullopt;
  const std::string ext = lower(base.substr(dot));
  if (ext == ".html") return ComponentKind::chart;
  if (ext == ".csv") return ComponentKind::table;
  if (ext == ".json") return ComponentKind::metrics;
  return std::nullopt;
}

void check_component_path(ComponentKind kind, std::string_view path) {
  if (path.empty()) fail(Errc::SchemaViolation, "component path is empty");
  if (path.front() == '/' || path.front() == '\\' ||
      (path.size() > 1 && path[1] == ':')) {
    fail(Errc::SchemaViolation, "component path must be relative: " + std::string(path));
  }
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto end = path.find_first_of("/\\", start);
    const auto segment = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (segment == "..") {
      fail(Errc::SchemaViolation, "component path escapes the artifact directory: " + std::string(path));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  const auto inferred = kind_for_filename(path);
  if (!inferred || *inferred != kind) {
    fail(Errc::SchemaViolation, "kind '" + std::string(to_string(kind)) +
                                    "' does not match the extension of " + std::string(path));
  }
}

ComponentRef ComponentRef::make(ComponentKind kind, std::string path) {
  check_component_path(kind, path);
  return ComponentRef{kind, std::move(path)};
}

ComponentRef ComponentRef::from_path(std::string path) {
  const auto kind = kind_for_filename(path);
  if (!kind) fail(Errc::UnknownKind, "cannot classify " + path);
  return make(*kind, std::move(path));
}

bool is_valid_color(std::string_view text) noexcept {
  if (text.empty()) return false;
  if (text.front() == '#') {
    const auto digits = text.substr(1);
    if (digits.size() != 3 && digits.size() != 4 && digits.size() != 6 && digits.size() != 8) {
      return false;
    }
    return std::all_of(digits.begin(), digits.end(),
                       [](unsigned char c) { return std::isxdigit(c) != 0; });
  }
  const std::string name = lower(text);
  return std::find(std::begin(kNamedColors), std::end(kNamedColors), name) != std::end(kNamedColors);
}

bool is_valid_utf8(std::string_view text) noexcept {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string serialize_config(const DashboardConfig& config) {
  ordered_json doc;
  doc["version"] = config.version;
  doc["template_id"] = config.template_id;
  doc["title"] = config.title;
  doc["footnote"] = config.footnote;
  doc["font_color"] = config.font_color;
  doc["placements"] = ordered_json::array();
  for (const auto& [coord, ref] : config.placements) {
    ordered_json p;
    p["position"] = std::string(to_string(coord.position()));
    p["order"] = coord.order();
    p["kind"] = std::string(to_string(ref.kind));
    p["path"] = ref.path;
    doc["placements"].push_back(std::move(p));
  }
  return doc.dump(4, ' ', /*ensure_ascii=*/false) + "\n";
}

namespace {

void note(std::vector<Violation>& out, Errc code, std::string message,
          std::optional<Coordinate> coord = std::nullopt, std::optional<std::string> path = std::nullopt) {
  out.push_back(Violation{code, std::move(message), coord, std::move(path)});
}

std::optional<std::string> text_field(const ordered_json& doc, std::string_view key,
                                      std::vector<Violation>& out) {
  const auto it = doc.find(std::string(key));
  if (it == doc.end()) {
    note(out, Errc::SchemaViolation, "missing field '" + std::string(key) + "'");
    return std::nullopt;
  }
  if (!it->is_string()) {
    note(out, Errc::SchemaViolation, "field '" + std::string(key) + "' must be a string");
    return std::nullopt;
  }
  return it->get<std::string>();
}

std::optional<std::pair<Coordinate, ComponentRef>> placement_entry(const ordered_json& entry,
                                                                   std::size_t index,
                                                                   std::vector<Violation>& out) {
  const std::string where = "placements[" + std::to_string(index) + "]";
  if (!entry.is_object()) {
    note(out, Errc::SchemaViolation, where + " must be an object");
    return std::nullopt;
  }
  bool ok = true;
  for (const auto& [key, value] : entry.items()) {
    if (!one_of(key, kPlacementKeys)) {
      note(out, Errc::SchemaViolation, where + ": unknown field '" + key + "'");
      ok = false;
    }
  }
  std::optional<Position> position;
  if (auto it = entry.find("position"); it == entry.end() || !it->is_string()) {
    note(out, Errc::SchemaViolation, where + ": 'position' must be a string");
    ok = false;
  } else if (position = parse_position(it->get<std::string>()); !position) {
    note(out, Errc::SchemaViolation,
         where + ": position '" + it->get<std::string>() + "' is not left, middle or right");
    ok = false;
  }
  int order = 0;
  if (auto it = entry.find("order"); it == entry.end() || !it->is_number_integer()) {
    note(out, Errc::SchemaViolation, where + ": 'order' must be an integer");
    ok = false;
  } else if (order = it->get<int>(); order < 1 || order > kRowsPerColumn) {
    note(out, Errc::SchemaViolation, where + ": order " + std::to_string(order) + " outside [1, 3]");
    ok = false;
  }
  std::optional<ComponentKind> kind;
  if (auto it = entry.find("kind"); it == entry.end() || !it->is_string()) {
    note(out, Errc::SchemaViolation, where + ": 'kind' must be a string");
    ok = false;
  } else if (kind = parse_kind(it->get<std::string>()); !kind) {
    note(out, Errc::SchemaViolation, where + ": unknown kind '" + it->get<std::string>() + "'");
    ok = false;
  }
  std::optional<std::string> path;
  if (auto it = entry.find("path"); it == entry.end() || !it->is_string()) {
    note(out, Errc::SchemaViolation, where + ": 'path' must be a string");
    ok = false;
  } else {
    path = it->get<std::string>();
  }
  if (!ok) return std::nullopt;
  const Coordinate coord(*position, order);
  try {
    return std::pair{coord, ComponentRef::make(*kind, *path)};
  } catch (const Error& e) {
    note(out, e.code(), where + ": " + e.message(), coord, path);
    return std::nullopt;
  }
}

}  // namespace

std::optional<DashboardConfig> inspect_config(std::string_view bytes,
                                              std::vector<Violation>& violations) {
  const std::size_t before = violations.size();
  ordered_json doc;
  try {
    doc = ordered_json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    note(violations, Errc::MalformedDocument, e.what());
    return std::nullopt;
  }
  if (!doc.is_object()) {
    note(violations, Errc::SchemaViolation, "config must be a JSON object");
    return std::nullopt;
  }
  for (const auto& [key, value] : doc.items()) {
    if (!one_of(key, kConfigKeys)) note(violations, Errc::SchemaViolation, "unknown field '" + key + "'");
  }

  DashboardConfig config;
  if (auto v = text_field(doc, "version", violations)) {
    if (*v != kSchemaVersion) {
      note(violations, Errc::VersionMismatch,
           "unsupported version '" + *v + "' (expected '" + std::string(kSchemaVersion) + "')");
    }
    config.version = *v;
  }
  if (auto v = text_field(doc, "template_id", violations)) config.template_id = *v;
  if (auto v = text_field(doc, "title", violations)) config.title = *v;
  if (auto v = text_field(doc, "footnote", violations)) config.footnote = *v;
  if (auto v = text_field(doc, "font_color", violations)) {
    if (!is_valid_color(*v)) note(violations, Errc::SchemaViolation, "font_color '" + *v + "' is not a color");
    config.font_color = *v;
  }

  const auto pit = doc.find("placements");
  if (pit == doc.end()) {
    note(violations, Errc::SchemaViolation, "missing field 'placements'");
  } else if (!pit->is_array()) {
    note(violations, Errc::SchemaViolation, "'placements' must be an array");
  } else {
    for (std::size_t i = 0; i < pit->size(); ++i) {
      auto entry = placement_entry((*pit)[i], i, violations);
      if (!entry) continue;
      const auto [it, inserted] = config.placements.emplace(entry->first, entry->second);
      if (!inserted) {
        note(violations, Errc::SchemaViolation, "duplicate coordinate " + entry->first.to_string(),
             entry->first, entry->second.path);
      }
    }
  }
  if (violations.size() != before) return std::nullopt;
  return config;
}

DashboardConfig deserialize_config(std::string_view bytes) {
  std::vector<Violation> violations;
  auto config = inspect_config(bytes, violations);
  if (config) return *std::move(config);
  // A version mismatch outranks the structural noise it usually causes.
  for (const auto& v : violations) {
    if (v.code == Errc::VersionMismatch) fail(v.code, v.message);
  }
  fail(violations.front().code, violations.front().message);
}

std::vector<Violation> check_columns(const DashboardConfig& config, const ColumnSet& columns) {
  std::vector<Violation> out;
  for (const auto& [coord, ref] : config.placements) {
    if (!columns.contains(coord.position())) {
      note(out, Errc::TemplateColumnMismatch,
           "template '" + config.template_id + "' has no " + std::string(to_string(coord.position())) +
               " column",
           coord, ref.path);
    }
  }
  return out;
}

}  // namespace dashforge
