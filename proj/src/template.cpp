#include "dashforge/template.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "dashforge/artifacts.hpp"

namespace dashforge {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

bool is_slot_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-';
}

bool is_valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_';
  });
}

}  // namespace

std::string column_slot(Position p) {
  std::string upper(to_string(p));
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return "TODO-" + upper + "-COLUMN-CONTENT";
}

std::vector<std::string> discover_slots(std::string_view body) {
  std::vector<std::string> names;
  for (std::size_t i = body.find("{{"); i != std::string_view::npos; i = body.find("{{", i)) {
    std::size_t p = i + 2;
    while (p < body.size() && is_slot_char(body[p])) ++p;
    if (p == i + 2 || body.substr(p, 2) != "}}") {
      fail(Errc::MalformedTemplate, "stray '{{' at byte " + std::to_string(i));
    }
    std::string name(body.substr(i + 2, p - i - 2));
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(std::move(name));
    i = p + 2;
  }
  return names;
}

BaseTemplate make_template(std::string_view id, std::string body, std::string_view manifest_json) {
  json manifest;
  try {
    manifest = json::parse(manifest_json);
  } catch (const json::exception& e) {
    fail(Errc::MalformedTemplate, "template '" + std::string(id) + "' manifest: " + e.what());
  }
  if (!manifest.is_object()) fail(Errc::MalformedTemplate, "template manifest must be an object");

  BaseTemplate tpl;
  tpl.id = std::string(id);
  if (auto it = manifest.find("id"); it != manifest.end() && (!it->is_string() || it->get<std::string>() != id)) {
    fail(Errc::MalformedTemplate, "manifest id does not match template directory '" + std::string(id) + "'");
  }
  const auto cols = manifest.find("columns");
  if (cols == manifest.end() || !cols->is_array()) {
    fail(Errc::MalformedTemplate, "template '" + tpl.id + "' manifest lacks a columns list");
  }
  for (const auto& c : *cols) {
    const auto p = c.is_string() ? parse_position(c.get<std::string>()) : std::nullopt;
    if (!p) fail(Errc::MalformedTemplate, "template '" + tpl.id + "' declares an unknown column " + c.dump());
    tpl.columns.insert(*p);
  }
  if (tpl.columns.size() < 2) {
    fail(Errc::MalformedTemplate, "template '" + tpl.id + "' must declare at least two columns");
  }
  if (auto it = manifest.find("optional_slots"); it != manifest.end()) {
    if (!it->is_array()) fail(Errc::MalformedTemplate, "optional_slots must be a list");
    for (const auto& s : *it) {
      if (!s.is_string()) fail(Errc::MalformedTemplate, "optional_slots entries must be strings");
      tpl.optional_slots.insert(s.get<std::string>());
    }
  }

  const auto found = discover_slots(body);
  tpl.slots.insert(found.begin(), found.end());
  tpl.body = std::move(body);

  std::vector<std::string> required = {std::string(slot::kTitle), std::string(slot::kFootnote),
                                       std::string(slot::kDependence), std::string(slot::kChartScripts)};
  for (Position p : tpl.columns.positions()) required.push_back(column_slot(p));
  for (const auto& name : required) {
    if (!tpl.has_slot(name)) {
      fail(Errc::MissingRequiredSlot, "template '" + tpl.id + "' lacks slot {{" + name + "}}");
    }
  }
  for (Position p : kAllPositions) {
    if (!tpl.columns.contains(p) && tpl.has_slot(column_slot(p))) {
      fail(Errc::MalformedTemplate, "template '" + tpl.id + "' has a slot for undeclared column " +
                                        std::string(to_string(p)));
    }
  }
  return tpl;
}

TemplateRegistry::TemplateRegistry(fs::path root) : root_(std::move(root)) {}

bool TemplateRegistry::contains(std::string_view id) const {
  if (!is_valid_id(id)) return false;
  std::error_code ec;
  const fs::path dir = root_ / std::string(id);
  return fs::is_regular_file(dir / "template.html", ec) && fs::is_regular_file(dir / "manifest.json", ec);
}

std::vector<std::string> TemplateRegistry::ids() const {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && contains(name)) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BaseTemplate TemplateRegistry::load(std::string_view id) const {
  if (!contains(id)) {
    fail(Errc::UnknownTemplate, "no template '" + std::string(id) + "' in " + root_.string());
  }
  const fs::path dir = root_ / std::string(id);
  return make_template(id, read_file(dir / "template.html"), read_file(dir / "manifest.json"));
}

}  // namespace dashforge
