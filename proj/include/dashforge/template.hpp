#pragma once

// Base templates: HTML documents with {{slot}} placeholders plus a sidecar
// manifest declaring the column layout.
//
// Registry layout on disk:
//   <root>/<id>/template.html
//   <root>/<id>/manifest.json   {"id": ..., "columns": [...], "optional_slots": [...]}

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dashforge/model.hpp"

namespace dashforge {

namespace slot {
inline constexpr std::string_view kTitle = "title";
inline constexpr std::string_view kFootnote = "footnote";
inline constexpr std::string_view kFontColor = "font-color";
inline constexpr std::string_view kDependence = "TODO-DEPENDENCE";
inline constexpr std::string_view kChartScripts = "TODO-JS-Chart";
}  // namespace slot

// "TODO-LEFT-COLUMN-CONTENT" etc.
std::string column_slot(Position p);

struct BaseTemplate {
  std::string id;
  ColumnSet columns;
  std::string body;
  std::set<std::string> slots;
  // Slots that may be filled with an empty string.
  std::set<std::string> optional_slots;

  bool has_slot(std::string_view name) const { return slots.count(std::string(name)) != 0; }
  bool is_optional(std::string_view name) const { return optional_slots.count(std::string(name)) != 0; }
};

// Placeholder names in order of first appearance. Throws MalformedTemplate on
// a "{{" that does not open a well-formed placeholder.
std::vector<std::string> discover_slots(std::string_view body);

// Builds and validates a template from its two files' contents.
// Throws MalformedTemplate or MissingRequiredSlot.
BaseTemplate make_template(std::string_view id, std::string body, std::string_view manifest_json);

class TemplateRegistry {
 public:
  explicit TemplateRegistry(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  bool contains(std::string_view id) const;
  std::vector<std::string> ids() const;

  // Throws UnknownTemplate, MalformedTemplate, MissingRequiredSlot.
  BaseTemplate load(std::string_view id) const;

 private:
  std::filesystem::path root_;
};

inline BaseTemplate load_template(const TemplateRegistry& registry, std::string_view id) {
  return registry.load(id);
}

}  // namespace dashforge
