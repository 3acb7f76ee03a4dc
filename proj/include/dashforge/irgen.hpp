#pragma once

// Config generation: builds the initial dashboard config from the analysis
// outputs, a base template and the textual defaults.

#include <string>
#include <utility>
#include <vector>

#include "dashforge/artifacts.hpp"
#include "dashforge/model.hpp"
#include "dashforge/template.hpp"

namespace dashforge {

inline constexpr std::string_view kDefaultTitle = "Dashboard";
inline constexpr std::string_view kDefaultFontColor = "#FFFFFF";

struct DefaultProps {
  std::string title;
  std::string footnote;
  std::string font_color;
};

// Fills empty fields with the fallbacks. An empty footnote is kept only when
// the template marks its footnote slot optional (ConstraintViolation
// otherwise); an invalid color is a SchemaViolation.
DefaultProps resolve_defaults(DefaultProps props, const BaseTemplate& tpl);

// Grid cells in fill order: column-major over the template's columns
// (left, middle, right), rows 1..3 within each column.
std::vector<Coordinate> fill_order(const ColumnSet& columns);

// Metric groups first, then charts, then tables, each in list order.
std::vector<ComponentRef> components_of(const ArtifactSet& artifacts);

// Places `components` onto the grid in fill order after stably grouping
// them metrics, charts, tables. Throws CapacityExceeded.
std::vector<std::pair<Coordinate, ComponentRef>> assign_layout(std::vector<ComponentRef> components,
                                                               const ColumnSet& columns);
std::vector<std::pair<Coordinate, ComponentRef>> assign_layout(const ArtifactSet& artifacts,
                                                               const BaseTemplate& tpl);

// Throws EmptyArtifactSet, CapacityExceeded, ConstraintViolation.
DashboardConfig generate_config(const std::vector<ComponentRef>& components, const BaseTemplate& tpl,
                                const DefaultProps& defaults);
DashboardConfig generate_config(const ArtifactSet& artifacts, const BaseTemplate& tpl,
                                const DefaultProps& defaults);
// Resolves the template first; throws UnknownTemplate.
DashboardConfig generate_config(const ArtifactSet& artifacts, const TemplateRegistry& registry,
                                std::string_view template_id, const DefaultProps& defaults);

}  // namespace dashforge
