#include "dashforge/irgen.hpp"

#include <algorithm>

namespace dashforge {

namespace {

int kind_rank(ComponentKind k) {
  switch (k) {
    case ComponentKind::metrics: return 0;
    case ComponentKind::chart: return 1;
    case ComponentKind::table: return 2;
  }
  return 3;
}

}  // namespace

DefaultProps resolve_defaults(DefaultProps props, const BaseTemplate& tpl) {
  if (props.title.empty()) props.title = std::string(kDefaultTitle);
  if (props.font_color.empty()) props.font_color = std::string(kDefaultFontColor);
  if (!is_valid_color(props.font_color)) {
    fail(Errc::SchemaViolation, "font color '" + props.font_color + "' is not a color");
  }
  if (props.footnote.empty() && !tpl.is_optional(slot::kFootnote)) {
    fail(Errc::ConstraintViolation, "template '" + tpl.id + "' requires a footnote");
  }
  for (const auto* text : {&props.title, &props.footnote}) {
    if (!is_valid_utf8(*text)) fail(Errc::SchemaViolation, "default text is not valid UTF-8");
  }
  return props;
}

std::vector<Coordinate> fill_order(const ColumnSet& columns) {
  std::vector<Coordinate> out;
  for (Position p : columns.positions()) {
    for (int order = 1; order <= kRowsPerColumn; ++order) out.emplace_back(p, order);
  }
  return out;
}

std::vector<ComponentRef> components_of(const ArtifactSet& artifacts) {
  std::vector<ComponentRef> out;
  out.reserve(artifacts.component_count());
  for (const auto& g : artifacts.metrics) out.push_back(ComponentRef::make(ComponentKind::metrics, g.file));
  for (const auto& c : artifacts.charts) out.push_back(ComponentRef::make(ComponentKind::chart, c.file));
  for (const auto& t : artifacts.tables) out.push_back(ComponentRef::make(ComponentKind::table, t.file));
  return out;
}

std::vector<std::pair<Coordinate, ComponentRef>> assign_layout(std::vector<ComponentRef> components,
                                                               const ColumnSet& columns) {
  const auto cells = fill_order(columns);
  if (components.size() > cells.size()) {
    fail(Errc::CapacityExceeded, std::to_string(components.size()) + " components exceed the template's " +
                                     std::to_string(cells.size()) + " cells");
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const ComponentRef& a, const ComponentRef& b) { return kind_rank(a.kind) < kind_rank(b.kind); });
  std::vector<std::pair<Coordinate, ComponentRef>> out;
  out.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) out.emplace_back(cells[i], std::move(components[i]));
  return out;
}

std::vector<std::pair<Coordinate, ComponentRef>> assign_layout(const ArtifactSet& artifacts,
                                                               const BaseTemplate& tpl) {
  return assign_layout(components_of(artifacts), tpl.columns);
}

DashboardConfig generate_config(const std::vector<ComponentRef>& components, const BaseTemplate& tpl,
                                const DefaultProps& defaults) {
  if (components.empty()) fail(Errc::EmptyArtifactSet, "no components to place");
  const DefaultProps props = resolve_defaults(defaults, tpl);

  DashboardConfig config;
  config.template_id = tpl.id;
  config.title = props.title;
  config.footnote = props.footnote;
  config.font_color = props.font_color;
  for (auto& [coord, ref] : assign_layout(components, tpl.columns)) config.placements.emplace(coord, ref);
  return config;
}

DashboardConfig generate_config(const ArtifactSet& artifacts, const BaseTemplate& tpl,
                                const DefaultProps& defaults) {
  if (artifacts.empty()) fail(Errc::EmptyArtifactSet, "artifact set is empty");
  return generate_config(components_of(artifacts), tpl, defaults);
}

DashboardConfig generate_config(const ArtifactSet& artifacts, const TemplateRegistry& registry,
                                std::string_view template_id, const DefaultProps& defaults) {
  return generate_config(artifacts, registry.load(template_id), defaults);
}

}  // namespace dashforge
