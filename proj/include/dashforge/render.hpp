#pragma once

// Dashboard compilation: turns a config plus its artifacts into one
// self-contained HTML document by filling the template's slots.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dashforge/artifacts.hpp"
#include "dashforge/model.hpp"
#include "dashforge/template.hpp"

namespace dashforge {

inline constexpr std::size_t kDefaultTableRowCap = 10;

using SlotValues = std::map<std::string, std::string, std::less<>>;

// Replaces every {{name}} in one pass; inserted values are never rescanned.
// Throws UnfilledSlot, and UnknownSlotValue in strict mode.
std::string fill_slots(const BaseTemplate& tpl, const SlotValues& values, bool strict);

std::string escape_html(std::string_view text);

// Stat cards, one per metric. Throws EmptyGroup.
std::string fragment_metrics(const MetricGroup& group);

// Header plus the first `row_cap` rows, cells escaped.
std::string fragment_table(const TableArtifact& table, std::size_t row_cap = kDefaultTableRowCap);

struct ChartFragment {
  std::string element_id;
  std::string container;
  std::string script;
  std::vector<std::string> dependencies;
};

// "chart-left-2"
std::string chart_element_id(const Coordinate& coordinate);

// Rewrites the chart's container id to the coordinate-derived id. Quoted and
// selector occurrences in the script get the id itself; occurrences embedded
// in identifiers (e.g. `chart_<id>`) get an underscore form so the script
// stays valid.
ChartFragment fragment_chart(const ChartArtifact& chart, const Coordinate& coordinate);

struct ManifestEntry {
  Coordinate coordinate;
  ComponentRef ref;
  std::size_t fragment_bytes;
};

struct RenderOutput {
  std::string html;
  std::vector<ManifestEntry> manifest;
};

struct CompileOptions {
  std::size_t table_row_cap = kDefaultTableRowCap;
};

// Throws DanglingRef, TemplateColumnMismatch, UnfilledSlot, IdCollision.
RenderOutput compile(const DashboardConfig& config, const ArtifactSet& artifacts, const BaseTemplate& tpl,
                     const CompileOptions& opts = {});
// Resolves config.template_id first; throws UnknownTemplate.
RenderOutput compile(const DashboardConfig& config, const ArtifactSet& artifacts,
                     const TemplateRegistry& registry, const CompileOptions& opts = {});

}  // namespace dashforge
