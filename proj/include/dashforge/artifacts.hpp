#pragma once

// Loaders for the analysis outputs a dashboard is assembled from: metric
// lists (.json), tables (.csv) and standalone chart documents (.html).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dashforge/model.hpp"

namespace dashforge {

struct Metric {
  std::string indicator;
  std::string value;
  std::string unit;

  friend bool operator==(const Metric&, const Metric&) = default;
};

struct MetricGroup {
  std::string name;  // filename stem
  std::string file;  // path relative to the artifact directory
  std::vector<Metric> metrics;

  friend bool operator==(const MetricGroup&, const MetricGroup&) = default;
};

struct TableArtifact {
  std::string name;
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const TableArtifact&, const TableArtifact&) = default;
};

struct ChartArtifact {
  std::string name;
  std::string file;
  std::vector<std::string> dependencies;  // external script URLs, first occurrence order
  std::string container_id;
  std::string container_markup;
  std::string init_script;

  friend bool operator==(const ChartArtifact&, const ChartArtifact&) = default;
};

struct ArtifactSet {
  std::vector<MetricGroup> metrics;
  std::vector<ChartArtifact> charts;
  std::vector<TableArtifact> tables;

  std::size_t component_count() const noexcept {
    return metrics.size() + charts.size() + tables.size();
  }
  bool empty() const noexcept { return component_count() == 0; }

  // Lookup by artifact-relative file path; nullptr when absent.
  const MetricGroup* find_metrics(std::string_view file) const noexcept;
  const ChartArtifact* find_chart(std::string_view file) const noexcept;
  const TableArtifact* find_table(std::string_view file) const noexcept;
  bool contains(const ComponentRef& ref) const noexcept;

  // Throws SchemaViolation on a duplicate name within one kind.
  void add(MetricGroup group);
  void add(ChartArtifact chart);
  void add(TableArtifact table);
};

// Strict mode enforces the generation contract (non-empty metric groups,
// tables of at least 10 rows and 3 to 5 columns). Lenient mode reports those
// as warnings instead.
struct LoadOptions {
  bool strict = true;
  std::vector<std::string>* warnings = nullptr;
};

ComponentKind classify_artifact(std::string_view file);

MetricGroup parse_metrics(std::string_view text, std::string_view file, const LoadOptions& opts = {});
TableArtifact parse_table(std::string_view text, std::string_view file, const LoadOptions& opts = {});
ChartArtifact parse_chart(std::string_view text, std::string_view file);

// `file` is resolved against `dir`; the stored `file` field keeps the
// relative spelling.
MetricGroup load_metrics(const std::filesystem::path& dir, std::string_view file,
                         const LoadOptions& opts = {});
TableArtifact load_table(const std::filesystem::path& dir, std::string_view file,
                         const LoadOptions& opts = {});
ChartArtifact load_chart(const std::filesystem::path& dir, std::string_view file);

// Loads `files` in order, dispatching on extension. Duplicates are loaded once.
ArtifactSet load_artifacts(const std::filesystem::path& dir, const std::vector<std::string>& files,
                           const LoadOptions& opts = {});

// Loads every component referenced by a config. Files missing on disk are
// skipped so that compile can report them as dangling references.
ArtifactSet load_referenced(const std::filesystem::path& dir, const DashboardConfig& config,
                            const LoadOptions& opts = {});

// RFC 4180 reader: comma separator, double-quote quoting, CRLF or LF.
// Throws MalformedCsv on an unterminated quote or stray quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Reads a whole file; throws Io.
std::string read_file(const std::filesystem::path& path);

}  // namespace dashforge
