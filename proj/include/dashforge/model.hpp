#pragma once

// Dashboard config (the IR): the layout coordinate system, component
// references and the canonical on-disk form.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dashforge/error.hpp"

namespace dashforge {

inline constexpr std::string_view kSchemaVersion = "1";
inline constexpr std::string_view kConfigExtension = ".dbconfig.json";

enum class Position : std::uint8_t { left = 0, middle = 1, right = 2 };

inline constexpr std::array<Position, 3> kAllPositions = {Position::left, Position::middle,
                                                          Position::right};
inline constexpr int kRowsPerColumn = 3;

std::string_view to_string(Position p) noexcept;
std::optional<Position> parse_position(std::string_view text) noexcept;

// Grid cell: a column plus a 1-based row counted from the top.
class Coordinate {
 public:
  // Throws BadCoordinate when order is outside [1, 3].
  Coordinate(Position position, int order);

  Position position() const noexcept { return position_; }
  int order() const noexcept { return order_; }

  // "left/1"
  std::string to_string() const;

  // Sorts left < middle < right, then by ascending order.
  friend auto operator<=>(const Coordinate&, const Coordinate&) = default;

 private:
  Position position_;
  int order_;
};

// Set of template columns; iteration is always left, middle, right.
class ColumnSet {
 public:
  ColumnSet() = default;
  ColumnSet(std::initializer_list<Position> columns);

  static ColumnSet all() { return {Position::left, Position::middle, Position::right}; }

  void insert(Position p) noexcept { bits_ |= mask(p); }
  bool contains(Position p) const noexcept { return (bits_ & mask(p)) != 0; }
  std::size_t size() const noexcept;
  std::vector<Position> positions() const;
  std::size_t capacity() const noexcept { return size() * kRowsPerColumn; }

  friend bool operator==(const ColumnSet&, const ColumnSet&) = default;

 private:
  static constexpr std::uint8_t mask(Position p) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(p));
  }
  std::uint8_t bits_ = 0;
};

enum class ComponentKind : std::uint8_t { chart, table, metrics };

std::string_view to_string(ComponentKind k) noexcept;
std::optional<ComponentKind> parse_kind(std::string_view text) noexcept;
// ".html" -> chart, ".csv" -> table, ".json" -> metrics (case-insensitive).
std::optional<ComponentKind> kind_for_filename(std::string_view filename) noexcept;

// Throws SchemaViolation on an empty path, absolute path, ".." segment, or
// when the extension does not match `kind`.
void check_component_path(ComponentKind kind, std::string_view path);

struct ComponentRef {
  ComponentKind kind;
  std::string path;

  static ComponentRef make(ComponentKind kind, std::string path);
  // Kind inferred from the extension; throws UnknownKind.
  static ComponentRef from_path(std::string path);

  friend bool operator==(const ComponentRef&, const ComponentRef&) = default;
};

using Placements = std::map<Coordinate, ComponentRef>;

struct DashboardConfig {
  std::string version{kSchemaVersion};
  std::string template_id;
  std::string title;
  std::string footnote;
  std::string font_color{"#FFFFFF"};
  Placements placements;

  friend bool operator==(const DashboardConfig&, const DashboardConfig&) = default;
};

// Hex (#rgb, #rgba, #rrggbb, #rrggbbaa) or a CSS named color.
bool is_valid_color(std::string_view text) noexcept;
bool is_valid_utf8(std::string_view text) noexcept;

// Canonical JSON: fixed field order, placements sorted by coordinate,
// 4-space indent, non-ASCII emitted literally, trailing newline.
std::string serialize_config(const DashboardConfig& config);

// Throws MalformedDocument, SchemaViolation or VersionMismatch.
DashboardConfig deserialize_config(std::string_view bytes);

struct Violation {
  Errc code;
  std::string message;
  std::optional<Coordinate> coordinate;
  std::optional<std::string> path;
};

// Non-throwing structural check; collects every problem found instead of
// stopping at the first. Returns the config when no violation was recorded.
std::optional<DashboardConfig> inspect_config(std::string_view bytes,
                                              std::vector<Violation>& violations);

// Placements whose column is missing from `columns`.
std::vector<Violation> check_columns(const DashboardConfig& config, const ColumnSet& columns);

}  // namespace dashforge
