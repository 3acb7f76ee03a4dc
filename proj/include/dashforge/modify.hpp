#pragma once

// Modify scripts: the ordered edit program an LLM emits for a dashboard
// change request, and the operator that applies it to a config.
//
// Script grammar (JSON list, one object per action):
//   {"option": "change", "changes": [{"title": "..."}, {"footnote": "..."}]}
//   {"option": "delete", "changes": [{"position": "right", "order": 2}]}
//   {"option": "add",    "changes": [{"position": "right", "order": 1}, ...]}
//   {"option": "swap",   "changes": [<coordinate>, <coordinate>]}
// Add targets consume the new-file list in order.

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dashforge/model.hpp"

namespace dashforge {

// Config fields a change action may rewrite.
inline constexpr std::string_view kChangeableFields[] = {"title", "footnote", "font_color", "template_id"};

struct ChangeAction {
  std::vector<std::pair<std::string, std::string>> changes;
  friend bool operator==(const ChangeAction&, const ChangeAction&) = default;
};

struct DeleteAction {
  std::vector<Coordinate> targets;
  friend bool operator==(const DeleteAction&, const DeleteAction&) = default;
};

struct AddAction {
  std::vector<Coordinate> targets;
  friend bool operator==(const AddAction&, const AddAction&) = default;
};

struct SwapAction {
  Coordinate first;
  Coordinate second;
  friend bool operator==(const SwapAction&, const SwapAction&) = default;
};

using Action = std::variant<ChangeAction, DeleteAction, AddAction, SwapAction>;

std::string_view action_name(const Action& action) noexcept;

// Coordinates an action touches (empty for change).
std::vector<Coordinate> touched_coordinates(const Action& action);

struct ModifyScript {
  std::vector<Action> actions;
  std::vector<std::string> new_files;

  friend bool operator==(const ModifyScript&, const ModifyScript&) = default;
};

using FileQueue = std::deque<std::string>;

// Resolves template ids to their column layout during application. Without
// one, every column is accepted and template_id changes are not checked.
struct ApplyContext {
  std::function<std::optional<ColumnSet>(const std::string& template_id)> columns_of;
};

// Throws MalformedDocument, UnknownAction, BadSwapArity, BadCoordinate,
// FileCountMismatch, UnknownKind.
ModifyScript parse_modify_script(std::string_view script_text, std::vector<std::string> files);

// Canonical JSON text of a script's action list.
std::string serialize_actions(const std::vector<Action>& actions);

// Throws SwapEmptySlot, DeleteEmptySlot, UnknownChangeField, QueueExhausted,
// TemplateColumnMismatch, UnknownTemplate, UnknownKind, SchemaViolation.
DashboardConfig apply_action(const DashboardConfig& config, const Action& action, FileQueue& pending,
                             const ApplyContext& ctx = {});

struct ApplyResult {
  DashboardConfig config;      // final config, or the untouched input on failure
  std::optional<Error> error;  // carries the failing action index

  bool ok() const noexcept { return !error.has_value(); }
};

// All-or-nothing: either every action applies or the input is returned.
ApplyResult apply_script(const DashboardConfig& config, const ModifyScript& script, const ApplyContext& ctx = {});

// Same, but rethrows the annotated error.
DashboardConfig apply_script_or_throw(const DashboardConfig& config, const ModifyScript& script,
                                      const ApplyContext& ctx = {});

}  // namespace dashforge
