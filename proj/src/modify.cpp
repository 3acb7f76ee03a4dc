#include "dashforge/modify.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace dashforge {

using ordered_json = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Coordinate parse_target(const ordered_json& node, const std::string& where) {
  if (!node.is_object()) fail(Errc::BadCoordinate, where + ": position entry must be an object");
  for (const auto& [key, value] : node.items()) {
    if (key != "position" && key != "order") fail(Errc::BadCoordinate, where + ": unexpected key '" + key + "'");
  }
  const auto pos = node.find("position");
  const auto ord = node.find("order");
  if (pos == node.end() || ord == node.end()) {
    fail(Errc::BadCoordinate, where + ": needs both \"position\" and \"order\"");
  }
  const auto position = pos->is_string() ? parse_position(pos->get<std::string>()) : std::nullopt;
  if (!position) fail(Errc::BadCoordinate, where + ": position " + pos->dump() + " is not left, middle or right");
  if (!ord->is_number_integer()) fail(Errc::BadCoordinate, where + ": order " + ord->dump() + " is not 1, 2 or 3");
  const auto order = ord->get<std::int64_t>();
  if (order < 1 || order > kRowsPerColumn) {
    fail(Errc::BadCoordinate, where + ": order " + ord->dump() + " is not 1, 2 or 3");
  }
  return Coordinate(*position, static_cast<int>(order));
}

std::vector<Coordinate> parse_targets(const ordered_json& changes, const std::string& where) {
  if (changes.empty()) fail(Errc::MalformedDocument, where + ": \"changes\" must not be empty");
  std::vector<Coordinate> out;
  for (std::size_t i = 0; i < changes.size(); ++i) {
    out.push_back(parse_target(changes[i], where + ".changes[" + std::to_string(i) + "]"));
  }
  return out;
}

ChangeAction parse_change(const ordered_json& changes, const std::string& where) {
  if (changes.empty()) fail(Errc::MalformedDocument, where + ": \"changes\" must not be empty");
  ChangeAction action;
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const auto& entry = changes[i];
    if (!entry.is_object() || entry.empty()) {
      fail(Errc::MalformedDocument, where + ".changes[" + std::to_string(i) + "] must be a non-empty object");
    }
    for (const auto& [field, value] : entry.items()) {
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_number()) {
        text = value.dump();
      } else {
        fail(Errc::MalformedDocument, where + ": value for '" + field + "' must be a string");
      }
      action.changes.emplace_back(field, std::move(text));
    }
  }
  return action;
}

ordered_json target_json(const Coordinate& c) {
  ordered_json j;
  j["position"] = std::string(to_string(c.position()));
  j["order"] = c.order();
  return j;
}

std::optional<ColumnSet> columns_for(const ApplyContext& ctx, const std::string& template_id) {
  if (!ctx.columns_of) return ColumnSet::all();
  auto cols = ctx.columns_of(template_id);
  if (!cols) fail(Errc::UnknownTemplate, "unknown template '" + template_id + "'");
  return cols;
}

void check_column(const ColumnSet& columns, const Coordinate& c, const std::string& template_id) {
  if (!columns.contains(c.position())) {
    fail(Errc::TemplateColumnMismatch,
         c.to_string() + ": template '" + template_id + "' has no " + std::string(to_string(c.position())) + " column");
  }
}

}  // namespace

std::string_view action_name(const Action& action) noexcept {
  return std::visit(overloaded{[](const ChangeAction&) { return std::string_view("change"); },
                               [](const DeleteAction&) { return std::string_view("delete"); },
                               [](const AddAction&) { return std::string_view("add"); },
                               [](const SwapAction&) { return std::string_view("swap"); }},
                    action);
}

std::vector<Coordinate> touched_coordinates(const Action& action) {
  return std::visit(overloaded{[](const ChangeAction&) { return std::vector<Coordinate>{}; },
                               [](const DeleteAction& a) { return a.targets; },
                               [](const AddAction& a) { return a.targets; },
                               [](const SwapAction& a) { return std::vector<Coordinate>{a.first, a.second}; }},
                    action);
}

ModifyScript parse_modify_script(std::string_view script_text, std::vector<std::string> files) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(script_text.begin(), script_text.end());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedDocument, std::string("modify script: ") + e.what());
  }
  if (!doc.is_array()) fail(Errc::MalformedDocument, "modify script must be a JSON list");

  ModifyScript script;
  std::size_t add_targets = 0;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& node = doc[i];
    const std::string where = "action " + std::to_string(i);
    if (!node.is_object()) fail(Errc::MalformedDocument, where + " must be an object");
    const auto option = node.find("option");
    if (option == node.end() || !option->is_string()) {
      fail(Errc::MalformedDocument, where + ": missing \"option\"");
    }
    const auto name = option->get<std::string>();
    if (name != "change" && name != "delete" && name != "add" && name != "swap") {
      fail(Errc::UnknownAction, where + ": unknown option '" + name + "'");
    }
    const auto changes = node.find("changes");
    if (changes == node.end() || !changes->is_array()) {
      fail(Errc::MalformedDocument, where + ": \"changes\" must be a list");
    }
    for (const auto& [key, value] : node.items()) {
      if (key != "option" && key != "changes") fail(Errc::MalformedDocument, where + ": unexpected key '" + key + "'");
    }

    if (name == "change") {
      script.actions.emplace_back(parse_change(*changes, where));
    } else if (name == "delete") {
      script.actions.emplace_back(DeleteAction{parse_targets(*changes, where)});
    } else if (name == "add") {
      auto targets = parse_targets(*changes, where);
      add_targets += targets.size();
      script.actions.emplace_back(AddAction{std::move(targets)});
    } else {
      if (changes->size() != 2) {
        fail(Errc::BadSwapArity, where + ": swap needs exactly 2 positions, got " + std::to_string(changes->size()));
      }
      script.actions.emplace_back(SwapAction{parse_target((*changes)[0], where + ".changes[0]"),
                                             parse_target((*changes)[1], where + ".changes[1]")});
    }
  }

  for (const auto& file : files) {
    const auto kind = kind_for_filename(file);
    if (!kind || *kind == ComponentKind::metrics) {
      fail(Errc::UnknownKind, "new file '" + file + "' is neither a chart (.html) nor a table (.csv)");
    }
    check_component_path(*kind, file);
  }
  if (add_targets != files.size()) {
    fail(Errc::FileCountMismatch, std::to_string(add_targets) + " add positions but " +
                                      std::to_string(files.size()) + " new files");
  }
  script.new_files = std::move(files);
  return script;
}

std::string serialize_actions(const std::vector<Action>& actions) {
  ordered_json doc = ordered_json::array();
  for (const auto& action : actions) {
    ordered_json node;
    node["option"] = std::string(action_name(action));
    ordered_json changes = ordered_json::array();
    if (const auto* change = std::get_if<ChangeAction>(&action)) {
      for (const auto& [field, value] : change->changes) changes.push_back(ordered_json{{field, value}});
    } else {
      for (const auto& c : touched_coordinates(action)) changes.push_back(target_json(c));
    }
    node["changes"] = std::move(changes);
    doc.push_back(std::move(node));
  }
  return doc.dump(2, ' ', false);
}

DashboardConfig apply_action(const DashboardConfig& config, const Action& action, FileQueue& pending,
                             const ApplyContext& ctx) {
  DashboardConfig next = config;
  const ColumnSet columns = *columns_for(ctx, config.template_id);

  std::visit(
      overloaded{
          [&](const ChangeAction& a) {
            for (const auto& [field, value] : a.changes) {
              if (field == "title" || field == "footnote") {
                if (!is_valid_utf8(value)) fail(Errc::SchemaViolation, field + " is not valid UTF-8");
                (field == "title" ? next.title : next.footnote) = value;
              } else if (field == "font_color") {
                if (!is_valid_color(value)) fail(Errc::SchemaViolation, "'" + value + "' is not a color");
                next.font_color = value;
              } else if (field == "template_id") {
                const ColumnSet target = *columns_for(ctx, value);
                for (const auto& [coord, ref] : next.placements) check_column(target, coord, value);
                next.template_id = value;
              } else {
                fail(Errc::UnknownChangeField, "'" + field + "' is not a changeable field");
              }
            }
          },
          [&](const DeleteAction& a) {
            for (const auto& target : a.targets) {
              check_column(columns, target, next.template_id);
              if (next.placements.erase(target) == 0) {
                fail(Errc::DeleteEmptySlot, "nothing to delete at " + target.to_string());
              }
            }
          },
          [&](const AddAction& a) {
            for (const auto& target : a.targets) {
              check_column(columns, target, next.template_id);
              if (pending.empty()) fail(Errc::QueueExhausted, "no new file left for " + target.to_string());
              std::string file = std::move(pending.front());
              pending.pop_front();
              const auto kind = kind_for_filename(file);
              if (!kind || *kind == ComponentKind::metrics) {
                fail(Errc::UnknownKind, "'" + file + "' cannot be added as a chart or table");
              }
              next.placements.insert_or_assign(target, ComponentRef::make(*kind, std::move(file)));
            }
          },
          [&](const SwapAction& a) {
            check_column(columns, a.first, next.template_id);
            check_column(columns, a.second, next.template_id);
            const auto first = next.placements.find(a.first);
            const auto second = next.placements.find(a.second);
            if (first == next.placements.end() || second == next.placements.end()) {
              const auto& empty = first == next.placements.end() ? a.first : a.second;
              fail(Errc::SwapEmptySlot, "cannot swap: " + empty.to_string() + " is empty");
            }
            std::swap(first->second, second->second);
          },
      },
      action);
  return next;
}

ApplyResult apply_script(const DashboardConfig& config, const ModifyScript& script, const ApplyContext& ctx) {
  FileQueue pending(script.new_files.begin(), script.new_files.end());
  DashboardConfig current = config;
  for (std::size_t i = 0; i < script.actions.size(); ++i) {
    try {
      current = apply_action(current, script.actions[i], pending, ctx);
    } catch (const Error& e) {
      return ApplyResult{config, e.with_action_index(i)};
    }
  }
  return ApplyResult{std::move(current), std::nullopt};
}

DashboardConfig apply_script_or_throw(const DashboardConfig& config, const ModifyScript& script,
                                      const ApplyContext& ctx) {
  auto result = apply_script(config, script, ctx);
  if (result.error) throw *result.error;
  return std::move(result.config);
}

}  // namespace dashforge
