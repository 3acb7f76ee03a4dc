#include "dashforge/pipeline.hpp"

#include <fstream>
#include <unistd.h>

namespace dashforge {

namespace fs = std::filesystem;

StageError::StageError(std::string stage, Error cause)
    : std::runtime_error(stage + ": " + cause.what()), stage_(std::move(stage)), cause_(std::move(cause)) {}

int StageError::exit_code() const noexcept { return cause_.code() == Errc::Io ? 2 : 1; }

namespace {

template <typename F>
auto stage(const char* label, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError(label, e);
  }
}

LoadOptions load_options(const Workspace& ws, std::vector<std::string>& warnings) {
  return LoadOptions{ws.strict, &warnings};
}

TableSchema schema_for(const fs::path& table_path, std::vector<std::string>& warnings) {
  return stage("load:table", [&] {
    if (!fs::is_regular_file(table_path)) fail(Errc::Io, "table not found: " + table_path.string());
    // The user's table is raw input, so the artifact size rules never apply.
    const auto table = parse_table(read_file(table_path), table_path.filename().string(),
                                   LoadOptions{false, &warnings});
    return infer_schema(table);
  });
}

fs::path temp_sibling(const fs::path& path) {
  return path.parent_path() / (path.filename().string() + ".tmp-" + std::to_string(::getpid()));
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) fail(Errc::Io, "short write to " + path.string());
}

void rename_into_place(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::rename(from, to, ec);
  if (ec) {
    fs::remove(from, ec);
    fail(Errc::Io, "cannot replace " + to.string() + ": " + ec.message());
  }
}

}  // namespace

ApplyContext registry_context(const TemplateRegistry& registry) {
  return ApplyContext{[&registry](const std::string& id) -> std::optional<ColumnSet> {
    if (!registry.contains(id)) return std::nullopt;
    return registry.load(id).columns;
  }};
}

GenerateResult run_generate(const Workspace& ws, const GenerateRequest& req, Provider& provider) {
  GenerateResult result;
  const TableSchema schema = schema_for(req.table, result.warnings);
  const TemplateRegistry registry(ws.templates);
  const BaseTemplate tpl = stage("load:template", [&] { return registry.load(req.template_id); });

  const std::string prompt = expand_generation_prompt(req.prompt, schema);
  result.response = stage("provider", [&] { return provider.complete(prompt); });
  result.files = stage("extract", [&] { return extract_result_files(result.response); });

  result.config = stage("irgen", [&] {
    std::vector<ComponentRef> components;
    for (const auto& f : result.files) components.push_back(ComponentRef::from_path(f));
    return generate_config(components, tpl, req.defaults);
  });
  const auto opts = load_options(ws, result.warnings);
  const ArtifactSet artifacts = stage("load:artifacts", [&] { return load_referenced(ws.artifact_dir, result.config, opts); });
  result.render = stage("compile", [&] { return compile(result.config, artifacts, tpl); });
  result.gor = stage("gor", [&] { return gor(result.response, result.render.html); });
  return result;
}

ModifyResult run_modify(const Workspace& ws, const ModifyRequest& req, Provider& provider) {
  ModifyResult result;
  const TableSchema schema = schema_for(req.table, result.warnings);
  const TemplateRegistry registry(ws.templates);

  const std::string prompt = expand_modification_prompt(req.prompt, schema, req.config);
  result.response = stage("provider", [&] { return provider.complete(prompt); });
  const auto extracted = stage("extract", [&] { return extract_modify_script(result.response); });
  result.script = stage("parse:script", [&] { return parse_modify_script(extracted.script_json, extracted.files); });
  result.config = stage("apply", [&] { return apply_script_or_throw(req.config, result.script, registry_context(registry)); });
  result.render = run_render(ws, result.config, &result.warnings);
  result.gor = stage("gor", [&] { return gor(result.response, result.render.html); });
  return result;
}

RenderOutput run_render(const Workspace& ws, const DashboardConfig& config, std::vector<std::string>* warnings) {
  std::vector<std::string> sink;
  auto& w = warnings ? *warnings : sink;
  const TemplateRegistry registry(ws.templates);
  const BaseTemplate tpl = stage("load:template", [&] { return registry.load(config.template_id); });
  const auto opts = load_options(ws, w);
  const ArtifactSet artifacts = stage("load:artifacts", [&] { return load_referenced(ws.artifact_dir, config, opts); });
  return stage("compile", [&] { return compile(config, artifacts, tpl); });
}

std::vector<Violation> run_validate(const Workspace& ws, std::string_view config_bytes) {
  std::vector<Violation> violations;
  const auto config = inspect_config(config_bytes, violations);
  if (!config) return violations;

  const TemplateRegistry registry(ws.templates);
  if (!registry.contains(config->template_id)) {
    violations.push_back({Errc::UnknownTemplate, "unknown template '" + config->template_id + "'", {}, {}});
  } else {
    try {
      auto bad = check_columns(*config, registry.load(config->template_id).columns);
      violations.insert(violations.end(), bad.begin(), bad.end());
    } catch (const Error& e) {
      violations.push_back({e.code(), e.message(), {}, {}});
    }
  }
  for (const auto& [coord, ref] : config->placements) {
    std::error_code ec;
    if (!fs::is_regular_file(ws.artifact_dir / ref.path, ec)) {
      violations.push_back({Errc::DanglingRef, coord.to_string() + " references missing " + ref.path, coord, ref.path});
      continue;
    }
    try {
      std::vector<std::string> ignored;
      load_artifacts(ws.artifact_dir, {ref.path}, LoadOptions{ws.strict, &ignored});
    } catch (const Error& e) {
      violations.push_back({e.code(), e.message(), coord, ref.path});
    }
  }
  return violations;
}

void write_atomic(const fs::path& path, std::string_view bytes) {
  const auto tmp = temp_sibling(path);
  write_file(tmp, bytes);
  rename_into_place(tmp, path);
}

void write_outputs_atomic(const fs::path& config_path, std::string_view config_bytes, const fs::path& html_path,
                          std::string_view html) {
  const auto config_tmp = temp_sibling(config_path);
  const auto html_tmp = temp_sibling(html_path);
  try {
    write_file(config_tmp, config_bytes);
    write_file(html_tmp, html);
  } catch (...) {
    std::error_code ec;
    fs::remove(config_tmp, ec);
    fs::remove(html_tmp, ec);
    throw;
  }
  rename_into_place(html_tmp, html_path);
  rename_into_place(config_tmp, config_path);
}

}  // namespace dashforge
