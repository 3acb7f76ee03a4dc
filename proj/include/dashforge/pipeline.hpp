#pragma once

// End-to-end flows behind the command line: generation, modification,
// rendering and validation, with every failure labelled by pipeline stage.

#include <filesystem>
#include <string>
#include <vector>

#include "dashforge/artifacts.hpp"
#include "dashforge/bridge.hpp"
#include "dashforge/gor.hpp"
#include "dashforge/irgen.hpp"
#include "dashforge/modify.hpp"
#include "dashforge/provider.hpp"
#include "dashforge/render.hpp"
#include "dashforge/template.hpp"

namespace dashforge {

struct Workspace {
  std::filesystem::path artifact_dir;
  std::filesystem::path templates;
  bool strict = false;
};

// A library error tagged with the stage it came from ("load:table",
// "provider", "extract", "compile", ...).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, Error cause);

  const std::string& stage() const noexcept { return stage_; }
  const Error& cause() const noexcept { return cause_; }
  // 2 for I/O and usage problems, 1 for everything else.
  int exit_code() const noexcept;

 private:
  std::string stage_;
  Error cause_;
};

struct GenerateRequest {
  std::filesystem::path table;
  std::string prompt;
  std::string template_id;
  DefaultProps defaults;
};

struct GenerateResult {
  std::string response;
  std::vector<std::string> files;
  DashboardConfig config;
  RenderOutput render;
  GorReport gor;
  std::vector<std::string> warnings;
};

GenerateResult run_generate(const Workspace& ws, const GenerateRequest& req, Provider& provider);

struct ModifyRequest {
  DashboardConfig config;
  std::filesystem::path table;
  std::string prompt;
};

struct ModifyResult {
  std::string response;
  ModifyScript script;
  DashboardConfig config;
  RenderOutput render;
  GorReport gor;
  std::vector<std::string> warnings;
};

ModifyResult run_modify(const Workspace& ws, const ModifyRequest& req, Provider& provider);

RenderOutput run_render(const Workspace& ws, const DashboardConfig& config,
                        std::vector<std::string>* warnings = nullptr);

// Structural problems, unknown template or column mismatches, dangling
// artifact paths. Empty means clean.
std::vector<Violation> run_validate(const Workspace& ws, std::string_view config_bytes);

// Apply context backed by a template registry.
ApplyContext registry_context(const TemplateRegistry& registry);

// Writes via a temporary sibling and rename. Throws Io.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);

// Writes both files only after both temporaries are complete.
void write_outputs_atomic(const std::filesystem::path& config_path, std::string_view config_bytes,
                          const std::filesystem::path& html_path, std::string_view html);

}  // namespace dashforge
