#include "dashforge/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dashforge/pipeline.hpp"

#ifndef DASHFORGE_DEFAULT_TEMPLATES
#define DASHFORGE_DEFAULT_TEMPLATES "templates"
#endif

namespace dashforge {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct ProviderFlags {
  std::string transcript;
  std::string url;
  std::string model = "qwen3-max";
  std::string record;
};

struct CommonFlags {
  std::string artifact_dir;
  std::string templates;
  bool strict = false;
  std::string out;
};

// Usage problems detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_templates() {
  if (const char* env = std::getenv("DASHFORGE_TEMPLATES"); env && *env) return env;
  return DASHFORGE_DEFAULT_TEMPLATES;
}

Workspace workspace(const CommonFlags& flags, const fs::path& fallback_artifacts) {
  Workspace ws;
  ws.artifact_dir = flags.artifact_dir.empty() ? fallback_artifacts : fs::path(flags.artifact_dir);
  ws.templates = flags.templates.empty() ? default_templates() : fs::path(flags.templates);
  ws.strict = flags.strict;
  return ws;
}

std::unique_ptr<Provider> make_provider(const ProviderFlags& flags) {
  if (!flags.transcript.empty() && !flags.url.empty()) {
    throw UsageError("pass either --transcript or --provider-url, not both");
  }
  if (!flags.transcript.empty()) {
    try {
      return std::make_unique<ScriptedProvider>(ScriptedProvider::from_file(flags.transcript));
    } catch (const Error& e) {
      throw StageError("load:transcript", e);
    }
  }
  if (!flags.url.empty()) {
    HttpProviderOptions opts;
    opts.base_url = flags.url;
    opts.model = flags.model;
    if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str())) opts.api_key = key;
    return std::make_unique<HttpProvider>(std::move(opts));
  }
  throw UsageError("no provider configured: pass --transcript or --provider-url");
}

// "reports/q3.dbconfig.json" -> "reports/q3"
fs::path base_of_config(const fs::path& config) {
  const std::string name = config.filename().string();
  if (name.size() > kConfigExtension.size() &&
      name.compare(name.size() - kConfigExtension.size(), kConfigExtension.size(), kConfigExtension) == 0) {
    return config.parent_path() / name.substr(0, name.size() - kConfigExtension.size());
  }
  return config.parent_path() / config.stem();
}

fs::path with_suffix(const fs::path& base, std::string_view suffix) {
  return base.parent_path() / (base.filename().string() + std::string(suffix));
}

DashboardConfig load_config(const fs::path& path) {
  const auto bytes = [&] {
    try {
      return read_file(path);
    } catch (const Error& e) {
      throw StageError("load:config", e);
    }
  }();
  try {
    return deserialize_config(bytes);
  } catch (const Error& e) {
    throw StageError("load:config", e);
  }
}

json gor_json(const GorReport& r) { return json::parse(r.to_json()); }

json violation_json(const Violation& v) {
  json j;
  j["code"] = std::string(errc_name(v.code));
  j["message"] = v.message;
  j["coordinate"] = v.coordinate ? json(v.coordinate->to_string()) : json(nullptr);
  j["path"] = v.path ? json(*v.path) : json(nullptr);
  return j;
}

void save_record(const ProviderFlags& flags, const Session& session) {
  if (flags.record.empty()) return;
  try {
    session.save_transcript(flags.record);
  } catch (const Error& e) {
    throw StageError("record", e);
  }
}

// Provider wrapper routing calls through a recording session.
class SessionProvider final : public Provider {
 public:
  explicit SessionProvider(Session& s, std::string id) : session_(s), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  std::string complete(std::string_view prompt) override { return session_.complete(prompt); }

 private:
  Session& session_;
  std::string id_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dashforge: build and edit dashboards from a config IR"};
  app.require_subcommand(1);

  CommonFlags common;
  ProviderFlags provider_flags;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--artifact-dir", common.artifact_dir, "Directory holding chart/table/metric files");
    cmd->add_option("--templates", common.templates, "Template registry directory");
    cmd->add_flag("--strict", common.strict, "Enforce artifact size rules instead of warning");
    cmd->add_option("--out", common.out, "Output base path (writes <out>.dbconfig.json and <out>.html)");
  };
  const auto add_provider = [&](CLI::App* cmd) {
    cmd->add_option("--transcript", provider_flags.transcript, "Replay responses from a transcript file");
    cmd->add_option("--provider-url", provider_flags.url, "Chat-completion endpoint base URL");
    cmd->add_option("--model", provider_flags.model, "Model name sent to the endpoint");
    cmd->add_option("--record", provider_flags.record, "Save the exchanged prompts/responses as a transcript");
  };

  std::string table, prompt, template_id = "dark", config_path, llm_output, dashboard_path, prompt_kind;
  DefaultProps defaults;

  auto* generate = app.add_subcommand("generate", "Generate a dashboard from a table and a request");
  generate->add_option("--table", table, "Input table (.csv)")->required();
  generate->add_option("--prompt", prompt, "User request")->required();
  generate->add_option("--template", template_id, "Base template id");
  generate->add_option("--title", defaults.title, "Dashboard title");
  generate->add_option("--footnote", defaults.footnote, "Dashboard footnote");
  generate->add_option("--font-color", defaults.font_color, "Font color");
  add_common(generate);
  add_provider(generate);

  auto* modify = app.add_subcommand("modify", "Apply a change request to an existing dashboard");
  modify->add_option("--config", config_path, "Dashboard config (.dbconfig.json)")->required();
  modify->add_option("--table", table, "Input table (.csv)")->required();
  modify->add_option("--prompt", prompt, "Change request")->required();
  add_common(modify);
  add_provider(modify);

  auto* render = app.add_subcommand("render", "Compile a config into dashboard HTML");
  render->add_option("--config", config_path, "Dashboard config")->required();
  add_common(render);

  auto* validate = app.add_subcommand("validate", "Check a config against its template and artifacts");
  validate->add_option("--config", config_path, "Dashboard config")->required();
  add_common(validate);

  auto* gor_cmd = app.add_subcommand("gor", "Generative overhead ratio of a model output vs. a dashboard");
  gor_cmd->add_option("--llm-output", llm_output, "File holding the model output")->required();
  gor_cmd->add_option("--dashboard", dashboard_path, "Dashboard HTML file")->required();

  auto* prompt_cmd = app.add_subcommand("prompt", "Print an expanded prompt");
  prompt_cmd->add_option("kind", prompt_kind, "intent | generation | modification")
      ->required()
      ->check(CLI::IsMember({"intent", "generation", "modification"}));
  prompt_cmd->add_option("--prompt", prompt, "User request")->required();
  prompt_cmd->add_option("--table", table, "Input table (.csv)");
  prompt_cmd->add_option("--config", config_path, "Prior config (modification)");

  auto* intent_cmd = app.add_subcommand("intent", "Classify a request as generation or modify");
  intent_cmd->add_option("--prompt", prompt, "User request")->required();
  add_provider(intent_cmd);

  std::vector<const char*> argv{"dashforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  json report;
  report["ok"] = true;
  try {
    if (generate->parsed()) {
      report["command"] = "generate";
      auto base_provider = make_provider(provider_flags);
      Session session(*base_provider);
      SessionProvider provider(session, base_provider->id());
      GenerateRequest req{table, prompt, template_id, defaults};
      const auto ws = workspace(common, fs::current_path());
      const auto result = run_generate(ws, req, provider);
      save_record(provider_flags, session);
      const fs::path base = common.out.empty() ? fs::path("dashboard") : fs::path(common.out);
      const auto cfg_path = with_suffix(base, kConfigExtension);
      const auto html_path = with_suffix(base, ".html");
      try {
        write_outputs_atomic(cfg_path, serialize_config(result.config), html_path, result.render.html);
      } catch (const Error& e) {
        throw StageError("write", e);
      }
      report["config"] = cfg_path.string();
      report["dashboard"] = html_path.string();
      report["files"] = result.files;
      report["placements"] = result.config.placements.size();
      report["gor"] = gor_json(result.gor);
      report["warnings"] = result.warnings;
      err << "generated " << html_path.string() << " (" << result.config.placements.size() << " components, GOR "
          << result.gor.ratio() << ")\n";
    } else if (modify->parsed()) {
      report["command"] = "modify";
      const fs::path cfg_in = config_path;
      auto config = load_config(cfg_in);
      auto base_provider = make_provider(provider_flags);
      Session session(*base_provider);
      SessionProvider provider(session, base_provider->id());
      const auto ws = workspace(common, cfg_in.parent_path().empty() ? fs::path(".") : cfg_in.parent_path());
      const auto result = run_modify(ws, ModifyRequest{std::move(config), table, prompt}, provider);
      save_record(provider_flags, session);
      const fs::path base = common.out.empty() ? base_of_config(cfg_in) : fs::path(common.out);
      const auto cfg_path = common.out.empty() ? cfg_in : with_suffix(base, kConfigExtension);
      const auto html_path = with_suffix(base, ".html");
      try {
        write_outputs_atomic(cfg_path, serialize_config(result.config), html_path, result.render.html);
      } catch (const Error& e) {
        throw StageError("write", e);
      }
      report["config"] = cfg_path.string();
      report["dashboard"] = html_path.string();
      report["actions"] = result.script.actions.size();
      report["new_files"] = result.script.new_files;
      report["gor"] = gor_json(result.gor);
      report["warnings"] = result.warnings;
      err << "applied " << result.script.actions.size() << " action(s); wrote " << html_path.string() << "\n";
    } else if (render->parsed()) {
      report["command"] = "render";
      const fs::path cfg_in = config_path;
      const auto config = load_config(cfg_in);
      const auto ws = workspace(common, cfg_in.parent_path().empty() ? fs::path(".") : cfg_in.parent_path());
      std::vector<std::string> warnings;
      const auto output = run_render(ws, config, &warnings);
      const fs::path base = common.out.empty() ? base_of_config(cfg_in) : fs::path(common.out);
      const auto html_path = with_suffix(base, ".html");
      try {
        write_atomic(html_path, output.html);
      } catch (const Error& e) {
        throw StageError("write", e);
      }
      report["dashboard"] = html_path.string();
      report["bytes"] = output.html.size();
      json manifest = json::array();
      for (const auto& m : output.manifest) {
        manifest.push_back(json{{"coordinate", m.coordinate.to_string()},
                                {"kind", std::string(to_string(m.ref.kind))},
                                {"path", m.ref.path},
                                {"fragment_bytes", m.fragment_bytes}});
      }
      report["manifest"] = std::move(manifest);
      report["warnings"] = warnings;
      err << "rendered " << html_path.string() << "\n";
    } else if (validate->parsed()) {
      report["command"] = "validate";
      const fs::path cfg_in = config_path;
      const auto bytes = [&] {
        try {
          return read_file(cfg_in);
        } catch (const Error& e) {
          throw StageError("load:config", e);
        }
      }();
      const auto ws = workspace(common, cfg_in.parent_path().empty() ? fs::path(".") : cfg_in.parent_path());
      const auto violations = run_validate(ws, bytes);
      json list = json::array();
      for (const auto& v : violations) list.push_back(violation_json(v));
      report["ok"] = violations.empty();
      report["violations"] = std::move(list);
      out << report.dump(2, ' ', false) << "\n";
      err << (violations.empty() ? "config is valid" : std::to_string(violations.size()) + " violation(s)") << "\n";
      for (const auto& v : violations) err << "  " << errc_name(v.code) << ": " << v.message << "\n";
      return violations.empty() ? 0 : 1;
    } else if (gor_cmd->parsed()) {
      const auto read = [](const std::string& p) {
        try {
          return read_file(p);
        } catch (const Error& e) {
          throw StageError("load", e);
        }
      };
      const auto llm = read(llm_output);
      const auto db = read(dashboard_path);
      GorReport r;
      try {
        r = gor(llm, db);
      } catch (const Error& e) {
        throw StageError("gor", e);
      }
      out << r.to_json() << "\n";
      err << "GOR " << r.ratio() << " (" << r.tokens_llm << " / " << r.tokens_db << " tokens)\n";
      return 0;
    } else if (prompt_cmd->parsed()) {
      if (prompt_kind == "intent") {
        out << expand_intent_prompt(prompt);
        return 0;
      }
      if (table.empty()) throw UsageError("--table is required for " + prompt_kind + " prompts");
      std::vector<std::string> warnings;
      const auto schema = [&] {
        try {
          const fs::path tp = table;
          return infer_schema(parse_table(read_file(tp), tp.filename().string(), LoadOptions{false, &warnings}));
        } catch (const Error& e) {
          throw StageError("load:table", e);
        }
      }();
      if (prompt_kind == "generation") {
        out << expand_generation_prompt(prompt, schema);
      } else {
        if (config_path.empty()) throw UsageError("--config is required for modification prompts");
        out << expand_modification_prompt(prompt, schema, load_config(config_path));
      }
      return 0;
    } else if (intent_cmd->parsed()) {
      report["command"] = "intent";
      auto provider = make_provider(provider_flags);
      Session session(*provider);
      const auto response = [&] {
        try {
          return session.complete(expand_intent_prompt(prompt));
        } catch (const Error& e) {
          throw StageError("provider", e);
        }
      }();
      save_record(provider_flags, session);
      try {
        report["intent"] = std::string(to_string(detect_intent(response)));
      } catch (const Error& e) {
        throw StageError("extract", e);
      }
      err << "intent: " << report["intent"].get<std::string>() << "\n";
    }
  } catch (const UsageError& e) {
    json failure{{"ok", false}, {"stage", "usage"}, {"error", "Usage"}, {"message", e.what()}};
    out << failure.dump(2) << "\n";
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const StageError& e) {
    json failure;
    failure["ok"] = false;
    failure["stage"] = e.stage();
    failure["error"] = std::string(errc_name(e.cause().code()));
    failure["message"] = e.cause().message();
    if (auto idx = e.cause().action_index()) failure["action_index"] = *idx;
    out << failure.dump(2, ' ', false, json::error_handler_t::replace) << "\n";
    err << "error [" << e.stage() << "]: " << e.cause().what() << "\n";
    return e.exit_code();
  } catch (const Error& e) {
    json failure{{"ok", false}, {"stage", "internal"}, {"error", std::string(errc_name(e.code()))}, {"message", e.message()}};
    out << failure.dump(2, ' ', false, json::error_handler_t::replace) << "\n";
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::Io ? 2 : 1;
  }
  out << report.dump(2, ' ', false, json::error_handler_t::replace) << "\n";
  return 0;
}

}  // namespace dashforge
