#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dashforge/cli.hpp"
#include "dashforge/pipeline.hpp"

namespace py = pybind11;
using namespace dashforge;

namespace {

DashboardConfig parse(const std::string& config_json) { return deserialize_config(config_json); }

py::dict gor_dict(const GorReport& r) {
  py::dict d;
  d["tokens_llm"] = r.tokens_llm;
  d["tokens_db"] = r.tokens_db;
  d["ratio"] = r.ratio();
  d["tokenizer_id"] = r.tokenizer_id;
  d["caveat"] = std::string(kGorCaveat);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dashforge native core";

  static py::handle exc = py::exception<Error>(m, "DashforgeError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const StageError& e) {
      py::object err = exc(py::str(e.what()));
      py::setattr(err, "code", py::str(std::string(errc_name(e.cause().code()))));
      py::setattr(err, "stage", py::str(e.stage()));
      PyErr_SetObject(exc.ptr(), err.ptr());
    } catch (const Error& e) {
      py::object err = exc(py::str(e.what()));
      py::setattr(err, "code", py::str(std::string(errc_name(e.code()))));
      py::setattr(err, "stage", py::none());
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  m.def("default_templates", [] { return std::string(DASHFORGE_DEFAULT_TEMPLATES); });

  m.def("canonicalize", [](const std::string& config_json) { return serialize_config(parse(config_json)); },
        "Parse and re-serialize a config in canonical form.");

  m.def(
      "validate",
      [](const std::string& config_json, const std::filesystem::path& artifact_dir,
         const std::filesystem::path& templates) {
        py::list out;
        for (const auto& v : run_validate(Workspace{artifact_dir, templates, false}, config_json)) {
          py::dict d;
          d["code"] = std::string(errc_name(v.code));
          d["message"] = v.message;
          d["coordinate"] = v.coordinate ? py::object(py::str(v.coordinate->to_string())) : py::object(py::none());
          d["path"] = v.path ? py::object(py::str(*v.path)) : py::object(py::none());
          out.append(d);
        }
        return out;
      },
      py::arg("config_json"), py::arg("artifact_dir"), py::arg("templates"));

  m.def(
      "generate_config",
      [](const std::vector<std::string>& files, const std::string& template_id, const std::filesystem::path& templates,
         const std::string& title, const std::string& footnote, const std::string& font_color) {
        std::vector<ComponentRef> refs;
        for (const auto& f : files) refs.push_back(ComponentRef::from_path(f));
        const TemplateRegistry registry(templates);
        return serialize_config(generate_config(refs, registry.load(template_id), {title, footnote, font_color}));
      },
      py::arg("files"), py::arg("template_id"), py::arg("templates"), py::arg("title") = "",
      py::arg("footnote") = "", py::arg("font_color") = "");

  m.def(
      "apply_script",
      [](const std::string& config_json, const std::string& script_json, const std::vector<std::string>& files,
         const std::filesystem::path& templates) {
        const TemplateRegistry registry(templates);
        const auto script = parse_modify_script(script_json, files);
        return serialize_config(apply_script_or_throw(parse(config_json), script, registry_context(registry)));
      },
      py::arg("config_json"), py::arg("script_json"), py::arg("files") = std::vector<std::string>{},
      py::arg("templates"));

  m.def(
      "render",
      [](const std::string& config_json, const std::filesystem::path& artifact_dir,
         const std::filesystem::path& templates) {
        return run_render(Workspace{artifact_dir, templates, false}, parse(config_json)).html;
      },
      py::arg("config_json"), py::arg("artifact_dir"), py::arg("templates"));

  m.def(
      "gor", [](const std::string& llm, const std::string& html) { return gor_dict(gor(llm, html)); },
      py::arg("llm_output"), py::arg("dashboard_html"));
  m.def("count_tokens", [](const std::string& text) { return count_tokens(text); });

  m.def("detect_intent", [](const std::string& response) { return std::string(to_string(detect_intent(response))); });
  m.def("extract_result_files", &extract_result_files);
  m.def("extract_modify_script", [](const std::string& response) {
    const auto s = extract_modify_script(response);
    return py::make_tuple(s.script_json, s.files);
  });

  m.def("sha256_hex", [](const std::string& data) { return sha256_hex(data); });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
