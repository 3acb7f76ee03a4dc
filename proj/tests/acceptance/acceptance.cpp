// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

#include "support.hpp"

using namespace dashforge;
using dftest::Grid;
using dftest::slurp;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

const TemplateRegistry& registry() {
  static const TemplateRegistry reg(dftest::templates_dir());
  return reg;
}

Workspace workspace() { return Workspace{dftest::data_dir(), dftest::templates_dir(), false}; }

Coordinate at(Position p, int o) { return Coordinate(p, o); }
constexpr auto L = Position::left;
constexpr auto M = Position::middle;
constexpr auto R = Position::right;

// Canonical JSON text of each placement, keyed by coordinate.
std::map<std::string, std::string> placement_bytes(const DashboardConfig& c) {
  std::map<std::string, std::string> out;
  const auto doc = json::parse(serialize_config(c));
  for (const auto& p : doc.at("placements")) {
    out[p.at("position").get<std::string>() + "/" + std::to_string(p.at("order").get<int>())] = p.dump();
  }
  return out;
}

// Coordinates whose placement bytes differ.
std::set<std::string> diff_coordinates(const DashboardConfig& a, const DashboardConfig& b) {
  const auto pa = placement_bytes(a);
  const auto pb = placement_bytes(b);
  std::set<std::string> keys;
  for (const auto& [k, v] : pa) keys.insert(k);
  for (const auto& [k, v] : pb) keys.insert(k);
  std::set<std::string> out;
  for (const auto& k : keys) {
    const auto x = pa.find(k);
    const auto y = pb.find(k);
    if (x == pa.end() || y == pb.end() || x->second != y->second) out.insert(k);
  }
  return out;
}

std::set<std::string> touched(const ModifyScript& s) {
  std::set<std::string> out;
  for (const auto& a : s.actions) {
    for (const auto& c : touched_coordinates(a)) out.insert(c.to_string());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1. Worked examples

Check worked_examples() {
  Check check;
  const auto base = dftest::full_config();
  const auto ref = [&](Position p, int o) { return base.placements.at(at(p, o)); };

  auto expect_a = base;
  expect_a.title = "2024 Financial Report";
  expect_a.footnote = "2024";
  expect_a.placements.erase(at(R, 2));

  auto expect_b = base;
  expect_b.placements.insert_or_assign(at(R, 1), ComponentRef::make(ComponentKind::chart, "new_chart.html"));
  expect_b.placements.insert_or_assign(at(R, 2), ComponentRef::make(ComponentKind::table, "new_table.csv"));
  expect_b.placements.insert_or_assign(at(M, 2), ref(L, 3));
  expect_b.placements.insert_or_assign(at(L, 3), ref(M, 2));

  auto expect_c = base;
  expect_c.placements.insert_or_assign(at(M, 2), ComponentRef::make(ComponentKind::chart, "new_chart2.html"));
  expect_c.placements.insert_or_assign(at(R, 3), ref(M, 2));

  struct Case {
    const char* name;
    const char* script;
    std::vector<std::string> files;
    DashboardConfig expected;
  };
  const std::vector<Case> cases = {{"A", dftest::kExampleA, {}, expect_a},
                                   {"B", dftest::kExampleB, dftest::kExampleBFiles, expect_b},
                                   {"C", dftest::kExampleC, dftest::kExampleCFiles, expect_c}};
  for (const auto& c : cases) {
    const auto script = parse_modify_script(c.script, c.files);
    const auto result = apply_script(base, script);
    check.expect(result.ok(), std::string("example ") + c.name + " failed: " + (result.error ? result.error->what() : ""));
    if (!result.ok()) continue;
    check.expect(serialize_config(result.config) == serialize_config(c.expected),
                 std::string("example ") + c.name + " final config differs from hand-derived expectation");
    for (const auto& k : diff_coordinates(base, result.config)) {
      check.expect(touched(script).contains(k), std::string("example ") + c.name + " changed untouched " + k);
    }
  }
  const auto c_final = apply_script_or_throw(base, parse_modify_script(dftest::kExampleC, dftest::kExampleCFiles));
  check.expect(c_final.placements.at(at(M, 2)).path == dftest::kExampleCFiles[1], "C: middle/2 is not the second new file");
  check.expect(c_final.placements.at(at(R, 3)) == base.placements.at(at(M, 2)), "C: right/3 is not the former middle/2");
  if (check.ok) check.detail = "A, B, C match hand-derived configs; no diffs outside touched coordinates";
  return check;
}

// ---------------------------------------------------------------------------
// 2. Modification success rate

// Ten fixture configs: the full grid under different artifact arrangements,
// some with holes.
std::vector<DashboardConfig> fixture_configs() {
  const auto base = dftest::full_config();
  std::vector<ComponentRef> refs;
  for (const auto& [c, r] : base.placements) refs.push_back(r);
  std::vector<DashboardConfig> out;
  dftest::Rng rng(2024);
  for (int i = 0; i < 10; ++i) {
    auto cfg = base;
    cfg.title = "Fixture " + std::to_string(i);
    std::shuffle(refs.begin(), refs.end(), rng);
    cfg.placements.clear();
    std::size_t k = 0;
    for (Position p : kAllPositions) {
      for (int o = 1; o <= 3; ++o) cfg.placements.emplace(at(p, o), refs[k++]);
    }
    // up to two holes in the later configs
    for (int h = 0; h < i / 4; ++h) {
      auto it = cfg.placements.begin();
      std::advance(it, dftest::uniform(rng, 0, static_cast<int>(cfg.placements.size()) - 1));
      cfg.placements.erase(it);
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

struct Task {
  std::string name;
  std::string request;
  std::string response;
};

std::string code_block(const std::vector<std::string>& files) {
  std::string code = "```python\nimport pandas as pd\nfrom pyecharts import options as opts\n";
  std::string list = "[";
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& f = files[i];
    if (f.ends_with(".html")) {
      code += "chart = build_chart(df)\nchart.render(\"" + f + "\")\n";
    } else {
      code += "table = df.groupby(\"region\", as_index=False).sum().head(12)\ntable.to_csv(\"" + f + "\")\n";
    }
    list += (i ? ", \"" : "\"") + f + "\"";
  }
  list += "]";
  code += "print('<result>" + list + "</result>')\n```\n";
  return code;
}

std::string response_for(const json& script, const std::vector<std::string>& files) {
  std::string r;
  if (!files.empty()) r += code_block(files);
  r += "```json\n" + script.dump(2) + "\n```\n";
  return r;
}

// M1-M7 for one config; targets are picked from what the config holds.
std::vector<Task> tasks_for(const DashboardConfig& cfg) {
  std::vector<Coordinate> occupied;
  for (const auto& [c, r] : cfg.placements) occupied.push_back(c);
  const auto pos = [](const Coordinate& c) { return dftest::coordinate_json(c); };
  const Coordinate a = occupied.front();
  const Coordinate b = occupied.back();
  const Coordinate mid = occupied[occupied.size() / 2];
  std::vector<Task> t;

  json m1 = json::array({{{"option", "change"}, {"changes", {{{"title", "Quarterly Review"}}}}}});
  t.push_back({"M1 change", "Rename the dashboard to Quarterly Review", response_for(m1, {})});

  json m2 = json::array({{{"option", "delete"}, {"changes", {pos(mid)}}}});
  t.push_back({"M2 delete", "Remove the component at " + mid.to_string(), response_for(m2, {})});

  json m3 = json::array({{{"option", "add"}, {"changes", {pos(a)}}}});
  t.push_back({"M3 add-replace", "Replace " + a.to_string() + " with a new chart", response_for(m3, {"new_chart.html"})});

  json m4 = json::array({{{"option", "swap"}, {"changes", {pos(a), pos(b)}}}});
  t.push_back({"M4 swap", "Swap " + a.to_string() + " and " + b.to_string(), response_for(m4, {})});

  json m5 = json::array({{{"option", "swap"}, {"changes", {pos(a), pos(mid)}}},
                         {{"option", "add"}, {"changes", {pos(b)}}}});
  t.push_back({"M5 swap+add", "Swap two components, then put a new table at " + b.to_string(),
               response_for(m5, {"new_table.csv"})});

  json m6 = json::array({{{"option", "change"}, {"changes", {{{"footnote", "Audited"}}, {{"font_color", "#00E5FF"}}}}},
                         {{"option", "delete"}, {"changes", {pos(mid)}}},
                         {{"option", "add"}, {"changes", {pos(mid)}}},
                         {{"option", "swap"}, {"changes", {pos(mid), pos(a)}}}});
  t.push_back({"M6 change+delete+add+swap", "Footnote and color, rebuild " + mid.to_string() + " and move it",
               response_for(m6, {"new_chart1.html"})});

  json m7 = json::array({{{"option", "add"}, {"changes", {pos(b)}}},
                         {{"option", "swap"}, {"changes", {pos(b), pos(a)}}},
                         {{"option", "add"}, {"changes", {pos(b)}}}});
  t.push_back({"M7 add+swap+add", "Add, swap, then add again", response_for(m7, {"new_chart1.html", "new_chart2.html"})});
  return t;
}

struct TaskRun {
  bool ok = false;
  std::string why;
  GorReport gor;
  std::string html;
};

TaskRun run_task(const DashboardConfig& cfg, const Task& task) {
  TaskRun out;
  const auto table = dftest::data_dir() / "sales.csv";
  const auto prompt = expand_modification_prompt(task.request, dftest::schema_of(table), cfg);
  ScriptedProvider provider(parse_transcript(dftest::transcript({{prompt, task.response}})));
  ModifyResult result;
  try {
    result = run_modify(workspace(), ModifyRequest{cfg, table, task.request}, provider);
  } catch (const StageError& e) {
    out.why = task.name + ": " + e.what();
    return out;
  }
  // independent oracle over the raw wire text
  const auto extracted = extract_modify_script(task.response);
  const auto expected = dftest::oracle_apply(dftest::grid_from_json(serialize_config(cfg)), extracted.script_json,
                                             extracted.files);
  if (!expected) {
    out.why = task.name + ": oracle rejects the script";
    return out;
  }
  const Grid actual = dftest::grid_from_json(serialize_config(result.config));
  if (!(actual == *expected)) {
    out.why = task.name + ": result differs from grid oracle";
    return out;
  }
  // non-interference: only touched cells and named fields change
  const auto allowed = touched(result.script);
  for (const auto& cell : dftest::grid_diff(dftest::grid_from_json(serialize_config(cfg)), actual)) {
    if (!allowed.contains(cell)) {
      out.why = task.name + ": untouched cell " + cell + " changed";
      return out;
    }
  }
  std::set<std::string> named;
  for (const auto& a : result.script.actions) {
    if (const auto* c = std::get_if<ChangeAction>(&a)) {
      for (const auto& [k, v] : c->changes) named.insert(k);
    }
  }
  const auto field_changed = [&](const char* f, const std::string& x, const std::string& y) {
    return x != y && !named.contains(f);
  };
  if (field_changed("title", cfg.title, result.config.title) ||
      field_changed("footnote", cfg.footnote, result.config.footnote) ||
      field_changed("font_color", cfg.font_color, result.config.font_color) ||
      field_changed("template_id", cfg.template_id, result.config.template_id)) {
    out.why = task.name + ": a field the script did not name changed";
    return out;
  }
  out.ok = true;
  out.gor = result.gor;
  out.html = result.render.html;
  return out;
}

Check modification_success() {
  Check check;
  int passed = 0, total = 0;
  for (const auto& cfg : fixture_configs()) {
    for (const auto& task : tasks_for(cfg)) {
      ++total;
      const auto r = run_task(cfg, task);
      if (r.ok) ++passed;
      check.expect(r.ok, r.why);
    }
  }
  check.expect(total == 70, "expected 70 runs, got " + std::to_string(total));
  if (check.ok) check.detail = std::to_string(passed) + "/" + std::to_string(total) + " = 100%, non-interference held";
  else check.detail += " (" + std::to_string(passed) + "/" + std::to_string(total) + ")";
  return check;
}

// ---------------------------------------------------------------------------
// 3. Render determinism

Check render_determinism() {
  Check check;
  auto configs = fixture_configs();
  configs.insert(configs.begin(), dftest::full_config());
  auto duo = dftest::full_config();
  for (int o = 1; o <= 3; ++o) duo.placements.erase(at(M, o));
  duo.template_id = "duo";
  configs.push_back(duo);

  std::size_t compiles = 0;
  for (const auto& cfg : configs) {
    std::vector<std::string> w;
    const auto artifacts = load_referenced(dftest::data_dir(), cfg, LoadOptions{false, &w});
    const auto tpl = registry().load(cfg.template_id);
    const auto first = compile(cfg, artifacts, tpl).html;
    check.expect(first.find("{{") == std::string::npos, cfg.title + ": placeholder syntax in output");
    const auto problem = dftest::html_balance_problem(first);
    check.expect(problem.empty(), cfg.title + ": " + problem);
    for (int i = 0; i < 100; ++i) {
      // reload artifacts every few rounds so file reading is covered too
      const auto again = i % 10 == 0 ? run_render(workspace(), cfg).html : compile(cfg, artifacts, tpl).html;
      ++compiles;
      check.expect(again == first, cfg.title + ": compile " + std::to_string(i) + " differs");
    }
  }
  if (check.ok) {
    check.detail = std::to_string(configs.size()) + " configs x 100 compiles byte-identical, no \"{{\", tags balanced";
  }
  return check;
}

// ---------------------------------------------------------------------------
// 4. GOR ordering

Check gor_ordering() {
  Check check;
  const auto table = dftest::data_dir() / "sales.csv";
  const std::string request = "Build a sales performance dashboard";
  const auto response = slurp(dftest::data_dir() / "responses" / "generation.txt");
  const auto prompt = expand_generation_prompt(request, dftest::schema_of(table));
  ScriptedProvider provider(parse_transcript(dftest::transcript({{prompt, response}})));
  const auto gen = run_generate(workspace(), GenerateRequest{table, request, "dark", {"Sales", "", ""}}, provider);

  GorReportSet set;
  set.add("generation", gen.gor);
  const double g = gen.gor.ratio();
  check.expect(g < 1.0, "generation GOR " + std::to_string(g) + " is not below 1.0");
  check.expect(g >= 0.001 && g <= 1.0, "generation GOR out of [0.001, 1.0]");
  double worst = 0;
  for (const auto& task : tasks_for(gen.config)) {
    const auto r = run_task(gen.config, task);
    check.expect(r.ok, r.why);
    if (!r.ok) continue;
    set.add(task.name, r.gor);
    const double m = r.gor.ratio();
    worst = std::max(worst, m);
    check.expect(m < g, task.name + " GOR " + std::to_string(m) + " not below generation " + std::to_string(g));
    check.expect(m >= 0.001 && m <= 1.0, task.name + " GOR " + std::to_string(m) + " out of [0.001, 1.0]");
  }
  if (check.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "generation %.3f; modifications max %.3f; all in [0.001, 1.0]", g, worst);
    check.detail = buf;
  }
  return check;
}

// ---------------------------------------------------------------------------
// 5. Property suites

constexpr int kCases = 1000;

Check properties() {
  Check check;
  dftest::Rng rng(99);
  const auto dark = registry().load("dark");
  const auto duo = registry().load("duo");

  // swap involution
  for (int i = 0; i < kCases && check.ok; ++i) {
    const auto cfg = dftest::random_config(rng, 1.0);
    const SwapAction s{dftest::random_coordinate(rng), dftest::random_coordinate(rng)};
    FileQueue q;
    check.expect(apply_action(apply_action(cfg, s, q), s, q) == cfg, "swap twice is not identity");
  }

  // change idempotence
  for (int i = 0; i < kCases && check.ok; ++i) {
    const auto cfg = dftest::random_config(rng);
    static const char* colors[] = {"#000", "#00E5FF", "white", "#11223344"};
    const ChangeAction c{{{"title", dftest::random_text(rng)},
                          {"footnote", dftest::random_text(rng)},
                          {"font_color", colors[dftest::uniform(rng, 0, 3)]}}};
    FileQueue q;
    const auto once = apply_action(cfg, c, q);
    check.expect(apply_action(once, c, q) == once, "change applied twice differs from once");
    check.expect(once.placements == cfg.placements, "change touched placements");
  }

  // all-or-nothing: a script whose k-th action is illegal leaves the config as it was
  for (int i = 0; i < kCases && check.ok; ++i) {
    auto cfg = dftest::random_config(rng, 0.7);
    const Coordinate hole = dftest::random_coordinate(rng);
    cfg.placements.erase(hole);
    std::vector<Action> actions;
    std::vector<std::string> files;
    const int n = dftest::uniform(rng, 1, 5);
    const int bad = dftest::uniform(rng, 0, n - 1);
    for (int k = 0; k < n; ++k) {
      if (k == bad) {
        if (dftest::uniform(rng, 0, 1)) actions.push_back(DeleteAction{{hole}});
        else actions.push_back(SwapAction{hole, hole});
        break;
      }
      switch (dftest::uniform(rng, 0, 2)) {
        case 0: actions.push_back(ChangeAction{{{"title", dftest::random_text(rng)}}}); break;
        case 1: {
          Coordinate t = dftest::random_coordinate(rng);
          if (t == hole) t = hole == at(L, 1) ? at(L, 2) : at(L, 1);
          actions.push_back(AddAction{{t}});
          files.push_back("n" + std::to_string(k) + ".html");
          break;
        }
        default: actions.push_back(ChangeAction{{{"footnote", dftest::random_text(rng)}}});
      }
    }
    const auto result = apply_script(cfg, ModifyScript{actions, files});
    check.expect(!result.ok(), "illegal script was accepted");
    if (!result.ok()) {
      check.expect(result.config == cfg, "failed script modified the config");
      check.expect(result.error->action_index() == static_cast<std::size_t>(bad), "wrong failing action index");
    }
  }

  // serialization round trip
  for (int i = 0; i < kCases && check.ok; ++i) {
    const auto cfg = dftest::random_config(rng, 0.5);
    const auto bytes = serialize_config(cfg);
    const auto back = deserialize_config(bytes);
    check.expect(back == cfg, "round trip changed the config");
    check.expect(serialize_config(back) == bytes, "re-serialization is not byte-identical");
  }

  // capacity error exactly when count exceeds capacity
  for (int i = 0; i < kCases && check.ok; ++i) {
    const auto& tpl = i % 2 ? dark : duo;
    std::vector<ComponentRef> comps;
    const int n = dftest::uniform(rng, 1, 12);
    for (int k = 0; k < n; ++k) comps.push_back(ComponentRef::from_path("c" + std::to_string(k) + (k % 2 ? ".csv" : ".html")));
    bool threw = false;
    try {
      const auto cfg = generate_config(comps, tpl, {"T", "F", ""});
      check.expect(cfg.placements.size() == comps.size(), "generated config lost components");
    } catch (const Error& e) {
      threw = e.code() == Errc::CapacityExceeded;
    }
    check.expect(threw == (comps.size() > tpl.columns.capacity()), "capacity error does not match count > capacity");
  }
  if (check.ok) check.detail = "5 suites x " + std::to_string(kCases) + " cases";
  return check;
}

// ---------------------------------------------------------------------------
// 6. Wire formats

bool rejects(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error&) {
    return true;
  }
  return false;
}

Check wire_formats() {
  Check check;
  check.expect(detect_intent("<result>generation</result>") == Intent::generation, "intent generation");
  check.expect(detect_intent("<result>modify</result>") == Intent::modify, "intent modify");
  const std::vector<std::string> bad_intents = {
      "generation",
      "<result></result>",
      "<result>generation",
      "generation</result>",
      "<result>Generation</result>",
      "<result>generate</result>",
      "<result>modification</result>",
      "<result>generation modify</result>",
      "<Result>modify</Result>",
      "<result>\"modify\"</result>"};
  for (const auto& s : bad_intents) check.expect(rejects([&] { detect_intent(s); }), "intent accepted: " + s);

  const std::string files = R"(<result>["sales_trend.html", "top_10_sales.csv", "city_economic_indicators.json"]</result>)";
  check.expect(extract_result_files(files) ==
                   std::vector<std::string>{"sales_trend.html", "top_10_sales.csv", "city_economic_indicators.json"},
               "result list example");
  const std::vector<std::string> bad_lists = {
      "[\"sales_trend.html\"]",
      "<result>[sales_trend.html]</result>",
      "<result>\"sales_trend.html\"</result>",
      "<result>[\"sales_trend.html\", </result>",
      "<result>[\"sales_trend.html\" \"top_10_sales.csv\"]</result>",
      "<result>[\"sales_trend.html]</result>",
      "<result>[\"\"]</result>",
      "<result>[\"a.html\"]]</result>",
      "<result>(\"a.html\", \"b.csv\")</result>",
      "<result>[\"a.html\"]"};
  for (const auto& s : bad_lists) check.expect(rejects([&] { extract_result_files(s); }), "list accepted: " + s);

  const auto full = [](const std::string& response) {
    const auto s = extract_modify_script(response);
    return parse_modify_script(s.script_json, s.files);
  };
  check.expect(full(dftest::fenced(dftest::kExampleA)).actions.size() == 2, "example A fence");
  check.expect(full(dftest::example_b_response()).new_files == dftest::kExampleBFiles, "example B fence");
  check.expect(full(dftest::example_c_response()).actions.size() == 3, "example C fence");
  const std::string a = dftest::kExampleA;
  const std::vector<std::string> bad_scripts = {
      a,
      "```\n" + a + "\n```",
      "```jsonc\n" + a + "\n```",
      "```json\n" + a,
      "```json\n" + a.substr(0, a.size() - 1) + "\n```",
      "```json\n{\"option\":\"change\",\"changes\":[]}\n```",
      "```json\n[{\"option\":\"rename\",\"changes\":[{\"title\":\"x\"}]}]\n```",
      "```json\n[{\"option\":\"delete\",\"changes\":[{\"position\":\"center\",\"order\":2}]}]\n```",
      "```json\n[{\"option\":\"swap\",\"changes\":[{\"position\":\"left\",\"order\":1}]}]\n```",
      "```json\n" + std::string(dftest::kExampleB) + "\n```\n<result>[\"new_chart.html\"]</result>"};
  for (const auto& s : bad_scripts) check.expect(rejects([&] { full(s); }), "script accepted: " + s.substr(0, 40));
  if (check.ok) check.detail = "3 protocols: printed examples parse, 10/10 mutants rejected each";
  return check;
}

struct Criterion {
  int id;
  const char* name;
  double budget_ms;
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked-example fidelity", 1000, worked_examples},
      {2, "modification success rate", 5000, modification_success},
      {3, "render determinism and completeness", 10000, render_determinism},
      {4, "GOR ordering", 2000, gor_ordering},
      {5, "property suites", 30000, properties},
      {6, "wire-format extraction", 1000, wire_formats},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Check result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    const bool in_time = ms < c.budget_ms;
    const bool pass = result.ok && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %d %s: %s (%.1f ms, budget %.0f ms)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                result.detail.c_str(), ms, c.budget_ms, in_time ? "" : " OVER BUDGET");
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
