#pragma once

// Shared test helpers: fixture paths, temp dirs, transcript builders, random
// generators and the independent oracles the suites compare against.

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dashforge/pipeline.hpp"

namespace dftest {

namespace fs = std::filesystem;
using dashforge::Coordinate;
using dashforge::DashboardConfig;
using dashforge::Position;

inline fs::path data_dir() { return DASHFORGE_TEST_DATA; }
inline fs::path templates_dir() { return DASHFORGE_TEST_TEMPLATES; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("dftest-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Copies every fixture artifact into `dir`.
inline void copy_fixtures(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(data_dir())) {
    if (e.is_regular_file()) fs::copy_file(e.path(), dir / e.path().filename(), fs::copy_options::overwrite_existing);
  }
}

inline DashboardConfig full_config() { return dashforge::deserialize_config(slurp(data_dir() / "full.dbconfig.json")); }

inline std::string transcript(const std::vector<std::pair<std::string, std::string>>& exchanges) {
  nlohmann::json j;
  j["format"] = "dashforge-transcript/1";
  j["exchanges"] = nlohmann::json::array();
  for (const auto& [prompt, response] : exchanges) j["exchanges"].push_back({{"prompt", prompt}, {"response", response}});
  return j.dump(2);
}

inline dashforge::TableSchema schema_of(const fs::path& table) {
  std::vector<std::string> ignored;
  return dashforge::infer_schema(
      dashforge::parse_table(slurp(table), table.filename().string(), dashforge::LoadOptions{false, &ignored}));
}

// ---------------------------------------------------------------------------
// Modify-script wire text for the three worked examples.

inline constexpr const char* kExampleA = R"([
  {
    "option":"change",
    "changes":[{"title":"2024 Financial Report"},{"footnote": "2024"}]
  },
  {
    "option":"delete",
    "changes":[{"position":"right","order":2}]
  }
])";

inline constexpr const char* kExampleB = R"([
  {
    "option":"add",
    "changes":[{"position":"right","order":1},{"position":"right","order":2}]
  },
  {
    "option":"swap",
    "changes":[{"position":"middle","order":2},{"position":"left","order":3}]
  }
])";

inline constexpr const char* kExampleC = R"([
  {
    "option":"add",
    "changes":[{"position":"right","order":3}]
  },
  {
    "option":"swap",
    "changes":[{"position":"middle","order":2},{"position":"right","order":3}]
  },
  {
    "option":"add",
    "changes":[{"position":"middle","order":2}]
  }
])";

inline const std::vector<std::string> kExampleBFiles = {"new_chart.html", "new_table.csv"};
inline const std::vector<std::string> kExampleCFiles = {"new_chart1.html", "new_chart2.html"};

inline std::string fenced(std::string_view json) { return "```json\n" + std::string(json) + "\n```"; }

inline std::string example_b_response() {
  return "Part 1:\n```python\nimport pandas as pd\nfrom pyecharts.charts import Bar\n"
         "chart = Bar()\nchart.render(\"new_chart.html\")\ntable.to_csv(\"new_table.csv\")\n"
         "print('<result>[\"new_chart.html\",\"new_table.csv\"]</result>')\n```\n"
         "<result>[\"new_chart.html\",\"new_table.csv\"]</result>\n\nPart 2:\n" +
         fenced(kExampleB) + "\n";
}

inline std::string example_c_response() {
  return "```python\nchart1.render(\"new_chart1.html\")\nchart2.render(\"new_chart2.html\")\n"
         "print('<result>[\"new_chart1.html\",\"new_chart2.html\"]</result>')\n```\n"
         "<result>[\"new_chart1.html\",\"new_chart2.html\"]</result>\n" +
         fenced(kExampleC) + "\n";
}

// ---------------------------------------------------------------------------
// Grid oracle: a deliberately naive 3x3 array model of a dashboard used to
// check modify results without going through the library's operator.

struct Cell {
  std::string kind;
  std::string path;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Grid {
  std::array<std::array<std::optional<Cell>, 3>, 3> cells;  // [column][row]
  std::string title, footnote, font_color, template_id;

  std::optional<Cell>& at(int col, int row) { return cells[col][row - 1]; }
  friend bool operator==(const Grid&, const Grid&) = default;
};

inline int column_index(const std::string& name) {
  if (name == "left") return 0;
  if (name == "middle") return 1;
  if (name == "right") return 2;
  throw std::runtime_error("bad column " + name);
}

// Built from the canonical JSON text, not from library structs.
inline Grid grid_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Grid g;
  g.title = j.at("title");
  g.footnote = j.at("footnote");
  g.font_color = j.at("font_color");
  g.template_id = j.at("template_id");
  for (const auto& p : j.at("placements")) {
    g.at(column_index(p.at("position")), p.at("order").get<int>()) = Cell{p.at("kind"), p.at("path")};
  }
  return g;
}

inline std::string oracle_kind(const std::string& file) {
  const auto dot = file.rfind('.');
  std::string ext = dot == std::string::npos ? "" : file.substr(dot);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".html") return "chart";
  if (ext == ".csv") return "table";
  return "metrics";
}

// Applies a script given as raw JSON; returns nullopt when any step would be
// illegal (the whole script is then rejected).
inline std::optional<Grid> oracle_apply(Grid g, const std::string& script_json, std::vector<std::string> files) {
  const auto script = nlohmann::json::parse(script_json);
  std::size_t next_file = 0;
  for (const auto& action : script) {
    const std::string op = action.at("option");
    const auto& changes = action.at("changes");
    const auto cell = [&](const nlohmann::json& c) -> std::optional<Cell>& {
      return g.at(column_index(c.at("position")), c.at("order").get<int>());
    };
    if (op == "change") {
      for (const auto& kv : changes) {
        for (const auto& [k, v] : kv.items()) {
          if (k == "title") g.title = v;
          else if (k == "footnote") g.footnote = v;
          else if (k == "font_color") g.font_color = v;
          else if (k == "template_id") g.template_id = v;
          else return std::nullopt;
        }
      }
    } else if (op == "delete") {
      for (const auto& c : changes) {
        if (!cell(c)) return std::nullopt;
        cell(c).reset();
      }
    } else if (op == "add") {
      for (const auto& c : changes) {
        if (next_file >= files.size()) return std::nullopt;
        const auto& f = files[next_file++];
        cell(c) = Cell{oracle_kind(f), f};
      }
    } else if (op == "swap") {
      if (changes.size() != 2) return std::nullopt;
      auto& a = cell(changes[0]);
      auto& b = cell(changes[1]);
      if (!a || !b) return std::nullopt;
      std::swap(a, b);
    } else {
      return std::nullopt;
    }
  }
  return g;
}

// Cells whose contents differ between two grids, as "column/row".
inline std::vector<std::string> grid_diff(const Grid& a, const Grid& b) {
  static const char* names[] = {"left", "middle", "right"};
  std::vector<std::string> out;
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      if (a.cells[c][r] != b.cells[c][r]) out.push_back(std::string(names[c]) + "/" + std::to_string(r + 1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Token count oracle: regex over the same lexical rule.

inline std::uint64_t oracle_token_count(std::string text) {
  // non-ASCII bytes behave as letters
  for (auto& c : text) {
    if (static_cast<unsigned char>(c) >= 0x80) c = 'x';
  }
  static const std::regex token(R"([A-Za-z0-9]+|[^\sA-Za-z0-9])");
  return static_cast<std::uint64_t>(
      std::distance(std::sregex_iterator(text.begin(), text.end(), token), std::sregex_iterator()));
}

// ---------------------------------------------------------------------------
// HTML well-formedness oracle: every non-void element closed in LIFO order,
// script/style bodies skipped, comments skipped. Returns an empty string
// when balanced, else a description of the first problem.

inline std::string html_balance_problem(const std::string& html) {
  static const std::vector<std::string> void_tags = {"area", "base", "br", "col", "embed", "hr", "img",
                                                     "input", "link", "meta", "source", "track", "wbr"};
  std::vector<std::string> stack;
  std::size_t i = 0;
  const auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  while ((i = html.find('<', i)) != std::string::npos) {
    if (html.compare(i, 4, "<!--") == 0) {
      const auto end = html.find("-->", i);
      if (end == std::string::npos) return "unterminated comment";
      i = end + 3;
      continue;
    }
    if (html.compare(i, 2, "<!") == 0) {
      i = html.find('>', i);
      if (i == std::string::npos) return "unterminated declaration";
      continue;
    }
    const bool closing = i + 1 < html.size() && html[i + 1] == '/';
    std::size_t n = i + (closing ? 2 : 1);
    std::size_t name_end = n;
    while (name_end < html.size() && (std::isalnum(static_cast<unsigned char>(html[name_end])) || html[name_end] == '-')) {
      ++name_end;
    }
    if (name_end == n) {
      ++i;  // a bare '<' in text
      continue;
    }
    const std::string name = lower(html.substr(n, name_end - n));
    // find the tag end, honouring quoted attribute values
    std::size_t j = name_end;
    char quote = 0;
    for (; j < html.size(); ++j) {
      if (quote) {
        if (html[j] == quote) quote = 0;
      } else if (html[j] == '"' || html[j] == '\'') {
        quote = html[j];
      } else if (html[j] == '>') {
        break;
      }
    }
    if (j >= html.size()) return "unterminated tag <" + name;
    const bool self_closing = html[j - 1] == '/';
    i = j + 1;
    if (closing) {
      if (stack.empty()) return "stray </" + name + ">";
      if (stack.back() != name) return "</" + name + "> closes <" + stack.back() + ">";
      stack.pop_back();
      continue;
    }
    if (self_closing || std::find(void_tags.begin(), void_tags.end(), name) != void_tags.end()) continue;
    if (name == "script" || name == "style") {
      const auto end = lower(html).find("</" + name, i);
      if (end == std::string::npos) return "unterminated <" + name + ">";
      i = end;
    }
    stack.push_back(name);
  }
  if (!stack.empty()) return "unclosed <" + stack.back() + ">";
  return {};
}

// ---------------------------------------------------------------------------
// Random generators.

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::string random_word(Rng& rng, int max_len = 10) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 _-";
  std::string s;
  const int n = uniform(rng, 1, max_len);
  for (int i = 0; i < n; ++i) s += alphabet[uniform(rng, 0, static_cast<int>(alphabet.size()) - 1)];
  return s;
}

inline std::string random_text(Rng& rng) {
  static const std::vector<std::string> extras = {"é", "数据", "<b>", "&", "\"", "'", "{", "}", "\\", "\t", "—"};
  std::string s = random_word(rng, 6);
  const int n = uniform(rng, 0, 3);
  for (int i = 0; i < n; ++i) s += extras[uniform(rng, 0, static_cast<int>(extras.size()) - 1)] + random_word(rng, 4);
  return s;
}

inline Coordinate random_coordinate(Rng& rng, int columns = 3) {
  static constexpr Position cols[] = {Position::left, Position::middle, Position::right};
  return Coordinate(cols[uniform(rng, 0, columns - 1)], uniform(rng, 1, 3));
}

inline dashforge::ComponentRef random_ref(Rng& rng) {
  static const char* ext[] = {".html", ".csv", ".json"};
  const int k = uniform(rng, 0, 2);
  return dashforge::ComponentRef::from_path("f" + std::to_string(uniform(rng, 0, 999)) + ext[k]);
}

inline DashboardConfig random_config(Rng& rng, double fill = 0.6) {
  DashboardConfig c;
  c.template_id = "dark";
  c.title = random_text(rng);
  c.footnote = random_text(rng);
  static const char* colors[] = {"#FFFFFF", "#0af", "#00E5FF", "rebeccapurple", "#12345678"};
  c.font_color = colors[uniform(rng, 0, 4)];
  std::bernoulli_distribution occupied(fill);
  for (Position p : dashforge::kAllPositions) {
    for (int o = 1; o <= 3; ++o) {
      if (occupied(rng)) c.placements.emplace(Coordinate(p, o), random_ref(rng));
    }
  }
  return c;
}

inline nlohmann::json coordinate_json(const Coordinate& c) {
  return {{"position", std::string(dashforge::to_string(c.position()))}, {"order", c.order()}};
}

}  // namespace dftest
