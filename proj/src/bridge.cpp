#include "dashforge/bridge.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>

#include "dashforge_prompts.hpp"

namespace dashforge {

namespace {

constexpr bool has_placeholder(std::string_view tpl, std::string_view name) {
  return tpl.find(name) != std::string_view::npos;
}

static_assert(has_placeholder(prompts::kIntent, "{{USER_QUERY}}"), "intent prompt lacks {{USER_QUERY}}");
static_assert(has_placeholder(prompts::kGeneration, "{{USER_TABLE}}"), "generation prompt lacks {{USER_TABLE}}");
static_assert(has_placeholder(prompts::kGeneration, "{{USER_QUERY}}"), "generation prompt lacks {{USER_QUERY}}");
static_assert(has_placeholder(prompts::kModification, "{{USER_TABLE}}"),
              "modification prompt lacks {{USER_TABLE}}");
static_assert(has_placeholder(prompts::kModification, "{{USER_QUERY}}"),
              "modification prompt lacks {{USER_QUERY}}");
static_assert(has_placeholder(prompts::kModification, "{{DBCONFIG}}"), "modification prompt lacks {{DBCONFIG}}");

constexpr std::string_view kOpen = "<result>";
constexpr std::string_view kClose = "</result>";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

struct Block {
  std::size_t begin;
  std::string_view body;
};

std::vector<Block> result_blocks(std::string_view text) {
  std::vector<Block> blocks;
  for (std::size_t i = text.find(kOpen); i != std::string_view::npos; i = text.find(kOpen, i + 1)) {
    const auto body_begin = i + kOpen.size();
    const auto close = text.find(kClose, body_begin);
    if (close == std::string_view::npos) break;
    // An open tag inside the body belongs to a later block.
    const auto nested = text.find(kOpen, body_begin);
    if (nested != std::string_view::npos && nested < close) continue;
    blocks.push_back({i, text.substr(body_begin, close - body_begin)});
  }
  return blocks;
}

// ["a.html", 'b.csv']
std::vector<std::string> parse_quoted_list(std::string_view body) {
  const auto bad = [&](std::string_view why) {
    fail(Errc::MalformedList, std::string(why) + " in <result> list: " + std::string(body));
  };
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  };
  skip_ws();
  if (i >= body.size() || body[i] != '[') bad("expected '['");
  ++i;
  std::vector<std::string> files;
  skip_ws();
  if (i < body.size() && body[i] == ']') {
    ++i;
  } else {
    while (true) {
      skip_ws();
      if (i >= body.size() || (body[i] != '"' && body[i] != '\'')) bad("expected a quoted filename");
      const char quote = body[i++];
      std::string name;
      while (i < body.size() && body[i] != quote) {
        if (body[i] == '\\' && i + 1 < body.size()) ++i;
        name.push_back(body[i++]);
      }
      if (i >= body.size()) bad("unterminated string");
      ++i;
      if (trim(name).empty()) bad("empty filename");
      files.push_back(std::move(name));
      skip_ws();
      if (i < body.size() && body[i] == ',') {
        ++i;
        skip_ws();
        if (i < body.size() && body[i] == ']') {
          ++i;
          break;
        }
        continue;
      }
      if (i < body.size() && body[i] == ']') {
        ++i;
        break;
      }
      bad("expected ',' or ']'");
    }
  }
  skip_ws();
  if (i != body.size()) bad("trailing characters");
  return files;
}

bool is_number(std::string_view v) {
  if (v.empty()) return false;
  std::string s(v);
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  if (!s.empty() && s.back() == '%') s.pop_back();
  if (!s.empty() && (s.front() == '+')) s.erase(0, 1);
  double d = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, d);
  return ec == std::errc() && ptr == last && !s.empty();
}

bool is_date(std::string_view v) {
  static const std::regex date(R"(\d{4}[-/.]\d{1,2}([-/.]\d{1,2})?([ T]\d{1,2}:\d{2}(:\d{2})?)?)");
  return std::regex_match(v.begin(), v.end(), date);
}

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string substitute(std::string_view tpl, const std::vector<std::pair<std::string_view, std::string_view>>& values) {
  std::string out;
  out.reserve(tpl.size() + 1024);
  std::size_t i = 0;
  while (i < tpl.size()) {
    bool replaced = false;
    if (tpl[i] == '{') {
      for (const auto& [key, value] : values) {
        if (tpl.substr(i, key.size()) == key) {
          out.append(value);
          i += key.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(tpl[i++]);
  }
  return out;
}

}  // namespace

std::string_view to_string(Intent intent) noexcept {
  return intent == Intent::generation ? "generation" : "modify";
}

Intent detect_intent(std::string_view response) {
  const auto blocks = result_blocks(response);
  if (blocks.empty()) fail(Errc::MissingResultBlock, "no <result></result> block in response");
  const auto word = trim(blocks.front().body);
  if (word == "generation") return Intent::generation;
  if (word == "modify") return Intent::modify;
  fail(Errc::UnknownIntent, "intent '" + std::string(word) + "' is neither generation nor modify");
}

std::vector<std::string> extract_result_files(std::string_view response) {
  const auto blocks = result_blocks(response);
  if (blocks.empty()) fail(Errc::MissingResultBlock, "no <result></result> block in response");
  return parse_quoted_list(blocks.back().body);
}

ExtractedScript extract_modify_script(std::string_view response) {
  static constexpr std::string_view kFence = "```";
  std::size_t body_begin = std::string_view::npos;
  for (std::size_t i = response.find(kFence); i != std::string_view::npos; i = response.find(kFence, i + 3)) {
    std::size_t p = i + kFence.size();
    std::string lang;
    while (p < response.size() && std::isalnum(static_cast<unsigned char>(response[p]))) {
      lang.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(response[p++]))));
    }
    if (lang != "json") continue;
    while (p < response.size() && (response[p] == ' ' || response[p] == '\t')) ++p;
    if (p < response.size() && response[p] != '\n' && response[p] != '\r') continue;
    body_begin = p;
    break;
  }
  if (body_begin == std::string_view::npos) fail(Errc::MissingJsonBlock, "no ```json fenced block in response");
  const auto close = response.find(kFence, body_begin);
  if (close == std::string_view::npos) fail(Errc::MissingJsonBlock, "```json block is not closed");

  ExtractedScript out;
  out.script_json = std::string(trim(response.substr(body_begin, close - body_begin)));
  if (!result_blocks(response).empty()) out.files = extract_result_files(response);
  return out;
}

std::string_view to_string(ValueCategory c) noexcept {
  switch (c) {
    case ValueCategory::numeric: return "numeric";
    case ValueCategory::date: return "date";
    case ValueCategory::text: return "text";
  }
  return "text";
}

TableSchema infer_schema(const TableArtifact& table, std::size_t sample_rows) {
  TableSchema schema;
  schema.columns = table.header;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    bool numeric = true;
    bool date = true;
    bool any = false;
    for (const auto& row : table.rows) {
      const auto v = trim(row[c]);
      if (v.empty()) continue;
      any = true;
      numeric = numeric && is_number(v);
      date = date && is_date(v);
    }
    schema.categories.push_back(!any ? ValueCategory::text
                                : numeric ? ValueCategory::numeric
                                : date    ? ValueCategory::date
                                          : ValueCategory::text);
  }
  const std::size_t n = std::min(sample_rows, table.rows.size());
  schema.sample_rows.assign(table.rows.begin(), table.rows.begin() + static_cast<std::ptrdiff_t>(n));
  return schema;
}

std::string render_schema(const TableSchema& schema) {
  std::string out = "Columns (" + std::to_string(schema.columns.size()) + "):\n";
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    out += "- " + schema.columns[c] + " (" + std::string(to_string(schema.categories[c])) + ")\n";
  }
  out += "First " + std::to_string(schema.sample_rows.size()) + " rows:\n";
  const auto line = [](const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s.push_back(',');
      s += csv_field(fields[i]);
    }
    return s + "\n";
  };
  out += line(schema.columns);
  for (const auto& row : schema.sample_rows) out += line(row);
  return out;
}

std::string expand_intent_prompt(std::string_view user_prompt) {
  return substitute(prompts::kIntent, {{"{{USER_QUERY}}", user_prompt}});
}

std::string expand_generation_prompt(std::string_view user_prompt, const TableSchema& schema) {
  const std::string table = render_schema(schema);
  return substitute(prompts::kGeneration, {{"{{USER_TABLE}}", table}, {"{{USER_QUERY}}", user_prompt}});
}

std::string expand_modification_prompt(std::string_view user_prompt, const TableSchema& schema,
                                       const DashboardConfig& prior_config) {
  const std::string table = render_schema(schema);
  const std::string config = serialize_config(prior_config);
  return substitute(prompts::kModification,
                    {{"{{USER_TABLE}}", table}, {"{{USER_QUERY}}", user_prompt}, {"{{DBCONFIG}}", config}});
}

std::string_view intent_prompt_template() noexcept { return prompts::kIntent; }
std::string_view generation_prompt_template() noexcept { return prompts::kGeneration; }
std::string_view modification_prompt_template() noexcept { return prompts::kModification; }

}  // namespace dashforge
