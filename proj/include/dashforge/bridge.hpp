#pragma once

// Text protocols spoken with the model: prompt expansion on the way out and
// extraction of <result> blocks and ```json fences on the way back.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dashforge/artifacts.hpp"
#include "dashforge/model.hpp"

namespace dashforge {

enum class Intent { generation, modify };

std::string_view to_string(Intent intent) noexcept;

// Word inside the first <result>...</result> block, trimmed, exact match.
// Throws MissingResultBlock, UnknownIntent.
Intent detect_intent(std::string_view response);

// Quoted-filename list inside the last <result>...</result> block; single
// or double quotes. Throws MissingResultBlock, MalformedList.
std::vector<std::string> extract_result_files(std::string_view response);

struct ExtractedScript {
  std::string script_json;
  std::vector<std::string> files;  // empty when no <result> block is present
};

// Body of the first ```json fence plus the new-file list, if any.
// Throws MissingJsonBlock, MalformedList.
ExtractedScript extract_modify_script(std::string_view response);

enum class ValueCategory { numeric, text, date };

std::string_view to_string(ValueCategory c) noexcept;

inline constexpr std::size_t kSchemaSampleRows = 5;

struct TableSchema {
  std::vector<std::string> columns;
  std::vector<ValueCategory> categories;
  std::vector<std::vector<std::string>> sample_rows;

  friend bool operator==(const TableSchema&, const TableSchema&) = default;
};

TableSchema infer_schema(const TableArtifact& table, std::size_t sample_rows = kSchemaSampleRows);

// Text block injected for {{USER_TABLE}}.
std::string render_schema(const TableSchema& schema);

std::string expand_intent_prompt(std::string_view user_prompt);
std::string expand_generation_prompt(std::string_view user_prompt, const TableSchema& schema);
std::string expand_modification_prompt(std::string_view user_prompt, const TableSchema& schema,
                                       const DashboardConfig& prior_config);

// The raw prompt templates as shipped.
std::string_view intent_prompt_template() noexcept;
std::string_view generation_prompt_template() noexcept;
std::string_view modification_prompt_template() noexcept;

}  // namespace dashforge
