#pragma once

// Minimal tag scanner for the chart documents produced by charting tools.
// Not a conforming HTML parser: it tokenizes tags, comments and the raw-text
// bodies of <script>/<style>, which is all the chart extractor needs.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dashforge::html {

struct Tag {
  enum class Type { start, end };
  Type type;
  std::string name;  // lower-cased
  std::vector<std::pair<std::string, std::string>> attrs;
  bool self_closing = false;
  std::size_t begin = 0;  // offset of '<'
  std::size_t end = 0;    // one past '>'
  // For raw-text elements (script, style): the body between the tags.
  std::size_t raw_begin = 0;
  std::size_t raw_end = 0;

  std::optional<std::string> attr(std::string_view key) const;
};

std::vector<Tag> scan(std::string_view text);

bool is_void_element(std::string_view name) noexcept;

// Offset one past the end tag matching tags[open]; nullopt when unbalanced.
std::optional<std::size_t> matching_end(const std::vector<Tag>& tags, std::size_t open);

}  // namespace dashforge::html
