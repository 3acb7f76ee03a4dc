#include "html_scan.hpp"

#include <algorithm>
#include <cctype>

namespace dashforge::html {

namespace {

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '-' || c == '_' || c == ':';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Case-insensitive search for "</name".
std::size_t find_close(std::string_view text, std::size_t from, std::string_view name) {
  for (std::size_t i = text.find("</", from); i != std::string_view::npos; i = text.find("</", i + 2)) {
    if (i + 2 + name.size() > text.size()) return std::string_view::npos;
    if (lower(text.substr(i + 2, name.size())) == name) {
      const std::size_t after = i + 2 + name.size();
      if (after == text.size() || !is_name_char(text[after])) return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::optional<std::string> Tag::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs) {
    if (k == key) return v;
  }
  return std::nullopt;
}

bool is_void_element(std::string_view name) noexcept {
  static constexpr std::string_view kVoid[] = {"area", "base", "br",   "col",   "embed",  "hr",    "img",
                                               "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(std::begin(kVoid), std::end(kVoid), name) != std::end(kVoid);
}

std::vector<Tag> scan(std::string_view text) {
  std::vector<Tag> tags;
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string_view::npos) {
    if (text.substr(i, 4) == "<!--") {
      const auto close = text.find("-->", i + 4);
      if (close == std::string_view::npos) break;
      i = close + 3;
      continue;
    }
    if (i + 1 < text.size() && (text[i + 1] == '!' || text[i + 1] == '?')) {
      const auto close = text.find('>', i);
      if (close == std::string_view::npos) break;
      i = close + 1;
      continue;
    }
    const bool closing = i + 1 < text.size() && text[i + 1] == '/';
    std::size_t p = i + (closing ? 2 : 1);
    const std::size_t name_begin = p;
    while (p < text.size() && is_name_char(text[p])) ++p;
    if (p == name_begin || !std::isalpha(static_cast<unsigned char>(text[name_begin]))) {
      ++i;  // a literal '<'
      continue;
    }
    Tag tag;
    tag.type = closing ? Tag::Type::end : Tag::Type::start;
    tag.name = lower(text.substr(name_begin, p - name_begin));
    tag.begin = i;

    // attributes
    while (p < text.size() && text[p] != '>') {
      if (is_space(text[p])) {
        ++p;
        continue;
      }
      if (text[p] == '/') {
        tag.self_closing = true;
        ++p;
        continue;
      }
      tag.self_closing = false;
      const std::size_t key_begin = p;
      while (p < text.size() && !is_space(text[p]) && text[p] != '=' && text[p] != '>' &&
             !(text[p] == '/' && p + 1 < text.size() && text[p + 1] == '>')) {
        ++p;
      }
      std::string key = lower(text.substr(key_begin, p - key_begin));
      while (p < text.size() && is_space(text[p])) ++p;
      std::string value;
      if (p < text.size() && text[p] == '=') {
        ++p;
        while (p < text.size() && is_space(text[p])) ++p;
        if (p < text.size() && (text[p] == '"' || text[p] == '\'')) {
          const char quote = text[p];
          const auto close = text.find(quote, p + 1);
          if (close == std::string_view::npos) return tags;
          value = std::string(text.substr(p + 1, close - p - 1));
          p = close + 1;
        } else {
          const std::size_t v_begin = p;
          while (p < text.size() && !is_space(text[p]) && text[p] != '>') ++p;
          value = std::string(text.substr(v_begin, p - v_begin));
        }
      }
      if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
    }
    if (p >= text.size()) break;
    tag.end = p + 1;
    i = tag.end;

    if (tag.type == Tag::Type::start && !tag.self_closing && (tag.name == "script" || tag.name == "style")) {
      const auto close = find_close(text, i, tag.name);
      tag.raw_begin = i;
      tag.raw_end = close == std::string_view::npos ? text.size() : close;
      tags.push_back(std::move(tag));
      i = tags.back().raw_end;
      continue;
    }
    tags.push_back(std::move(tag));
  }
  return tags;
}

std::optional<std::size_t> matching_end(const std::vector<Tag>& tags, std::size_t open) {
  const Tag& start = tags[open];
  if (start.self_closing || is_void_element(start.name)) return start.end;
  int depth = 0;
  for (std::size_t k = open; k < tags.size(); ++k) {
    const Tag& t = tags[k];
    if (t.name != start.name) continue;
    if (t.type == Tag::Type::start && !t.self_closing) {
      ++depth;
    } else if (t.type == Tag::Type::end && --depth == 0) {
      return t.end;
    }
  }
  return std::nullopt;
}

}  // namespace dashforge::html
