#pragma once

// Generative Overhead Ratio: tokens the model emitted per token of finished
// dashboard. Counts come from a lexical proxy tokenizer, so values are only
// comparable with each other, not with provider-reported token counts.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dashforge {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string_view id() const noexcept = 0;
  virtual std::uint64_t count(std::string_view text) const = 0;
};

// Maximal runs of letters/digits are one token; every other non-whitespace
// character is one token. Non-ASCII code points count as letters.
class LexicalTokenizer final : public Tokenizer {
 public:
  static constexpr std::string_view kId = "lexical-v1";
  std::string_view id() const noexcept override { return kId; }
  std::uint64_t count(std::string_view text) const override;
};

std::uint64_t count_tokens(std::string_view text);

inline constexpr std::string_view kGorCaveat =
    "token counts use a lexical proxy tokenizer; compare ratios within one report set only";

struct GorReport {
  std::uint64_t tokens_llm = 0;
  std::uint64_t tokens_db = 1;
  std::string tokenizer_id;

  double ratio() const noexcept {
    return static_cast<double>(tokens_llm) / static_cast<double>(tokens_db);
  }
  // {"tokens_llm", "tokens_db", "ratio", "tokenizer_id", "caveat"}
  std::string to_json() const;
};

// Throws EmptyDashboard when the dashboard has no tokens.
GorReport gor(std::string_view llm_output, std::string_view dashboard, const Tokenizer& tokenizer);
GorReport gor(std::string_view llm_output, std::string_view dashboard);

// Reports compared in one set must share a tokenizer.
class GorReportSet {
 public:
  // Throws MixedTokenizer.
  void add(std::string label, GorReport report);

  const std::vector<std::pair<std::string, GorReport>>& reports() const noexcept { return reports_; }
  std::string to_json() const;

 private:
  std::vector<std::pair<std::string, GorReport>> reports_;
};

}  // namespace dashforge
