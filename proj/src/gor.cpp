#include "dashforge/gor.hpp"

#include <nlohmann/json.hpp>

#include "dashforge/error.hpp"

namespace dashforge {

namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

nlohmann::ordered_json report_json(const GorReport& r) {
  nlohmann::ordered_json j;
  j["tokens_llm"] = r.tokens_llm;
  j["tokens_db"] = r.tokens_db;
  j["ratio"] = r.ratio();
  j["tokenizer_id"] = r.tokenizer_id;
  return j;
}

}  // namespace

std::uint64_t LexicalTokenizer::count(std::string_view text) const {
  std::uint64_t tokens = 0;
  bool in_word = false;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_ascii_space(c)) {
      in_word = false;
    } else if (is_ascii_alnum(c) || c >= 0x80) {
      // UTF-8 lead and continuation bytes extend the current word.
      if (!in_word) ++tokens;
      in_word = true;
    } else {
      ++tokens;
      in_word = false;
    }
  }
  return tokens;
}

std::uint64_t count_tokens(std::string_view text) { return LexicalTokenizer{}.count(text); }

std::string GorReport::to_json() const {
  auto j = report_json(*this);
  j["caveat"] = kGorCaveat;
  return j.dump(2);
}

GorReport gor(std::string_view llm_output, std::string_view dashboard, const Tokenizer& tokenizer) {
  GorReport report;
  report.tokens_db = tokenizer.count(dashboard);
  if (report.tokens_db == 0) fail(Errc::EmptyDashboard, "dashboard file has no tokens");
  report.tokens_llm = tokenizer.count(llm_output);
  report.tokenizer_id = std::string(tokenizer.id());
  return report;
}

GorReport gor(std::string_view llm_output, std::string_view dashboard) {
  return gor(llm_output, dashboard, LexicalTokenizer{});
}

void GorReportSet::add(std::string label, GorReport report) {
  if (!reports_.empty() && reports_.front().second.tokenizer_id != report.tokenizer_id) {
    fail(Errc::MixedTokenizer, "report '" + label + "' uses tokenizer '" + report.tokenizer_id + "', set uses '" +
                                   reports_.front().second.tokenizer_id + "'");
  }
  reports_.emplace_back(std::move(label), std::move(report));
}

std::string GorReportSet::to_json() const {
  nlohmann::ordered_json j;
  j["tokenizer_id"] = reports_.empty() ? std::string() : reports_.front().second.tokenizer_id;
  j["caveat"] = kGorCaveat;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& [label, report] : reports_) {
    auto r = report_json(report);
    r["label"] = label;
    j["reports"].push_back(std::move(r));
  }
  return j.dump(2);
}

}  // namespace dashforge
