#include "dashforge/provider.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "dashforge/artifacts.hpp"
#include "dashforge/error.hpp"

namespace dashforge {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kTranscriptFormat = "dashforge-transcript/1";

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) fail(Errc::ProviderFailure, "provider URL needs a scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  Url out;
  out.origin = url.substr(0, path_begin);
  out.path = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  static constexpr std::string_view kEndpoint = "/chat/completions";
  if (out.path.size() < kEndpoint.size() ||
      out.path.compare(out.path.size() - kEndpoint.size(), kEndpoint.size(), kEndpoint) != 0) {
    out.path += kEndpoint;
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(Errc::ProviderFailure, "sha256 failed");
  }
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return ss.str();
}

std::vector<TranscriptEntry> parse_transcript(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedDocument, std::string("transcript: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("exchanges") || !doc["exchanges"].is_array()) {
    fail(Errc::MalformedDocument, "transcript must be an object with an \"exchanges\" list");
  }
  if (auto f = doc.find("format"); f != doc.end() && *f != kTranscriptFormat) {
    fail(Errc::VersionMismatch, "unsupported transcript format " + f->dump());
  }
  std::vector<TranscriptEntry> entries;
  for (const auto& ex : doc["exchanges"]) {
    if (!ex.is_object() || !ex.contains("response") || !ex["response"].is_string()) {
      fail(Errc::MalformedDocument, "transcript exchange needs a \"response\" string");
    }
    if (ex.contains("prompt") && !ex["prompt"].is_string()) {
      fail(Errc::MalformedDocument, "transcript \"prompt\" must be a string");
    }
    TranscriptEntry e;
    e.response = ex["response"].get<std::string>();
    if (auto p = ex.find("prompt"); p != ex.end() && p->is_string()) e.prompt = p->get<std::string>();
    if (auto h = ex.find("prompt_sha256"); h != ex.end() && h->is_string()) e.prompt_sha256 = h->get<std::string>();
    if (e.prompt_sha256.empty() && !ex.contains("prompt")) {
      fail(Errc::MalformedDocument, "transcript exchange needs a prompt or prompt_sha256");
    }
    if (ex.contains("prompt")) {
      const auto computed = sha256_hex(e.prompt);
      if (!e.prompt_sha256.empty() && e.prompt_sha256 != computed) {
        fail(Errc::MalformedDocument, "transcript prompt does not match its recorded hash");
      }
      e.prompt_sha256 = computed;
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

ScriptedProvider::ScriptedProvider(std::vector<TranscriptEntry> entries) {
  for (auto& e : entries) {
    const auto hash = e.prompt_sha256.empty() ? sha256_hex(e.prompt) : e.prompt_sha256;
    responses_[hash].push_back(std::move(e.response));
  }
}

ScriptedProvider ScriptedProvider::from_file(const std::filesystem::path& path) {
  return ScriptedProvider(parse_transcript(read_file(path)));
}

std::string ScriptedProvider::complete(std::string_view prompt) {
  const auto hash = sha256_hex(prompt);
  const auto it = responses_.find(hash);
  if (it == responses_.end()) fail(Errc::TranscriptMiss, "no recorded response for prompt sha256 " + hash);
  auto& cursor = cursor_[hash];
  if (cursor >= it->second.size()) {
    fail(Errc::TranscriptMiss, "recorded responses for prompt sha256 " + hash + " are exhausted");
  }
  return it->second[cursor++];
}

HttpProvider::HttpProvider(HttpProviderOptions options) : options_(std::move(options)) {
  if (options_.base_url.empty()) fail(Errc::ProviderFailure, "provider URL is empty");
  if (options_.model.empty()) fail(Errc::ProviderFailure, "provider model is empty");
}

std::string HttpProvider::request_body(std::string_view prompt) const {
  json body;
  body["model"] = options_.model;
  body["messages"] = json::array({json{{"role", "user"}, {"content", std::string(prompt)}}});
  return body.dump();
}

std::string parse_chat_completion(std::string_view body) {
  try {
    const auto doc = nlohmann::json::parse(body.begin(), body.end());
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ProviderFailure, std::string("unexpected completion response: ") + e.what());
  }
}

std::string HttpProvider::complete(std::string_view prompt) {
  const Url url = split_url(options_.base_url);
  httplib::Client client(url.origin);
  client.set_read_timeout(options_.timeout);
  client.set_connection_timeout(std::chrono::seconds(30));
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);
  const auto res = client.Post(url.path, headers, request_body(prompt), "application/json");
  if (!res) fail(Errc::ProviderFailure, "request to " + options_.base_url + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    fail(Errc::ProviderFailure, "provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 512));
  }
  return parse_chat_completion(res->body);
}

std::string Session::complete(std::string_view prompt) {
  std::lock_guard lock(mutex_);
  Exchange ex;
  ex.prompt = std::string(prompt);
  ex.provider_id = provider_.id();
  ex.started_at = now_iso8601();
  ex.response = provider_.complete(prompt);
  ex.finished_at = now_iso8601();
  exchanges_.push_back(ex);
  return ex.response;
}

std::string Session::transcript_json() const {
  json doc;
  doc["format"] = kTranscriptFormat;
  doc["exchanges"] = json::array();
  for (const auto& ex : exchanges_) {
    json e;
    e["prompt_sha256"] = sha256_hex(ex.prompt);
    e["prompt"] = ex.prompt;
    e["response"] = ex.response;
    e["provider"] = ex.provider_id;
    e["started_at"] = ex.started_at;
    e["finished_at"] = ex.finished_at;
    doc["exchanges"].push_back(std::move(e));
  }
  return doc.dump(2, ' ', false) + "\n";
}

void Session::save_transcript(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  out << transcript_json();
}

}  // namespace dashforge
