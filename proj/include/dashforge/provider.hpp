#pragma once

// Model providers. ScriptedProvider replays recorded transcripts so whole
// pipeline runs are reproducible; HttpProvider talks to a chat-completion
// compatible endpoint.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace dashforge {

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  // Throws ProviderFailure or TranscriptMiss.
  virtual std::string complete(std::string_view prompt) = 0;
};

std::string sha256_hex(std::string_view data);

struct TranscriptEntry {
  std::string prompt_sha256;
  std::string prompt;  // may be empty when only the hash was recorded
  std::string response;
};

// Transcript file:
//   {"format": "dashforge-transcript/1",
//    "exchanges": [{"prompt_sha256": ..., "prompt": ..., "response": ...}, ...]}
// Entries need a prompt, a hash, or both (which must then agree).
std::vector<TranscriptEntry> parse_transcript(std::string_view json_text);

// Replays responses by exact prompt hash. A prompt recorded several times
// replays its responses in recorded order.
class ScriptedProvider final : public Provider {
 public:
  explicit ScriptedProvider(std::vector<TranscriptEntry> entries);
  static ScriptedProvider from_file(const std::filesystem::path& path);

  std::string id() const override { return "scripted"; }
  std::string complete(std::string_view prompt) override;

 private:
  std::map<std::string, std::vector<std::string>> responses_;
  std::map<std::string, std::size_t> cursor_;
};

struct HttpProviderOptions {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string model;
  std::string api_key;   // sent as a bearer token when non-empty
  std::chrono::seconds timeout{300};
};

inline constexpr std::string_view kApiKeyEnv = "DASHFORGE_API_KEY";

class HttpProvider final : public Provider {
 public:
  explicit HttpProvider(HttpProviderOptions options);

  std::string id() const override { return "http:" + options_.model; }
  std::string complete(std::string_view prompt) override;

  // Request body sent for `prompt`.
  std::string request_body(std::string_view prompt) const;

 private:
  HttpProviderOptions options_;
};

// Text of choices[0].message.content; throws ProviderFailure.
std::string parse_chat_completion(std::string_view body);

struct Exchange {
  std::string prompt;
  std::string response;
  std::string provider_id;
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;
};

// Records every exchange verbatim. One completion in flight at a time.
class Session {
 public:
  explicit Session(Provider& provider) : provider_(provider) {}

  std::string complete(std::string_view prompt);

  const std::vector<Exchange>& exchanges() const noexcept { return exchanges_; }
  // Replayable by ScriptedProvider.
  std::string transcript_json() const;
  void save_transcript(const std::filesystem::path& path) const;

 private:
  Provider& provider_;
  std::mutex mutex_;
  std::vector<Exchange> exchanges_;
};

}  // namespace dashforge
