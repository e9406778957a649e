#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tempura/message.hpp"

namespace tempura::gateway {

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  std::vector<Message> messages;
  int max_output_tokens = 512;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

struct TokenUsage {
  long long prompt = 0;
  long long completion = 0;

  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct ChatResponse {
  std::string text;
  TokenUsage usage;
  long long latency_ms = 0;

  friend bool operator==(const ChatResponse&, const ChatResponse&) = default;
};

// Canonical serialization: compact JSON with lexicographically ordered keys
// and shortest round-trip number formatting, identical across runs and
// platforms. The provider endpoint is deliberately not part of it, so
// transcripts are portable across compatible providers.
std::string canonical_request_json(const ChatRequest& request);

// Hex SHA-256 of the canonical serialization.
std::string request_hash(const ChatRequest& request);

enum class TranscriptMode { Record, Replay, Passthrough };

std::string_view transcript_mode_name(TranscriptMode mode);
TranscriptMode transcript_mode_from_name(std::string_view name);

// Request-hash-keyed store of LLM exchanges, persisted as JSONL with one
// (hash, request, response) record per line. Replay mode loads the file and
// never touches the network; record mode appends every new exchange as it
// happens. Thread-safe.
class Transcript {
 public:
  Transcript(std::string path, TranscriptMode mode);

  std::optional<ChatResponse> lookup(const std::string& hash) const;
  void store(const std::string& hash, const ChatRequest& request,
             const ChatResponse& response);

  TranscriptMode mode() const { return mode_; }
  const std::string& path() const { return path_; }
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::string path_;
  TranscriptMode mode_;
  std::unordered_map<std::string, ChatResponse> entries_;
};

}  // namespace tempura::gateway
