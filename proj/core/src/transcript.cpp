#include "tempura/transcript.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>
#include <openssl/evp.h>

namespace tempura::gateway {
namespace {

using nlohmann::json;

json request_to_json(const ChatRequest& request) {
  json messages = json::array();
  for (const Message& m : request.messages) {
    json entry;
    entry["content"] = m.text;
    entry["role"] = std::string(role_name(m.role));
    messages.push_back(std::move(entry));
  }
  json j;
  j["max_output_tokens"] = request.max_output_tokens;
  j["messages"] = std::move(messages);
  j["model"] = request.model;
  j["temperature"] = request.temperature;
  return j;
}

ChatResponse response_from_json(const json& j) {
  ChatResponse resp;
  resp.text = j.at("text").get<std::string>();
  resp.latency_ms = j.value("latency_ms", 0LL);
  if (const auto it = j.find("usage"); it != j.end()) {
    resp.usage.prompt = it->value("prompt", 0LL);
    resp.usage.completion = it->value("completion", 0LL);
  }
  return resp;
}

json response_to_json(const ChatResponse& resp) {
  json j;
  j["latency_ms"] = resp.latency_ms;
  j["text"] = resp.text;
  j["usage"]["completion"] = resp.usage.completion;
  j["usage"]["prompt"] = resp.usage.prompt;
  return j;
}

}  // namespace

std::string canonical_request_json(const ChatRequest& request) {
  return request_to_json(request).dump();
}

std::string request_hash(const ChatRequest& request) {
  const std::string canonical = canonical_request_json(request);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &len,
                 EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("request_hash: digest failure");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0x0F]);
  }
  return hex;
}

std::string_view transcript_mode_name(TranscriptMode mode) {
  switch (mode) {
    case TranscriptMode::Record:
      return "record";
    case TranscriptMode::Replay:
      return "replay";
    case TranscriptMode::Passthrough:
      return "passthrough";
  }
  return "passthrough";
}

TranscriptMode transcript_mode_from_name(std::string_view name) {
  if (name == "record") return TranscriptMode::Record;
  if (name == "replay") return TranscriptMode::Replay;
  if (name == "passthrough") return TranscriptMode::Passthrough;
  throw std::invalid_argument("unknown transcript mode: " + std::string(name));
}

Transcript::Transcript(std::string path, TranscriptMode mode)
    : path_(std::move(path)), mode_(mode) {
  if (mode_ == TranscriptMode::Passthrough) return;
  if (path_.empty()) {
    throw std::invalid_argument("transcript path required for " +
                                std::string(transcript_mode_name(mode_)) +
                                " mode");
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    if (mode_ == TranscriptMode::Replay) {
      throw std::runtime_error("cannot open transcript: " + path_);
    }
    return;  // record mode starts a fresh file
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    entries_[j.at("hash").get<std::string>()] =
        response_from_json(j.at("response"));
  }
}

std::optional<ChatResponse> Transcript::lookup(const std::string& hash) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(hash);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Transcript::store(const std::string& hash, const ChatRequest& request,
                       const ChatResponse& response) {
  std::lock_guard lock(mu_);
  const auto [it, inserted] = entries_.try_emplace(hash, response);
  if (!inserted) return;  // keep the first recording for a hash
  if (mode_ != TranscriptMode::Record) return;

  const auto parent = std::filesystem::path(path_).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append transcript: " + path_);
  json j;
  j["hash"] = hash;
  j["request"] = nlohmann::json::parse(canonical_request_json(request));
  j["response"] = response_to_json(response);
  out << j.dump() << '\n';
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace tempura::gateway
