#include "tempura/gateway.hpp"

#include <cstdlib>
#include <thread>

#include <json.hpp>

namespace tempura::gateway {
namespace {

using nlohmann::json;

ClockFn default_clock() {
  return [] { return Clock::now(); };
}

SleepFn default_sleep() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

bool retryable_status(int status) {
  return status == 429 || status == 500 || status == 502 || status == 503 ||
         status == 504;
}

class HttpBackend final : public CompletionBackend {
 public:
  HttpBackend(ProviderConfig config, std::unique_ptr<HttpTransport> transport,
              SleepFn sleep, ClockFn clock)
      : config_(std::move(config)),
        transport_(std::move(transport)),
        sleep_(sleep ? std::move(sleep) : default_sleep()),
        clock_(clock ? std::move(clock) : default_clock()) {
    if (!transport_) {
      transport_ = make_httplib_transport(config_.timeout_seconds);
    }
  }

  ChatResponse complete(const ChatRequest& request) override {
    const std::string body = build_body(request);
    const auto headers = build_headers();
    const auto started = clock_();

    std::chrono::milliseconds backoff{1000};
    std::string last_error;
    const int tries = std::max(1, config_.max_tries);
    for (int attempt = 1; attempt <= tries; ++attempt) {
      const HttpResult result =
          transport_->post(config_.endpoint, headers, body);
      if (result.transport_ok && result.status == 200) {
        ChatResponse response = parse_body(result.body);
        response.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  clock_() - started)
                                  .count();
        return response;
      }
      if (result.transport_ok && !retryable_status(result.status)) {
        throw ProtocolError("provider returned status " +
                            std::to_string(result.status) + ": " +
                            result.body.substr(0, 200));
      }
      last_error = result.transport_ok
                       ? "status " + std::to_string(result.status)
                       : "transport: " + result.error;
      if (attempt < tries) {
        sleep_(backoff);
        backoff *= 2;
      }
    }
    throw TransportError("gave up after " + std::to_string(tries) +
                         " attempts (" + last_error + ")");
  }

 private:
  std::string build_body(const ChatRequest& request) const {
    json messages = json::array();
    for (const Message& m : request.messages) {
      json entry;
      entry["role"] = std::string(role_name(m.role));
      entry["content"] = m.text;
      messages.push_back(std::move(entry));
    }
    json j;
    j["model"] = request.model;
    j["temperature"] = request.temperature;
    j["messages"] = std::move(messages);
    j["max_tokens"] = request.max_output_tokens;
    return j.dump();
  }

  std::vector<std::pair<std::string, std::string>> build_headers() const {
    std::vector<std::pair<std::string, std::string>> headers;
    headers.emplace_back("Content-Type", "application/json");
    if (!config_.api_key_env.empty()) {
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (key == nullptr || *key == '\0') {
        throw GatewayError("credential env var not set: " +
                           config_.api_key_env);
      }
      headers.emplace_back(config_.auth_header, config_.auth_prefix + key);
    }
    return headers;
  }

  static ChatResponse parse_body(const std::string& body) {
    const json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) {
      throw ProtocolError("malformed response body (not a JSON object)");
    }
    const auto choices = j.find("choices");
    if (choices == j.end() || !choices->is_array() || choices->empty()) {
      throw ProtocolError("malformed response body (no choices)");
    }
    const json& first = choices->front();
    const auto message = first.find("message");
    if (message == first.end() || !message->contains("content") ||
        !(*message)["content"].is_string()) {
      throw ProtocolError("malformed response body (no message content)");
    }
    ChatResponse response;
    response.text = (*message)["content"].get<std::string>();
    if (const auto usage = j.find("usage"); usage != j.end()) {
      response.usage.prompt = usage->value("prompt_tokens", 0LL);
      response.usage.completion = usage->value("completion_tokens", 0LL);
    }
    return response;
  }

  ProviderConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  SleepFn sleep_;
  ClockFn clock_;
};

class ScriptedBackend final : public CompletionBackend {
 public:
  explicit ScriptedBackend(std::function<std::string(const ChatRequest&)> fn)
      : fn_(std::move(fn)) {}

  ChatResponse complete(const ChatRequest& request) override {
    ChatResponse response;
    response.text = fn_(request);
    std::size_t prompt_chars = 0;
    for (const Message& m : request.messages) prompt_chars += m.text.size();
    response.usage.prompt = static_cast<long long>((prompt_chars + 3) / 4);
    response.usage.completion =
        static_cast<long long>((response.text.size() + 3) / 4);
    response.latency_ms = 0;
    return response;
  }

 private:
  std::function<std::string(const ChatRequest&)> fn_;
};

}  // namespace

std::unique_ptr<CompletionBackend> make_http_backend(
    ProviderConfig config, std::unique_ptr<HttpTransport> transport,
    SleepFn sleep, ClockFn clock) {
  return std::make_unique<HttpBackend>(std::move(config), std::move(transport),
                                       std::move(sleep), std::move(clock));
}

std::unique_ptr<CompletionBackend> make_scripted_backend(
    std::function<std::string(const ChatRequest&)> script) {
  return std::make_unique<ScriptedBackend>(std::move(script));
}

RateLimiter::RateLimiter(int per_minute, ClockFn clock, SleepFn sleep)
    : limit_(per_minute),
      clock_(clock ? std::move(clock) : default_clock()),
      sleep_(sleep ? std::move(sleep) : default_sleep()) {}

void RateLimiter::acquire() {
  if (limit_ <= 0) return;
  using namespace std::chrono_literals;
  for (;;) {
    std::chrono::milliseconds wait{0};
    {
      std::lock_guard lock(mu_);
      const auto now = clock_();
      while (!issued_.empty() && now - issued_.front() >= 60s) {
        issued_.pop_front();
      }
      if (issued_.size() < static_cast<std::size_t>(limit_)) {
        issued_.push_back(now);
        return;
      }
      wait = std::chrono::duration_cast<std::chrono::milliseconds>(
                 issued_.front() + 60s - now) +
             1ms;
    }
    sleep_(wait);
  }
}

Gateway::Gateway(std::shared_ptr<CompletionBackend> backend,
                 std::shared_ptr<Transcript> transcript,
                 const ProviderConfig& config, ClockFn clock, SleepFn sleep)
    : backend_(std::move(backend)),
      transcript_(std::move(transcript)),
      limiter_(config.requests_per_minute, std::move(clock), std::move(sleep)),
      inflight_(std::max(1, config.max_in_flight)) {
  if (!backend_) throw std::invalid_argument("gateway: backend required");
}

ChatResponse Gateway::complete(const ChatRequest& request) {
  if (request.messages.empty()) {
    throw std::invalid_argument("gateway: request has no messages");
  }
  if (request.temperature < 0.0 || request.temperature > 2.0) {
    throw std::invalid_argument("gateway: temperature out of range");
  }

  const bool replay =
      transcript_ && transcript_->mode() == TranscriptMode::Replay;
  const bool record =
      transcript_ && transcript_->mode() == TranscriptMode::Record;
  std::string hash;
  if (replay || record) {
    hash = request_hash(request);
    if (const auto hit = transcript_->lookup(hash)) return *hit;
    if (replay) {
      throw ReplayMissError("replay miss for request hash " + hash);
    }
  }

  limiter_.acquire();
  inflight_.acquire();
  ChatResponse response;
  try {
    response = backend_->complete(request);
  } catch (...) {
    inflight_.release();
    throw;
  }
  inflight_.release();
  ++network_calls_;

  if (record) transcript_->store(hash, request, response);
  return response;
}

ChatResponse complete(const ChatRequest& request, const ProviderConfig& config,
                      Transcript& transcript) {
  if (config.kind != "http") {
    throw std::invalid_argument(
        "complete: only the http provider kind is supported here; mock "
        "providers are composed by the harness");
  }
  Gateway gw(make_http_backend(config),
             std::shared_ptr<Transcript>(&transcript, [](Transcript*) {}),
             config);
  return gw.complete(request);
}

}  // namespace tempura::gateway
