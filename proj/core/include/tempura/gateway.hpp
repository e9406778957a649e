#pragma once

#include <atomic>
#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tempura/transcript.hpp"

namespace tempura::gateway {

struct GatewayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ReplayMissError : GatewayError {
  using GatewayError::GatewayError;
};
struct TransportError : GatewayError {
  using GatewayError::GatewayError;
};
struct ProtocolError : GatewayError {
  using GatewayError::GatewayError;
};

struct ProviderConfig {
  std::string kind = "http";  // http | mock-echo | mock-recency
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  // Credentials come only from this environment variable, never from config
  // files. Empty means "send no credential" (useful against local servers).
  std::string api_key_env = "OPENAI_API_KEY";
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_output_tokens = 512;
  int requests_per_minute = 60;  // 0 disables the limiter
  int max_in_flight = 4;
  int max_tries = 5;
  int timeout_seconds = 120;
};

using Clock = std::chrono::steady_clock;
using ClockFn = std::function<Clock::time_point()>;
using SleepFn = std::function<void(std::chrono::milliseconds)>;

struct HttpResult {
  bool transport_ok = false;
  int status = 0;
  std::string body;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResult post(
      const std::string& url,
      const std::vector<std::pair<std::string, std::string>>& headers,
      const std::string& body) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport(int timeout_seconds);

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Chat-completions-compatible HTTP backend. Retries transient transport
// failures and 429/5xx responses with exponential backoff (base 1s, factor
// 2, at most max_tries attempts).
std::unique_ptr<CompletionBackend> make_http_backend(
    ProviderConfig config, std::unique_ptr<HttpTransport> transport = nullptr,
    SleepFn sleep = {}, ClockFn clock = {});

// Deterministic backend driven by a pure prompt->text function.
std::unique_ptr<CompletionBackend> make_scripted_backend(
    std::function<std::string(const ChatRequest&)> script);

// Sliding-window limiter: over any 60s window at most `per_minute` requests
// are issued. Clock and sleep are injectable for simulated-time tests.
class RateLimiter {
 public:
  explicit RateLimiter(int per_minute, ClockFn clock = {}, SleepFn sleep = {});
  void acquire();

 private:
  int limit_;
  ClockFn clock_;
  SleepFn sleep_;
  std::mutex mu_;
  std::deque<Clock::time_point> issued_;
};

// Uniform completion client: transcript-aware (record / replay /
// passthrough), rate limited, bounded in-flight. Safe for concurrent use.
class Gateway {
 public:
  Gateway(std::shared_ptr<CompletionBackend> backend,
          std::shared_ptr<Transcript> transcript, const ProviderConfig& config,
          ClockFn clock = {}, SleepFn sleep = {});

  // Replay mode returns the stored response for the request hash or throws
  // ReplayMissError. Record mode returns a stored response when present,
  // otherwise issues the call and persists the exchange.
  ChatResponse complete(const ChatRequest& request);

  std::size_t network_calls() const { return network_calls_.load(); }

 private:
  std::shared_ptr<CompletionBackend> backend_;
  std::shared_ptr<Transcript> transcript_;
  RateLimiter limiter_;
  std::counting_semaphore<> inflight_;
  std::atomic<std::size_t> network_calls_{0};
};

// One-shot convenience for the http provider kind.
ChatResponse complete(const ChatRequest& request, const ProviderConfig& config,
                      Transcript& transcript);

}  // namespace tempura::gateway
