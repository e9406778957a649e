#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "tempura/gateway.hpp"

namespace tempura::gateway {
namespace {

// Splits "https://host:port/path" into scheme://host[:port] and /path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint must include a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(int timeout_seconds)
      : timeout_seconds_(timeout_seconds) {}

  HttpResult post(
      const std::string& url,
      const std::vector<std::pair<std::string, std::string>>& headers,
      const std::string& body) override {
    const auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_write_timeout(timeout_seconds_, 0);

    httplib::Headers hl;
    std::string content_type = "application/json";
    for (const auto& [name, value] : headers) {
      if (name == "Content-Type") {
        content_type = value;
      } else {
        hl.emplace(name, value);
      }
    }

    const httplib::Result result = client.Post(path, hl, body, content_type);
    HttpResult out;
    if (!result) {
      out.transport_ok = false;
      out.error = httplib::to_string(result.error());
      return out;
    }
    out.transport_ok = true;
    out.status = result->status;
    out.body = result->body;
    return out;
  }

 private:
  int timeout_seconds_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport(int timeout_seconds) {
  return std::make_unique<HttplibTransport>(timeout_seconds);
}

}  // namespace tempura::gateway
