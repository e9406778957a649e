#include "tempura/mock_providers.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "tempura/metrics.hpp"

namespace tempura::mocks {
namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// "N. title" -> title; empty when the line is not a numbered entry.
std::string numbered_payload(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i == 0 || i + 1 >= line.size() || line[i] != '.' || line[i + 1] != ' ') {
    return {};
  }
  return line.substr(i + 2);
}

const std::string& user_text_of(const gateway::ChatRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend();
       ++it) {
    if (it->role == Role::User) return it->text;
  }
  throw std::invalid_argument("mock provider: request has no user message");
}

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  const std::unordered_set<std::string> sa(a.begin(), a.end());
  const std::unordered_set<std::string> sb(b.begin(), b.end());
  std::size_t inter = 0;
  for (const auto& tok : sa) inter += sb.count(tok);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::string numbered_reply(const std::vector<std::string>& titles,
                           const std::vector<std::size_t>& order) {
  std::ostringstream out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << (i + 1) << ". " << titles[order[i]] << '\n';
  }
  return out.str();
}

std::string cluster_reply(const std::vector<std::string>& history) {
  std::ostringstream out;
  std::size_t cluster = 1;
  for (std::size_t start = 0; start < history.size(); start += 5) {
    const std::size_t end = std::min(start + 5, history.size());
    out << "Cluster " << cluster++ << ": [";
    for (std::size_t i = start; i < end; ++i) {
      if (i > start) out << ", ";
      out << history[i];
    }
    out << "]. Cluster summary: items " << (start + 1) << " to " << end
        << ".\n";
  }
  return out.str();
}

}  // namespace

bool is_cluster_request(const std::string& user_text) {
  return user_text.find("Partition these items") != std::string::npos;
}

std::vector<std::string> extract_candidates(const std::string& user_text) {
  const std::vector<std::string> lines = split_lines(user_text);
  std::vector<std::string> candidates;
  bool in_block = false;
  for (const std::string& line : lines) {
    if (line.find("candidate items for the user's next interaction:") !=
        std::string::npos) {
      in_block = true;
      continue;
    }
    if (!in_block) continue;
    std::string payload = numbered_payload(line);
    if (payload.empty()) break;
    candidates.push_back(std::move(payload));
  }
  return candidates;
}

std::vector<std::string> extract_history(const std::string& user_text) {
  const std::vector<std::string> lines = split_lines(user_text);
  std::vector<std::string> history;
  bool in_block = false;
  for (const std::string& line : lines) {
    if (line.find("chronological order (oldest first):") !=
        std::string::npos) {
      in_block = true;
      continue;
    }
    if (in_block) {
      std::string payload = numbered_payload(line);
      if (payload.empty()) {
        in_block = false;
      } else {
        history.push_back(std::move(payload));
        continue;
      }
    }
    // Demonstration items extend the presented history in order.
    static constexpr std::string_view kDemoMarker =
        "the next item the user interacted with was: ";
    const std::size_t at = line.find(kDemoMarker);
    if (at != std::string::npos) {
      history.push_back(line.substr(at + kDemoMarker.size()));
    }
  }
  return history;
}

std::string echo_presentation_reply(const gateway::ChatRequest& request) {
  const std::string& text = user_text_of(request);
  if (is_cluster_request(text)) {
    const std::vector<std::string> history = extract_history(text);
    std::ostringstream out;
    out << "Cluster 1: [";
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (i > 0) out << ", ";
      out << history[i];
    }
    out << "]. Cluster summary: everything the user interacted with.\n";
    return out.str();
  }
  const std::vector<std::string> candidates = extract_candidates(text);
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return numbered_reply(candidates, order);
}

std::string recency_overlap_reply(const gateway::ChatRequest& request) {
  const std::string& text = user_text_of(request);
  const std::vector<std::string> history = extract_history(text);
  if (is_cluster_request(text)) return cluster_reply(history);

  const std::vector<std::string> candidates = extract_candidates(text);
  std::vector<std::vector<std::string>> history_tokens;
  history_tokens.reserve(history.size());
  for (const std::string& h : history) {
    history_tokens.push_back(metrics::tokenize(h));
  }

  std::vector<double> score(candidates.size(), 0.0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::vector<std::string> tokens = metrics::tokenize(candidates[c]);
    for (std::size_t p = 0; p < history_tokens.size(); ++p) {
      score[c] += static_cast<double>(p + 1) * jaccard(tokens, history_tokens[p]);
    }
  }

  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&score](std::size_t a, std::size_t b) {
                     return score[a] > score[b];
                   });
  return numbered_reply(candidates, order);
}

std::unique_ptr<gateway::CompletionBackend> make_mock_backend(
    const std::string& kind) {
  if (kind == "mock-echo") {
    return gateway::make_scripted_backend(echo_presentation_reply);
  }
  if (kind == "mock-recency") {
    return gateway::make_scripted_backend(recency_overlap_reply);
  }
  throw std::invalid_argument("unknown mock provider kind: " + kind);
}

}  // namespace tempura::mocks
