#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tempura/gateway.hpp"

namespace tempura::mocks {

// Prompt scraping for deterministic mock providers. These rely on the
// rendering templates' section markers.
bool is_cluster_request(const std::string& user_text);
std::vector<std::string> extract_candidates(const std::string& user_text);
std::vector<std::string> extract_history(const std::string& user_text);

// Echoes the candidates back in presentation order; answers cluster requests
// with a single all-items cluster.
std::string echo_presentation_reply(const gateway::ChatRequest& request);

// Scores each candidate by recency-weighted token overlap with the history
// as presented (weight = 1-based history position), so shuffling the history
// destroys its signal. Cluster requests get consecutive chunks of five.
std::string recency_overlap_reply(const gateway::ChatRequest& request);

// kind: "mock-echo" or "mock-recency".
std::unique_ptr<gateway::CompletionBackend> make_mock_backend(
    const std::string& kind);

}  // namespace tempura::mocks
