#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempura/cluster_analysis.hpp"
#include "tempura/message.hpp"
#include "tempura/protocol.hpp"

namespace tempura::promptkit {

enum class StrategyKind {
  Sequential,
  RecencyFocused,
  IclLastItem,
  Pcl,
  Gcl,
  ClusterRequest,
  ClusterAugmented,
};

struct PromptStrategy {
  StrategyKind kind = StrategyKind::Sequential;
  int k = 5;            // demonstrations (Pcl / Gcl)
  int sample_size = 10; // global-context sample size (Gcl)

  friend bool operator==(const PromptStrategy&,
                         const PromptStrategy&) = default;
};

std::string strategy_tag(const PromptStrategy& strategy);
PromptStrategy strategy_from_tag(std::string_view tag, int k = 5,
                                 int sample_size = 10);

// Provider-neutral rendering of one strategy for one instance. All
// demonstrations are inlined into a single user message so behavior is
// identical across providers with different multi-turn handling.
struct RenderedPrompt {
  std::string strategy;
  std::vector<Message> messages;
  std::vector<std::size_t> candidate_order;  // candidate indices as presented
  std::size_t token_estimate = 0;            // chars/4 heuristic
  std::vector<std::string> warnings;

  const std::string& user_text() const;
};

// Structural view of a demonstration prompt, exposed so tests and
// conformance checks do not have to re-parse rendered text. For Pcl/Icl the
// indices address instance.history; for Gcl they address
// instance.full_history.
struct DemoPlan {
  std::vector<std::size_t> context;  // items shown as initial context
  std::vector<std::size_t> demos;    // demonstrated next items, chronological
  int effective_k = 0;
  bool clamped = false;
};

DemoPlan plan_pcl(const protocol::EvalInstance& instance, int k);
DemoPlan plan_gcl(const protocol::EvalInstance& instance, int k,
                  int sample_size, std::uint64_t seed);

RenderedPrompt render_sequential(const protocol::EvalInstance& instance);
RenderedPrompt render_recency_focused(const protocol::EvalInstance& instance);
RenderedPrompt render_icl(const protocol::EvalInstance& instance);
RenderedPrompt render_pcl(const protocol::EvalInstance& instance, int k);
RenderedPrompt render_gcl(const protocol::EvalInstance& instance, int k,
                          int sample_size, std::uint64_t seed);
RenderedPrompt render_cluster_request(const protocol::EvalInstance& instance);
RenderedPrompt render_cluster_augmented(const protocol::EvalInstance& instance,
                                        const ClusterAnalysis& analysis);

// Dispatch for the single-stage strategies. ClusterRequest/ClusterAugmented
// are driven as a two-stage flow by the harness.
RenderedPrompt render(const PromptStrategy& strategy,
                      const protocol::EvalInstance& instance,
                      std::uint64_t seed);

struct ClusterParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "Cluster N: [titles]. Cluster summary: ..." output. Member names
// are matched to history items with the rank-parser's title matcher;
// unmatched members are dropped and counted, history items missing from all
// clusters are appended as trailing singleton clusters. Throws
// ClusterParseError when nothing parseable is found.
ClusterAnalysis parse_clusters(const std::string& text,
                               const protocol::EvalInstance& instance);

// All history items in one cluster; the caller's fallback when the cluster
// response is unparseable.
ClusterAnalysis fallback_single_cluster(const protocol::EvalInstance& instance);

std::size_t estimate_tokens(const std::vector<Message>& messages);

}  // namespace tempura::promptkit
