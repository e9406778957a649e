#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tempura/cluster_analysis.hpp"
#include "tempura/corpus.hpp"

namespace tempura::protocol {

struct SamplingConfig {
  std::size_t num_users = 200;
  std::size_t num_candidates = 20;
  std::size_t max_history = 15;
  std::uint64_t seed = 0;
};

// One leave-one-out evaluation instance. `full_history` holds every event
// preceding the held-out target (oldest first); `history` is the presented
// window, a suffix of full_history of at most max_history items. Candidates
// are in presentation order and contain the ground truth exactly once.
struct EvalInstance {
  std::string user_id;
  std::vector<corpus::ItemRecord> history;
  std::vector<corpus::ItemRecord> full_history;
  std::size_t full_history_len = 0;
  std::vector<corpus::ItemRecord> candidates;
  std::size_t ground_truth_index = 0;

  std::vector<std::string> candidate_titles() const;
  std::vector<std::string> history_titles() const;
};

// Builds min(num_users, eligible users) instances. The target is each
// sampled user's last event; the 19 negatives are drawn uniformly without
// replacement from the catalog minus the user's entire interaction history;
// candidate presentation order is a seeded uniform shuffle. Each user's
// draws come from a derived per-user seed, so construction order does not
// matter. Identical (inputs, seed) give identical output.
std::vector<EvalInstance> make_instances(
    const std::vector<corpus::UserHistory>& histories,
    const corpus::Catalog& catalog, const SamplingConfig& config);

// Re-truncates the presented window to the last `max_history` pre-target
// events. full_history and full_history_len are unchanged.
EvalInstance truncate_history(const EvalInstance& instance,
                              std::size_t max_history);

// Seeded uniform permutation of the history (window and full history alike);
// candidates and ground truth untouched.
EvalInstance randomize_items(const EvalInstance& instance, std::uint64_t seed);

// Seeded permutation of cluster order; member order inside each cluster is
// preserved.
ClusterAnalysis randomize_clusters(const ClusterAnalysis& analysis,
                                   std::uint64_t seed);

// JSONL serialization, one instance per line (schema documented in the
// README). Deterministic byte output for identical input.
std::string instance_to_json_line(const EvalInstance& instance);
EvalInstance instance_from_json_line(const std::string& line);
void write_instances_jsonl(const std::string& path,
                           const std::vector<EvalInstance>& instances);
std::vector<EvalInstance> read_instances_jsonl(const std::string& path);

}  // namespace tempura::protocol
