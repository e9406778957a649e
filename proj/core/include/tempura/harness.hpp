#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tempura/corpus.hpp"
#include "tempura/gateway.hpp"
#include "tempura/metrics.hpp"
#include "tempura/promptkit.hpp"
#include "tempura/protocol.hpp"
#include "tempura/rank_parser.hpp"

namespace tempura::harness {

// kind: movielens | amazon | histories | instances | synthetic-uniform |
// synthetic-cohort. Paths by role: ratings, movies, reviews, meta, catalog,
// histories, instances.
struct DatasetSpec {
  std::string kind = "synthetic-uniform";
  std::map<std::string, std::string> paths;
  std::size_t min_history = 6;
  std::size_t synthetic_users = 300;
  std::size_t synthetic_catalog = 400;
  std::size_t synthetic_events = 20;
};

enum class HistoryRandomization { None, Items };
enum class ClusterRandomization { None, Shuffle };

struct RunConfig {
  DatasetSpec dataset;
  protocol::SamplingConfig sampling;
  std::vector<std::string> strategies = {"pcl", "gcl", "cluster-augmented"};
  std::vector<std::string> ensemble_members = {"pcl", "gcl",
                                               "cluster-augmented"};
  int k = 5;             // PCL/GCL demonstrations
  int sample_size = 10;  // GCL global-context sample
  int repeats = 1;
  gateway::ProviderConfig provider;
  gateway::TranscriptMode transcript_mode = gateway::TranscriptMode::Record;
  std::string transcript_dir;  // default: <out_dir>/transcripts
  std::string out_dir = "out";
  std::uint64_t seed = 7;
  int workers = 4;
  std::size_t max_prompt_tokens = 0;  // 0 = no budget
  std::vector<int> metric_ks = {1, 5, 10};
  HistoryRandomization history_randomization = HistoryRandomization::None;
  ClusterRandomization cluster_randomization = ClusterRandomization::None;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);
std::string run_config_json(const RunConfig& config);

struct StrategyOutcome {
  std::string strategy;
  std::string request_hash;
  std::string cluster_request_hash;  // set by the cluster-augmented flow
  std::vector<std::size_t> order;    // parsed full permutation
  std::size_t matched_count = 0;
  std::size_t appended_count = 0;
  std::size_t unmatched_lines = 0;
  std::vector<std::string> unmatched_samples;  // at most 3
  bool valid = false;
  std::size_t rank_of_truth = 0;  // 1-based
  bool failed = false;
  std::string error;
  gateway::TokenUsage usage;
  long long latency_ms = 0;
};

struct InstanceOutcome {
  std::size_t index = 0;
  std::vector<StrategyOutcome> strategies;
  std::vector<std::size_t> ensemble_order;
  std::size_t ensemble_rank = 0;
  bool ensemble_dropped = false;
};

struct RepeatResult {
  std::vector<InstanceOutcome> instances;
  std::map<std::string, metrics::MetricReport> strategy_reports;
  metrics::MetricReport ensemble_report;
  gateway::TokenUsage tokens_total;
  long long latency_ms_total = 0;
  std::size_t failures = 0;
};

struct RunResult {
  RunConfig config;
  std::vector<protocol::EvalInstance> instances;
  std::vector<RepeatResult> repeats;
  // Mean across repeats (single repeat: identical to repeats[0]).
  std::map<std::string, metrics::MetricReport> strategy_reports;
  metrics::MetricReport ensemble_report;
};

// Ingests the dataset, builds leave-one-out instances, renders and executes
// every configured strategy per instance (the cluster-augmented flow first
// requests and parses a cluster analysis), parses rankings, aggregates the
// ensemble, computes metrics, and persists config / instances / transcripts /
// rankings / report under config.out_dir. Deterministic byte output in
// replay and mock modes.
RunResult run(const RunConfig& config);

corpus::IngestResult load_dataset(const DatasetSpec& spec, std::uint64_t seed);

struct AblationTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::string to_text() const;
};

// One run per history length, shared seed; NDCG@10 per strategy + ensemble.
AblationTable ablate_history(const RunConfig& config,
                             const std::vector<std::size_t>& lengths);

// One PCL-only run per k, shared seed; duplicate ks are deduplicated.
AblationTable ablate_k(const RunConfig& config, const std::vector<int>& ks);

// Item-R / Cluster-R / Correct runs sharing every other seed.
AblationTable ablate_randomization(const RunConfig& config);

// Recomputes the report from the files persisted under results_dir, rewrites
// report.json / report.txt, and returns the table text. Deterministic.
std::string report(const std::string& results_dir);

// Catalog / history JSONL used by `ingest` and the "histories" dataset kind.
void write_catalog_jsonl(const std::string& path,
                         const corpus::Catalog& catalog);
corpus::Catalog read_catalog_jsonl(const std::string& path);
void write_histories_jsonl(const std::string& path,
                           const std::vector<corpus::UserHistory>& histories);
std::vector<corpus::UserHistory> read_histories_jsonl(const std::string& path);

}  // namespace tempura::harness
