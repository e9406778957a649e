#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tempura/protocol.hpp"

namespace tempura::metrics {

// Mean NDCG per cutoff, reported as percentages.
struct MetricReport {
  std::map<int, double> per_k;
  std::size_t instance_count = 0;
  std::size_t dropped_count = 0;
};

// Single relevant item, so ideal DCG is 1 and NDCG@k collapses to
// 1/log2(rank+1) inside the cutoff and 0 outside.
double ndcg_at_k(std::size_t rank_of_truth, int k);

// 100 * arithmetic mean of ndcg_at_k over the given 1-based ranks.
double mean_ndcg(const std::vector<std::size_t>& ranks, int k);

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
};

// Lowercase maximal alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

// Textual-similarity baseline: candidates are the document corpus, the query
// is the bag of tokens from the presented history titles, idf uses
// ln(1 + (N - df + 0.5)/(df + 0.5)) over the candidate corpus. Ties keep
// presentation order.
std::vector<std::size_t> bm25_rank(const protocol::EvalInstance& instance,
                                   const Bm25Params& params = {});

}  // namespace tempura::metrics
