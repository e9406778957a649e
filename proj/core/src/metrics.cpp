#include "tempura/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace tempura::metrics {

double ndcg_at_k(std::size_t rank_of_truth, int k) {
  if (rank_of_truth < 1) {
    throw std::invalid_argument("ndcg_at_k: rank is 1-based");
  }
  if (k < 1) throw std::invalid_argument("ndcg_at_k: k must be >= 1");
  if (rank_of_truth > static_cast<std::size_t>(k)) return 0.0;
  return 1.0 / std::log2(static_cast<double>(rank_of_truth) + 1.0);
}

double mean_ndcg(const std::vector<std::size_t>& ranks, int k) {
  if (ranks.empty()) {
    throw std::invalid_argument("mean_ndcg: empty rank list");
  }
  double sum = 0.0;
  for (const std::size_t rank : ranks) sum += ndcg_at_k(rank, k);
  return 100.0 * sum / static_cast<double>(ranks.size());
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      current.push_back(c);
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::size_t> bm25_rank(const protocol::EvalInstance& instance,
                                   const Bm25Params& params) {
  if (params.k1 <= 0.0 || params.b < 0.0 || params.b > 1.0) {
    throw std::invalid_argument("bm25_rank: invalid parameters");
  }
  const std::size_t m = instance.candidates.size();

  // Query: bag of tokens from the presented (truncated) history titles.
  std::vector<std::string> query;
  for (const auto& item : instance.history) {
    for (std::string& tok : tokenize(item.title)) {
      query.push_back(std::move(tok));
    }
  }

  std::vector<std::unordered_map<std::string, std::size_t>> term_freq(m);
  std::vector<double> doc_len(m, 0.0);
  double total_len = 0.0;
  for (std::size_t d = 0; d < m; ++d) {
    for (const std::string& tok : tokenize(instance.candidates[d].title)) {
      ++term_freq[d][tok];
      doc_len[d] += 1.0;
    }
    total_len += doc_len[d];
  }
  const double avg_len = m > 0 ? total_len / static_cast<double>(m) : 0.0;

  std::unordered_map<std::string, std::size_t> doc_freq;
  for (std::size_t d = 0; d < m; ++d) {
    for (const auto& [tok, tf] : term_freq[d]) ++doc_freq[tok];
  }

  std::vector<double> score(m, 0.0);
  for (const std::string& tok : query) {
    const auto df_it = doc_freq.find(tok);
    if (df_it == doc_freq.end()) continue;
    const double df = static_cast<double>(df_it->second);
    const double n = static_cast<double>(m);
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (std::size_t d = 0; d < m; ++d) {
      const auto tf_it = term_freq[d].find(tok);
      if (tf_it == term_freq[d].end()) continue;
      const double tf = static_cast<double>(tf_it->second);
      const double norm =
          avg_len > 0.0
              ? params.k1 * (1.0 - params.b + params.b * doc_len[d] / avg_len)
              : params.k1;
      score[d] += idf * tf * (params.k1 + 1.0) / (tf + norm);
    }
  }

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&score](std::size_t a, std::size_t b) {
                     return score[a] > score[b];
                   });
  return order;
}

}  // namespace tempura::metrics
