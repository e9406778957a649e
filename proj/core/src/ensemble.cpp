#include "tempura/ensemble.hpp"

#include <algorithm>
#include <stdexcept>

namespace tempura::ensemble {
namespace {

void require_permutation(const std::vector<std::size_t>& order) {
  std::vector<bool> seen(order.size(), false);
  for (const std::size_t idx : order) {
    if (idx >= order.size() || seen[idx]) {
      throw std::invalid_argument("ranking is not a permutation of 0..m-1");
    }
    seen[idx] = true;
  }
}

}  // namespace

std::vector<long long> borda_scores(const std::vector<std::size_t>& order) {
  require_permutation(order);
  const std::size_t m = order.size();
  std::vector<long long> scores(m, 0);
  for (std::size_t pos = 0; pos < m; ++pos) {
    scores[order[pos]] = static_cast<long long>(m - pos);
  }
  return scores;
}

ScoredRanking aggregate(const std::vector<std::vector<std::size_t>>& rankings,
                        const std::vector<std::size_t>& presentation_order,
                        std::vector<std::string> sources) {
  if (rankings.empty()) {
    throw std::invalid_argument("aggregate: needs at least one ranking");
  }
  const std::size_t m = rankings.front().size();
  require_permutation(presentation_order);
  if (presentation_order.size() != m) {
    throw std::invalid_argument(
        "aggregate: presentation order size does not match rankings");
  }

  ScoredRanking result;
  result.sources = std::move(sources);
  result.scores.assign(m, 0);
  std::vector<std::size_t> best_position(m, m);  // 0-based, lower is better
  for (const auto& ranking : rankings) {
    if (ranking.size() != m) {
      throw std::invalid_argument("aggregate: rankings disagree on m");
    }
    const std::vector<long long> points = borda_scores(ranking);
    for (std::size_t i = 0; i < m; ++i) result.scores[i] += points[i];
    for (std::size_t pos = 0; pos < m; ++pos) {
      best_position[ranking[pos]] =
          std::min(best_position[ranking[pos]], pos);
    }
  }

  std::vector<std::size_t> presentation_rank(m, 0);
  for (std::size_t pos = 0; pos < m; ++pos) {
    presentation_rank[presentation_order[pos]] = pos;
  }

  result.final_order.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.final_order[i] = i;
  std::sort(result.final_order.begin(), result.final_order.end(),
            [&](std::size_t a, std::size_t b) {
              if (result.scores[a] != result.scores[b]) {
                return result.scores[a] > result.scores[b];
              }
              if (best_position[a] != best_position[b]) {
                return best_position[a] < best_position[b];
              }
              return presentation_rank[a] < presentation_rank[b];
            });
  return result;
}

}  // namespace tempura::ensemble
