#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tempura::ensemble {

// Positional-score aggregate of several rankings over the same m candidates.
struct ScoredRanking {
  std::vector<long long> scores;         // indexed by candidate
  std::vector<std::size_t> final_order;  // permutation, best first
  std::vector<std::string> sources;      // strategy tags that contributed
};

// Positional points for one ranking: the item in 1st place of an m-item
// ranking receives m points, 2nd place m-1, decreasing by one per rank.
std::vector<long long> borda_scores(const std::vector<std::size_t>& order);

// Sums positional points across rankings. The final order sorts by score
// descending, then best individual position ascending, then presentation
// index ascending, so the result is a deterministic total order.
ScoredRanking aggregate(const std::vector<std::vector<std::size_t>>& rankings,
                        const std::vector<std::size_t>& presentation_order,
                        std::vector<std::string> sources = {});

}  // namespace tempura::ensemble
