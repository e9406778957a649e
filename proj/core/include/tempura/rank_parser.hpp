#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tempura::rankparse {

// Ordered candidate indices recovered from free-text ranking output.
// `order` is always a full permutation of 0..m-1: candidates the text never
// mentioned are appended in presentation order and listed in
// `appended_missing`. `valid` is false when fewer than half the candidates
// were actually matched; downstream aggregation excludes such parses.
struct ParsedRanking {
  std::vector<std::size_t> order;
  std::size_t matched_count = 0;
  std::vector<std::size_t> appended_missing;
  std::vector<std::string> unmatched_lines;
  bool valid = false;
};

// Lowercases, folds Latin-1 accents and common typographic characters,
// collapses punctuation runs to single spaces, and trims. Idempotent.
std::string normalize_title(std::string_view text);

// Strips one leading enumeration prefix: bullets, "1.", "(2)", "3)", "4:".
std::string_view strip_enumeration(std::string_view line);

std::size_t edit_distance(std::string_view a, std::string_view b);

// Matches one output line against candidate titles: exact normalized
// equality, else unique containment, else unique smallest edit distance
// within 20% of the title length. Ties stay unmatched.
std::optional<std::size_t> match_title(
    std::string_view line, const std::vector<std::string>& normalized_titles);

ParsedRanking parse_ranking(const std::string& text,
                            const std::vector<std::string>& candidate_titles);

}  // namespace tempura::rankparse
