#include "tempura/rank_parser.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>

namespace tempura::rankparse {
namespace {

// Decodes the next UTF-8 codepoint; invalid sequences are consumed one byte
// at a time and read as Latin-1.
std::pair<std::uint32_t, std::size_t> next_codepoint(std::string_view s,
                                                     std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1};
  }
  if (i + len > s.size()) return {b0, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {b0, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Latin-1 supplement letters folded to ASCII; returns nullptr when the
// codepoint has no fold here.
const char* latin1_fold(std::uint32_t cp) {
  switch (cp) {
    case 0xC0: case 0xC1: case 0xC2: case 0xC3: case 0xC4: case 0xC5:
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
      return "a";
    case 0xC6: case 0xE6: return "ae";
    case 0xC7: case 0xE7: return "c";
    case 0xC8: case 0xC9: case 0xCA: case 0xCB:
    case 0xE8: case 0xE9: case 0xEA: case 0xEB:
      return "e";
    case 0xCC: case 0xCD: case 0xCE: case 0xCF:
    case 0xEC: case 0xED: case 0xEE: case 0xEF:
      return "i";
    case 0xD0: case 0xF0: return "d";
    case 0xD1: case 0xF1: return "n";
    case 0xD2: case 0xD3: case 0xD4: case 0xD5: case 0xD6: case 0xD8:
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8:
      return "o";
    case 0xD9: case 0xDA: case 0xDB: case 0xDC:
    case 0xF9: case 0xFA: case 0xFB: case 0xFC:
      return "u";
    case 0xDD: case 0xFD: case 0xFF: return "y";
    case 0xDE: case 0xFE: return "th";
    case 0xDF: return "ss";
    default: return nullptr;
  }
}

bool is_typographic_punct(std::uint32_t cp) {
  return (cp >= 0x2010 && cp <= 0x2027) ||  // dashes, quotes, ellipsis
         cp == 0x00A0 || cp == 0x00AB || cp == 0x00BB || cp == 0x2022 ||
         (cp >= 0x2039 && cp <= 0x203A);
}

}  // namespace

std::string normalize_title(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  auto push = [&out, &pending_space](char c) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const auto [cp, len] = next_codepoint(text, i);
    i += len;
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (c >= '0' && c <= '9') {
        push(c);
      } else if (c >= 'a' && c <= 'z') {
        push(c);
      } else if (c >= 'A' && c <= 'Z') {
        push(static_cast<char>(c - 'A' + 'a'));
      } else {
        pending_space = true;
      }
    } else if (const char* fold = latin1_fold(cp)) {
      for (const char* p = fold; *p != '\0'; ++p) push(*p);
    } else if (cp < 0x100 || is_typographic_punct(cp)) {
      pending_space = true;
    } else if (cp >= 0xFF01 && cp <= 0xFF5E) {
      // fullwidth ASCII forms
      const auto ascii = static_cast<char>(cp - 0xFF01 + 0x21);
      if ((ascii >= '0' && ascii <= '9') || (ascii >= 'a' && ascii <= 'z')) {
        push(ascii);
      } else if (ascii >= 'A' && ascii <= 'Z') {
        push(static_cast<char>(ascii - 'A' + 'a'));
      } else {
        pending_space = true;
      }
    } else {
      // Other scripts pass through untouched; equality stays consistent
      // because both sides of a comparison are normalized the same way.
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      append_utf8(out, cp);
    }
  }
  return out;
}

std::string_view strip_enumeration(std::string_view line) {
  std::size_t i = 0;
  auto skip_spaces = [&] {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  };
  skip_spaces();
  for (int round = 0; round < 3; ++round) {
    const std::size_t before = i;
    // bullet markers
    while (i < line.size() &&
           (line[i] == '-' || line[i] == '*' || line[i] == '>' ||
            line[i] == '#')) {
      ++i;
    }
    // UTF-8 bullet
    if (line.substr(i).starts_with("\xE2\x80\xA2")) i += 3;
    skip_spaces();
    // digit block such as "12.", "(3)", "[4]", "5:", "6)"
    std::size_t j = i;
    if (j < line.size() && (line[j] == '(' || line[j] == '[')) ++j;
    std::size_t digits = 0;
    while (j < line.size() && line[j] >= '0' && line[j] <= '9') {
      ++j;
      ++digits;
    }
    if (digits > 0 && j < line.size() &&
        (line[j] == '.' || line[j] == ')' || line[j] == ']' ||
         line[j] == ':')) {
      ++j;
      i = j;
      skip_spaces();
    }
    if (i == before) break;
  }
  return line.substr(i);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(a.size() + 1);
  std::vector<std::size_t> curr(a.size() + 1);
  for (std::size_t i = 0; i <= a.size(); ++i) prev[i] = i;
  for (std::size_t j = 1; j <= b.size(); ++j) {
    curr[0] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      const std::size_t sub = prev[i - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[i] = std::min({prev[i] + 1, curr[i - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[a.size()];
}

namespace {

std::optional<std::size_t> match_normalized(
    const std::string& line, const std::vector<std::string>& titles) {
  if (line.empty()) return std::nullopt;

  // (a) exact
  for (std::size_t i = 0; i < titles.size(); ++i) {
    if (titles[i] == line) return i;
  }

  // (b) containment, either direction; must be unique
  std::optional<std::size_t> contained;
  std::size_t contained_count = 0;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    if (titles[i].empty()) continue;
    if (line.find(titles[i]) != std::string::npos ||
        titles[i].find(line) != std::string::npos) {
      contained = i;
      ++contained_count;
    }
  }
  if (contained_count == 1) return contained;

  // (c) smallest edit distance within 20% of the title length; a tie for
  // the smallest distance stays unmatched rather than guessing.
  std::optional<std::size_t> best;
  std::size_t best_dist = 0;
  bool tied = false;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    if (titles[i].empty()) continue;
    const std::size_t limit = (titles[i].size() + 4) / 5;  // ceil(0.2*len)
    const std::size_t dist = edit_distance(line, titles[i]);
    if (dist > limit) continue;
    if (!best || dist < best_dist) {
      best = i;
      best_dist = dist;
      tied = false;
    } else if (dist == best_dist) {
      tied = true;
    }
  }
  if (best && !tied) return best;
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> match_title(
    std::string_view line, const std::vector<std::string>& normalized_titles) {
  const std::string stripped = normalize_title(strip_enumeration(line));
  if (auto hit = match_normalized(stripped, normalized_titles)) return hit;
  const std::string raw = normalize_title(line);
  if (raw != stripped) {
    if (auto hit = match_normalized(raw, normalized_titles)) return hit;
  }
  return std::nullopt;
}

ParsedRanking parse_ranking(const std::string& text,
                            const std::vector<std::string>& candidate_titles) {
  if (candidate_titles.empty()) {
    throw std::invalid_argument("parse_ranking: no candidates");
  }
  std::vector<std::string> normalized;
  normalized.reserve(candidate_titles.size());
  for (const std::string& t : candidate_titles) {
    normalized.push_back(normalize_title(t));
  }
  {
    std::unordered_set<std::string> seen(normalized.begin(), normalized.end());
    if (seen.size() != normalized.size()) {
      throw std::invalid_argument(
          "parse_ranking: candidate titles collide after normalization");
    }
  }

  ParsedRanking result;
  const std::size_t m = candidate_titles.size();
  std::vector<bool> claimed(m, false);

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (normalize_title(line).empty()) continue;

    const auto hit = match_title(line, normalized);
    if (!hit) {
      result.unmatched_lines.emplace_back(line);
      continue;
    }
    if (claimed[*hit]) continue;  // first match wins
    claimed[*hit] = true;
    result.order.push_back(*hit);
  }

  result.matched_count = result.order.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!claimed[i]) {
      result.appended_missing.push_back(i);
      result.order.push_back(i);
    }
  }
  result.valid = result.matched_count >= (m + 1) / 2;
  return result;
}

}  // namespace tempura::rankparse
