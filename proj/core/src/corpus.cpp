#include "tempura/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tempura/rank_parser.hpp"

namespace tempura::corpus {
namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void check_malformed_ratio(const std::string& path, std::size_t malformed,
                           std::size_t total) {
  if (total > 0 && malformed * 20 > total) {  // strictly more than 5%
    std::ostringstream msg;
    msg << path << ": " << malformed << " of " << total
        << " lines malformed (>5%), wrong file?";
    throw std::runtime_error(msg.str());
  }
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

bool parse_timestamp(const std::string& s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && out >= 0;
}

bool titled(const ItemRecord& item) {
  return !rankparse::normalize_title(item.title).empty();
}

}  // namespace

bool Catalog::add(ItemRecord record) {
  const auto [it, inserted] =
      index_.try_emplace(record.item_id, items_.size());
  if (inserted) items_.push_back(std::move(record));
  return inserted;
}

const ItemRecord* Catalog::find(std::string_view item_id) const {
  const auto it = index_.find(std::string(item_id));
  return it == index_.end() ? nullptr : &items_[it->second];
}

std::string latin1_to_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (const char ch : bytes) {
    const auto b = static_cast<unsigned char>(ch);
    if (b < 0x80) {
      out.push_back(static_cast<char>(b));
    } else {
      out.push_back(static_cast<char>(0xC0 | (b >> 6)));
      out.push_back(static_cast<char>(0x80 | (b & 0x3F)));
    }
  }
  return out;
}

IngestResult load_movielens(const std::string& ratings_path,
                            const std::string& movies_path) {
  IngestResult result;

  for (const std::string& raw : read_lines(movies_path)) {
    if (raw.empty()) continue;
    ++result.stats.item_lines;
    const std::string line = latin1_to_utf8(raw);
    // MovieID::Title::Genres; the title may itself contain "::", so take the
    // first separator and the last one.
    const std::size_t first = line.find("::");
    const std::size_t last = line.rfind("::");
    if (first == std::string::npos || last == first) {
      ++result.stats.item_malformed;
      continue;
    }
    ItemRecord item;
    item.item_id = line.substr(0, first);
    item.title = line.substr(first + 2, last - first - 2);
    if (item.item_id.empty() || !titled(item)) {
      ++result.stats.item_malformed;
      continue;
    }
    for (std::string& genre : split(line.substr(last + 2), "|")) {
      if (!genre.empty()) item.attributes.push_back(std::move(genre));
    }
    result.catalog.add(std::move(item));
  }
  check_malformed_ratio(movies_path, result.stats.item_malformed,
                        result.stats.item_lines);

  for (const std::string& raw : read_lines(ratings_path)) {
    if (raw.empty()) continue;
    ++result.stats.interaction_lines;
    const std::string line = latin1_to_utf8(raw);
    const std::vector<std::string> fields = split(line, "::");
    std::int64_t ts = 0;
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty() ||
        !parse_timestamp(fields[3], ts)) {
      ++result.stats.interaction_malformed;
      continue;
    }
    if (result.catalog.find(fields[1]) == nullptr) {
      ++result.stats.dropped_interactions;
      continue;
    }
    result.interactions.push_back({fields[0], fields[1], ts});
  }
  check_malformed_ratio(ratings_path, result.stats.interaction_malformed,
                        result.stats.interaction_lines);

  return result;
}

IngestResult load_amazon(const std::string& reviews_path,
                         const std::string& meta_path) {
  IngestResult result;

  auto field = [](const json& j,
                  std::initializer_list<const char*> names) -> const json* {
    for (const char* name : names) {
      if (const auto it = j.find(name); it != j.end()) return &*it;
    }
    return nullptr;
  };

  for (const std::string& line : read_lines(meta_path)) {
    if (line.empty()) continue;
    ++result.stats.item_lines;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) {
      ++result.stats.item_malformed;
      continue;
    }
    const json* asin = field(j, {"asin", "product_id"});
    const json* title = field(j, {"title"});
    if (asin == nullptr || !asin->is_string() || title == nullptr ||
        !title->is_string()) {
      ++result.stats.item_malformed;
      continue;
    }
    ItemRecord item;
    item.item_id = asin->get<std::string>();
    item.title = title->get<std::string>();
    if (item.item_id.empty() || !titled(item)) {
      ++result.stats.item_malformed;
      continue;
    }
    if (const json* cats = field(j, {"category", "categories"})) {
      // "categories" is sometimes a nested list; flatten one level.
      auto push_strings = [&item](const json& arr) {
        for (const auto& v : arr) {
          if (v.is_string()) item.attributes.push_back(v.get<std::string>());
        }
      };
      if (cats->is_array()) {
        for (const auto& v : *cats) {
          if (v.is_array()) {
            push_strings(v);
          } else if (v.is_string()) {
            item.attributes.push_back(v.get<std::string>());
          }
        }
      }
    }
    result.catalog.add(std::move(item));
  }
  check_malformed_ratio(meta_path, result.stats.item_malformed,
                        result.stats.item_lines);

  for (const std::string& line : read_lines(reviews_path)) {
    if (line.empty()) continue;
    ++result.stats.interaction_lines;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) {
      ++result.stats.interaction_malformed;
      continue;
    }
    const json* reviewer = field(j, {"reviewerID", "reviewer_id"});
    const json* asin = field(j, {"asin", "product_id"});
    const json* time = field(j, {"unixReviewTime", "timestamp"});
    if (reviewer == nullptr || !reviewer->is_string() || asin == nullptr ||
        !asin->is_string() || time == nullptr ||
        !time->is_number_integer() || time->get<std::int64_t>() < 0) {
      ++result.stats.interaction_malformed;
      continue;
    }
    const std::string item_id = asin->get<std::string>();
    if (result.catalog.find(item_id) == nullptr) {
      ++result.stats.dropped_interactions;
      continue;
    }
    result.interactions.push_back(
        {reviewer->get<std::string>(), item_id, time->get<std::int64_t>()});
  }
  check_malformed_ratio(reviews_path, result.stats.interaction_malformed,
                        result.stats.interaction_lines);

  return result;
}

HistoriesResult build_histories(
    const std::vector<InteractionRecord>& interactions, const Catalog& catalog,
    std::size_t min_length) {
  HistoriesResult result;

  std::vector<UserHistory> grouped;
  std::unordered_map<std::string, std::size_t> user_index;
  for (const InteractionRecord& rec : interactions) {
    if (catalog.find(rec.item_id) == nullptr) {
      ++result.stats.events_dropped;
      continue;
    }
    const auto [it, inserted] =
        user_index.try_emplace(rec.user_id, grouped.size());
    if (inserted) grouped.push_back({rec.user_id, {}});
    grouped[it->second].events.push_back({rec.item_id, rec.timestamp});
  }

  for (UserHistory& history : grouped) {
    std::stable_sort(history.events.begin(), history.events.end(),
                     [](const Event& a, const Event& b) {
                       return a.timestamp < b.timestamp;
                     });
    if (history.events.size() < min_length) {
      ++result.stats.users_excluded;
      result.stats.events_excluded += history.events.size();
      continue;
    }
    ++result.stats.users_kept;
    result.stats.events_kept += history.events.size();
    result.histories.push_back(std::move(history));
  }

  return result;
}

}  // namespace tempura::corpus
