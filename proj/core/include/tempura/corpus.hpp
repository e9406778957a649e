#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tempura::corpus {

struct ItemRecord {
  std::string item_id;
  std::string title;
  std::vector<std::string> attributes;

  friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

struct InteractionRecord {
  std::string user_id;
  std::string item_id;
  std::int64_t timestamp = 0;

  friend bool operator==(const InteractionRecord&,
                         const InteractionRecord&) = default;
};

// Item store with deterministic iteration order (insertion order) and id
// lookup. Duplicate ids keep the first record seen.
class Catalog {
 public:
  bool add(ItemRecord record);
  const ItemRecord* find(std::string_view item_id) const;
  const ItemRecord& at(std::size_t index) const { return items_.at(index); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<ItemRecord>& items() const { return items_; }

 private:
  std::vector<ItemRecord> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Event {
  std::string item_id;
  std::int64_t timestamp = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// One user's interactions, oldest first. Equal timestamps keep the order the
// events had in the source file.
struct UserHistory {
  std::string user_id;
  std::vector<Event> events;

  friend bool operator==(const UserHistory&, const UserHistory&) = default;
};

struct IngestStats {
  std::size_t interaction_lines = 0;
  std::size_t interaction_malformed = 0;
  std::size_t item_lines = 0;
  std::size_t item_malformed = 0;
  // Interactions whose item has no (titled) catalog record.
  std::size_t dropped_interactions = 0;
};

struct IngestResult {
  Catalog catalog;
  std::vector<InteractionRecord> interactions;
  IngestStats stats;
};

// MovieLens-1M format: ratings lines `UserID::MovieID::Rating::Timestamp`,
// movies lines `MovieID::Title::Genres`. Files are decoded as Latin-1 and
// stored as UTF-8. Rating values are ignored; every rating is an interaction.
IngestResult load_movielens(const std::string& ratings_path,
                            const std::string& movies_path);

// Amazon Review format: one JSON record per line. Reviews need `reviewerID`,
// `asin` and `unixReviewTime`; metadata needs `asin` and a non-empty `title`.
IngestResult load_amazon(const std::string& reviews_path,
                         const std::string& meta_path);

struct HistoryStats {
  std::size_t users_kept = 0;
  std::size_t users_excluded = 0;
  std::size_t events_kept = 0;
  std::size_t events_excluded = 0;  // events of users below min_length
  std::size_t events_dropped = 0;   // events not resolvable in the catalog
};

struct HistoriesResult {
  std::vector<UserHistory> histories;
  HistoryStats stats;
};

// Groups interactions per user (first-appearance user order), sorts each
// user's events by timestamp with a stable sort, and excludes users with
// fewer than min_length resolvable events.
HistoriesResult build_histories(const std::vector<InteractionRecord>& interactions,
                                const Catalog& catalog,
                                std::size_t min_length);

std::string latin1_to_utf8(std::string_view bytes);

}  // namespace tempura::corpus
