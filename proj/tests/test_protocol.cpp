#include <doctest.h>

#include <set>
#include <unordered_set>

#include "tempura/protocol.hpp"
#include "tempura/rng.hpp"
#include "tempura/synthetic.hpp"
#include "test_util.hpp"

using namespace tempura;

TEST_SUITE_BEGIN("protocol");

namespace {

corpus::Catalog small_catalog(std::size_t n) {
  corpus::Catalog catalog;
  for (std::size_t i = 0; i < n; ++i) catalog.add(testutil::make_item("m", i));
  return catalog;
}

corpus::UserHistory walk(const std::string& user, std::size_t first,
                         std::size_t count) {
  corpus::UserHistory history;
  history.user_id = user;
  for (std::size_t i = 0; i < count; ++i) {
    history.events.push_back({"m" + std::to_string(first + i),
                              static_cast<std::int64_t>(100 + i)});
  }
  return history;
}

std::string dump_all(const std::vector<protocol::EvalInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += protocol::instance_to_json_line(inst);
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("leave-one-out holds out the last event") {
  const corpus::Catalog catalog = small_catalog(40);
  const std::vector<corpus::UserHistory> histories = {walk("u", 0, 3)};
  protocol::SamplingConfig config;
  config.num_users = 1;
  config.seed = 11;

  const auto instances = protocol::make_instances(histories, catalog, config);
  REQUIRE(instances.size() == 1);
  const auto& inst = instances[0];
  CHECK(inst.candidates[inst.ground_truth_index].item_id == "m2");
  REQUIRE(inst.history.size() == 2);
  CHECK(inst.history[0].item_id == "m0");
  CHECK(inst.history[1].item_id == "m1");
  // negatives avoid the user's full history
  for (std::size_t i = 0; i < inst.candidates.size(); ++i) {
    if (i == inst.ground_truth_index) continue;
    CHECK(inst.candidates[i].item_id != "m0");
    CHECK(inst.candidates[i].item_id != "m1");
    CHECK(inst.candidates[i].item_id != "m2");
  }
}

TEST_CASE("every instance presents the configured number of candidates") {
  const corpus::Catalog catalog = small_catalog(60);
  std::vector<corpus::UserHistory> histories;
  for (std::size_t u = 0; u < 5; ++u) {
    histories.push_back(walk("u" + std::to_string(u), u, 8));
  }
  protocol::SamplingConfig config;
  config.num_users = 5;
  config.seed = 3;

  const auto instances = protocol::make_instances(histories, catalog, config);
  REQUIRE(instances.size() == 5);
  for (const auto& inst : instances) {
    CHECK(inst.candidates.size() == 20);
    std::set<std::string> ids;
    for (const auto& c : inst.candidates) ids.insert(c.item_id);
    CHECK(ids.size() == 20);  // no duplicates, ground truth exactly once
  }
}

TEST_CASE("identical inputs and seed give byte-identical instances") {
  const corpus::Catalog catalog = small_catalog(50);
  std::vector<corpus::UserHistory> histories;
  for (std::size_t u = 0; u < 6; ++u) {
    histories.push_back(walk("u" + std::to_string(u), u * 2, 7));
  }
  protocol::SamplingConfig config;
  config.num_users = 4;
  config.seed = 99;

  const auto a = protocol::make_instances(histories, catalog, config);
  const auto b = protocol::make_instances(histories, catalog, config);
  CHECK(dump_all(a) == dump_all(b));

  config.seed = 100;
  const auto c = protocol::make_instances(histories, catalog, config);
  CHECK(dump_all(a) != dump_all(c));
}

TEST_CASE("catalog too small to draw negatives names the user") {
  const corpus::Catalog catalog = small_catalog(21);
  const std::vector<corpus::UserHistory> histories = {walk("u-starved", 0, 5)};
  protocol::SamplingConfig config;
  config.num_users = 1;
  config.seed = 5;
  // 21 items minus 5 history items leaves 16 < 19 negatives.
  CHECK_THROWS_WITH_AS(protocol::make_instances(histories, catalog, config),
                       doctest::Contains("u-starved"), std::runtime_error);
}

TEST_CASE("truncate_history keeps the most recent window") {
  protocol::EvalInstance inst = testutil::make_instance(40, 20);
  const auto t15 = protocol::truncate_history(inst, 15);
  REQUIRE(t15.history.size() == 15);
  // events 26..40 in 1-based terms
  CHECK(t15.history.front().title == testutil::item_title("Hist", 25));
  CHECK(t15.history.back().title == testutil::item_title("Hist", 39));
  CHECK(t15.full_history_len == 40);

  const auto t7 = protocol::truncate_history(testutil::make_instance(7, 20), 15);
  CHECK(t7.history.size() == 7);

  const auto t1 = protocol::truncate_history(inst, 1);
  REQUIRE(t1.history.size() == 1);
  CHECK(t1.history[0].title == testutil::item_title("Hist", 39));
}

TEST_CASE("randomize_items permutes the history only") {
  protocol::EvalInstance inst = testutil::make_instance(12, 20, 4);
  const auto shuffled = protocol::randomize_items(inst, 77);

  CHECK(shuffled.candidates == inst.candidates);
  CHECK(shuffled.ground_truth_index == inst.ground_truth_index);

  std::multiset<std::string> before, after;
  for (const auto& it : inst.history) before.insert(it.title);
  for (const auto& it : shuffled.history) after.insert(it.title);
  CHECK(before == after);

  const auto again = protocol::randomize_items(inst, 77);
  CHECK(protocol::instance_to_json_line(again) ==
        protocol::instance_to_json_line(shuffled));
}

TEST_CASE("randomize_items on a length-1 history is a no-op") {
  protocol::EvalInstance inst = testutil::make_instance(1, 20);
  const auto shuffled = protocol::randomize_items(inst, 123);
  CHECK(shuffled.history == inst.history);
}

TEST_CASE("randomize_clusters permutes cluster order, members intact") {
  ClusterAnalysis analysis;
  analysis.clusters.push_back({{"A", "B"}, "first"});
  analysis.clusters.push_back({{"C"}, "second"});
  analysis.clusters.push_back({{"D", "E", "F"}, "third"});

  const auto single = protocol::randomize_clusters({{{{"A"}, "only"}}, 0}, 9);
  CHECK(single.clusters.size() == 1);
  CHECK(single.clusters[0].summary == "only");

  const auto shuffled = protocol::randomize_clusters(analysis, 4);
  REQUIRE(shuffled.clusters.size() == 3);
  std::multiset<std::string> summaries;
  for (const auto& c : shuffled.clusters) {
    summaries.insert(c.summary);
    // member order inside each cluster is untouched
    for (const auto& original : analysis.clusters) {
      if (original.summary == c.summary) {
        CHECK(original.member_titles == c.member_titles);
      }
    }
  }
  CHECK(summaries == std::multiset<std::string>{"first", "second", "third"});
}

TEST_CASE("double randomization still preserves the item multiset") {
  protocol::EvalInstance inst = testutil::make_instance(9, 20);
  const auto twice =
      protocol::randomize_items(protocol::randomize_items(inst, 1), 2);
  std::multiset<std::string> before, after;
  for (const auto& it : inst.history) before.insert(it.title);
  for (const auto& it : twice.history) after.insert(it.title);
  CHECK(before == after);
}

TEST_CASE("ground-truth presentation position is uniform over slots") {
  // 10,000 seeded draws into 20 slots; chi-square df=19 at the 5% level.
  const corpus::Catalog catalog = small_catalog(60);
  const std::vector<corpus::UserHistory> histories = {walk("u", 0, 6)};
  std::vector<std::size_t> counts(20, 0);
  const std::size_t draws = 10000;
  for (std::size_t s = 0; s < draws; ++s) {
    protocol::SamplingConfig config;
    config.num_users = 1;
    config.seed = 1000 + s;
    const auto instances =
        protocol::make_instances(histories, catalog, config);
    ++counts[instances[0].ground_truth_index];
  }
  const double expected = static_cast<double>(draws) / 20.0;
  double chi2 = 0.0;
  for (const std::size_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < 30.1435);
}

TEST_CASE("instances survive a jsonl round trip") {
  const corpus::Catalog catalog = small_catalog(50);
  std::vector<corpus::UserHistory> histories;
  for (std::size_t u = 0; u < 4; ++u) {
    histories.push_back(walk("u" + std::to_string(u), u, 9));
  }
  protocol::SamplingConfig config;
  config.num_users = 4;
  config.seed = 21;
  const auto instances = protocol::make_instances(histories, catalog, config);

  testutil::TempDir dir;
  protocol::write_instances_jsonl(dir.file("instances.jsonl"), instances);
  const auto loaded = protocol::read_instances_jsonl(dir.file("instances.jsonl"));
  CHECK(dump_all(loaded) == dump_all(instances));
}

TEST_CASE("sampling caps at the number of eligible users") {
  const corpus::Catalog catalog = small_catalog(50);
  std::vector<corpus::UserHistory> histories = {walk("a", 0, 5),
                                                walk("b", 5, 5)};
  protocol::SamplingConfig config;
  config.num_users = 200;
  config.seed = 7;
  const auto instances = protocol::make_instances(histories, catalog, config);
  CHECK(instances.size() == 2);
}

TEST_SUITE_END();
