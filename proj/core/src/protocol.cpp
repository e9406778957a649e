#include "tempura/protocol.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "tempura/rng.hpp"

namespace tempura::protocol {
namespace {

using nlohmann::json;

json item_to_json(const corpus::ItemRecord& item) {
  json j;
  j["id"] = item.item_id;
  j["title"] = item.title;
  if (!item.attributes.empty()) j["attributes"] = item.attributes;
  return j;
}

corpus::ItemRecord item_from_json(const json& j) {
  corpus::ItemRecord item;
  item.item_id = j.at("id").get<std::string>();
  item.title = j.at("title").get<std::string>();
  if (const auto it = j.find("attributes"); it != j.end()) {
    item.attributes = it->get<std::vector<std::string>>();
  }
  return item;
}

}  // namespace

std::vector<std::string> EvalInstance::candidate_titles() const {
  std::vector<std::string> titles;
  titles.reserve(candidates.size());
  for (const auto& item : candidates) titles.push_back(item.title);
  return titles;
}

std::vector<std::string> EvalInstance::history_titles() const {
  std::vector<std::string> titles;
  titles.reserve(history.size());
  for (const auto& item : history) titles.push_back(item.title);
  return titles;
}

std::vector<EvalInstance> make_instances(
    const std::vector<corpus::UserHistory>& histories,
    const corpus::Catalog& catalog, const SamplingConfig& config) {
  if (config.num_candidates < 2) {
    throw std::invalid_argument("make_instances: num_candidates must be >= 2");
  }
  if (config.max_history < 1) {
    throw std::invalid_argument("make_instances: max_history must be >= 1");
  }
  if (catalog.size() <= config.num_candidates) {
    throw std::invalid_argument(
        "make_instances: catalog too small for the candidate set");
  }

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < histories.size(); ++i) {
    if (histories[i].events.size() >= 2) eligible.push_back(i);
  }

  rng::Sampler user_sampler(rng::derive_seed(config.seed, "user-sample"));
  const std::size_t take = std::min(config.num_users, eligible.size());
  std::vector<std::size_t> picked =
      user_sampler.sample_indices(eligible.size(), take);

  std::vector<EvalInstance> instances;
  instances.reserve(take);
  for (std::size_t ordinal = 0; ordinal < picked.size(); ++ordinal) {
    const corpus::UserHistory& user = histories[eligible[picked[ordinal]]];
    rng::Sampler sampler(
        rng::derive_seed(config.seed, "instance", ordinal));

    EvalInstance inst;
    inst.user_id = user.user_id;

    const corpus::Event& target_event = user.events.back();
    const corpus::ItemRecord* target = catalog.find(target_event.item_id);
    if (target == nullptr) {
      throw std::runtime_error("make_instances: target item not in catalog: " +
                               target_event.item_id);
    }

    std::unordered_set<std::string> seen_items;
    for (const corpus::Event& ev : user.events) seen_items.insert(ev.item_id);

    inst.full_history.reserve(user.events.size() - 1);
    for (std::size_t i = 0; i + 1 < user.events.size(); ++i) {
      const corpus::ItemRecord* item = catalog.find(user.events[i].item_id);
      if (item == nullptr) {
        throw std::runtime_error(
            "make_instances: history item not in catalog: " +
            user.events[i].item_id);
      }
      inst.full_history.push_back(*item);
    }
    inst.full_history_len = inst.full_history.size();
    const std::size_t window =
        std::min(config.max_history, inst.full_history.size());
    inst.history.assign(inst.full_history.end() - window,
                        inst.full_history.end());

    // Negatives: uniform without replacement from the catalog minus the
    // user's entire interaction history (window *and* older events), so no
    // presented negative is a false negative.
    std::vector<std::size_t> pool;
    pool.reserve(catalog.size());
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (!seen_items.contains(catalog.at(i).item_id)) pool.push_back(i);
    }
    const std::size_t need = config.num_candidates - 1;
    if (pool.size() < need) {
      throw std::runtime_error(
          "make_instances: catalog too small to draw negatives for user " +
          user.user_id);
    }
    std::vector<std::size_t> negative_picks =
        sampler.sample_indices(pool.size(), need);

    inst.candidates.reserve(config.num_candidates);
    inst.candidates.push_back(*target);
    for (const std::size_t p : negative_picks) {
      inst.candidates.push_back(catalog.at(pool[p]));
    }
    // Presentation order: seeded uniform shuffle, so the ground-truth slot
    // is uniform over the candidate positions.
    std::vector<std::size_t> perm(inst.candidates.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    sampler.shuffle(perm);
    std::vector<corpus::ItemRecord> shuffled(inst.candidates.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled[i] = std::move(inst.candidates[perm[i]]);
      if (perm[i] == 0) inst.ground_truth_index = i;
    }
    inst.candidates = std::move(shuffled);

    instances.push_back(std::move(inst));
  }
  return instances;
}

EvalInstance truncate_history(const EvalInstance& instance,
                              std::size_t max_history) {
  if (max_history < 1) {
    throw std::invalid_argument("truncate_history: max_history must be >= 1");
  }
  EvalInstance out = instance;
  const std::size_t window = std::min(max_history, out.full_history.size());
  out.history.assign(out.full_history.end() - window, out.full_history.end());
  return out;
}

EvalInstance randomize_items(const EvalInstance& instance,
                             std::uint64_t seed) {
  EvalInstance out = instance;
  rng::Sampler sampler(seed);
  sampler.shuffle(out.history);
  sampler.shuffle(out.full_history);
  return out;
}

ClusterAnalysis randomize_clusters(const ClusterAnalysis& analysis,
                                   std::uint64_t seed) {
  ClusterAnalysis out = analysis;
  rng::Sampler sampler(seed);
  sampler.shuffle(out.clusters);
  return out;
}

std::string instance_to_json_line(const EvalInstance& instance) {
  json j;
  j["user_id"] = instance.user_id;
  j["full_history_len"] = instance.full_history_len;
  j["ground_truth_index"] = instance.ground_truth_index;
  j["history"] = json::array();
  for (const auto& item : instance.history) j["history"].push_back(item_to_json(item));
  j["full_history"] = json::array();
  for (const auto& item : instance.full_history) {
    j["full_history"].push_back(item_to_json(item));
  }
  j["candidates"] = json::array();
  for (const auto& item : instance.candidates) {
    j["candidates"].push_back(item_to_json(item));
  }
  return j.dump();
}

EvalInstance instance_from_json_line(const std::string& line) {
  const json j = json::parse(line);
  EvalInstance inst;
  inst.user_id = j.at("user_id").get<std::string>();
  inst.full_history_len = j.at("full_history_len").get<std::size_t>();
  inst.ground_truth_index = j.at("ground_truth_index").get<std::size_t>();
  for (const auto& v : j.at("history")) inst.history.push_back(item_from_json(v));
  for (const auto& v : j.at("full_history")) {
    inst.full_history.push_back(item_from_json(v));
  }
  for (const auto& v : j.at("candidates")) {
    inst.candidates.push_back(item_from_json(v));
  }
  return inst;
}

void write_instances_jsonl(const std::string& path,
                           const std::vector<EvalInstance>& instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const EvalInstance& inst : instances) {
    out << instance_to_json_line(inst) << '\n';
  }
}

std::vector<EvalInstance> read_instances_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<EvalInstance> instances;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    instances.push_back(instance_from_json_line(line));
  }
  return instances;
}

}  // namespace tempura::protocol
