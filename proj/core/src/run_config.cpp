#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tempura/harness.hpp"

namespace tempura::harness {
namespace {

using nlohmann::json;

std::string_view history_randomization_name(HistoryRandomization r) {
  return r == HistoryRandomization::Items ? "items" : "none";
}

std::string_view cluster_randomization_name(ClusterRandomization r) {
  return r == ClusterRandomization::Shuffle ? "shuffle" : "none";
}

HistoryRandomization history_randomization_from(const std::string& name) {
  if (name == "none") return HistoryRandomization::None;
  if (name == "items") return HistoryRandomization::Items;
  throw std::invalid_argument("unknown history_randomization: " + name);
}

ClusterRandomization cluster_randomization_from(const std::string& name) {
  if (name == "none") return ClusterRandomization::None;
  if (name == "shuffle") return ClusterRandomization::Shuffle;
  throw std::invalid_argument("unknown cluster_randomization: " + name);
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  RunConfig cfg;

  if (const auto it = j.find("dataset"); it != j.end()) {
    const json& d = *it;
    cfg.dataset.kind = d.value("kind", cfg.dataset.kind);
    if (const auto p = d.find("paths"); p != d.end()) {
      for (const auto& [key, value] : p->items()) {
        cfg.dataset.paths[key] = value.get<std::string>();
      }
    }
    cfg.dataset.min_history = d.value("min_history", cfg.dataset.min_history);
    cfg.dataset.synthetic_users =
        d.value("synthetic_users", cfg.dataset.synthetic_users);
    cfg.dataset.synthetic_catalog =
        d.value("synthetic_catalog", cfg.dataset.synthetic_catalog);
    cfg.dataset.synthetic_events =
        d.value("synthetic_events", cfg.dataset.synthetic_events);
  }

  if (const auto it = j.find("sampling"); it != j.end()) {
    const json& s = *it;
    cfg.sampling.num_users = s.value("num_users", cfg.sampling.num_users);
    cfg.sampling.num_candidates =
        s.value("num_candidates", cfg.sampling.num_candidates);
    cfg.sampling.max_history =
        s.value("max_history", cfg.sampling.max_history);
  }

  if (const auto it = j.find("strategies"); it != j.end()) {
    cfg.strategies = it->get<std::vector<std::string>>();
  }
  if (const auto it = j.find("ensemble"); it != j.end()) {
    cfg.ensemble_members = it->get<std::vector<std::string>>();
  }
  cfg.k = j.value("k", cfg.k);
  cfg.sample_size = j.value("sample_size", cfg.sample_size);
  cfg.repeats = j.value("repeats", cfg.repeats);

  if (const auto it = j.find("provider"); it != j.end()) {
    const json& p = *it;
    cfg.provider.kind = p.value("kind", cfg.provider.kind);
    cfg.provider.endpoint = p.value("endpoint", cfg.provider.endpoint);
    cfg.provider.api_key_env = p.value("api_key_env", cfg.provider.api_key_env);
    cfg.provider.auth_header = p.value("auth_header", cfg.provider.auth_header);
    cfg.provider.auth_prefix = p.value("auth_prefix", cfg.provider.auth_prefix);
    cfg.provider.model = p.value("model", cfg.provider.model);
    cfg.provider.temperature = p.value("temperature", cfg.provider.temperature);
    cfg.provider.max_output_tokens =
        p.value("max_output_tokens", cfg.provider.max_output_tokens);
    cfg.provider.requests_per_minute =
        p.value("requests_per_minute", cfg.provider.requests_per_minute);
    cfg.provider.max_in_flight =
        p.value("max_in_flight", cfg.provider.max_in_flight);
    cfg.provider.max_tries = p.value("max_tries", cfg.provider.max_tries);
    cfg.provider.timeout_seconds =
        p.value("timeout_seconds", cfg.provider.timeout_seconds);
  }

  if (const auto it = j.find("transcript"); it != j.end()) {
    cfg.transcript_mode = gateway::transcript_mode_from_name(
        it->value("mode", std::string("record")));
    cfg.transcript_dir = it->value("dir", cfg.transcript_dir);
  }

  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.max_prompt_tokens = j.value("max_prompt_tokens", cfg.max_prompt_tokens);
  if (const auto it = j.find("metric_ks"); it != j.end()) {
    cfg.metric_ks = it->get<std::vector<int>>();
  }
  cfg.history_randomization = history_randomization_from(
      j.value("history_randomization", std::string("none")));
  cfg.cluster_randomization = cluster_randomization_from(
      j.value("cluster_randomization", std::string("none")));

  if (cfg.strategies.empty()) {
    throw std::invalid_argument("config: strategy list must be nonempty");
  }
  if (cfg.repeats < 1) {
    throw std::invalid_argument("config: repeats must be >= 1");
  }
  for (const std::string& tag : cfg.strategies) {
    promptkit::strategy_from_tag(tag);  // validates
  }
  return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_json(const RunConfig& cfg) {
  json j;
  j["dataset"]["kind"] = cfg.dataset.kind;
  if (!cfg.dataset.paths.empty()) {
    for (const auto& [key, value] : cfg.dataset.paths) {
      j["dataset"]["paths"][key] = value;
    }
  }
  j["dataset"]["min_history"] = cfg.dataset.min_history;
  j["dataset"]["synthetic_users"] = cfg.dataset.synthetic_users;
  j["dataset"]["synthetic_catalog"] = cfg.dataset.synthetic_catalog;
  j["dataset"]["synthetic_events"] = cfg.dataset.synthetic_events;
  j["sampling"]["num_users"] = cfg.sampling.num_users;
  j["sampling"]["num_candidates"] = cfg.sampling.num_candidates;
  j["sampling"]["max_history"] = cfg.sampling.max_history;
  j["strategies"] = cfg.strategies;
  j["ensemble"] = cfg.ensemble_members;
  j["k"] = cfg.k;
  j["sample_size"] = cfg.sample_size;
  j["repeats"] = cfg.repeats;
  j["provider"]["kind"] = cfg.provider.kind;
  j["provider"]["endpoint"] = cfg.provider.endpoint;
  j["provider"]["api_key_env"] = cfg.provider.api_key_env;
  j["provider"]["auth_header"] = cfg.provider.auth_header;
  j["provider"]["auth_prefix"] = cfg.provider.auth_prefix;
  j["provider"]["model"] = cfg.provider.model;
  j["provider"]["temperature"] = cfg.provider.temperature;
  j["provider"]["max_output_tokens"] = cfg.provider.max_output_tokens;
  j["provider"]["requests_per_minute"] = cfg.provider.requests_per_minute;
  j["provider"]["max_in_flight"] = cfg.provider.max_in_flight;
  j["provider"]["max_tries"] = cfg.provider.max_tries;
  j["provider"]["timeout_seconds"] = cfg.provider.timeout_seconds;
  j["transcript"]["mode"] =
      std::string(gateway::transcript_mode_name(cfg.transcript_mode));
  j["transcript"]["dir"] = cfg.transcript_dir;
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["max_prompt_tokens"] = cfg.max_prompt_tokens;
  j["metric_ks"] = cfg.metric_ks;
  j["history_randomization"] =
      std::string(history_randomization_name(cfg.history_randomization));
  j["cluster_randomization"] =
      std::string(cluster_randomization_name(cfg.cluster_randomization));
  return j.dump(2) + "\n";
}

}  // namespace tempura::harness
