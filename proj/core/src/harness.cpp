#include "tempura/harness.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "harness_internal.hpp"
#include "tempura/ensemble.hpp"
#include "tempura/mock_providers.hpp"
#include "tempura/rng.hpp"
#include "tempura/synthetic.hpp"

namespace tempura::harness {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct PreparedData {
  corpus::Catalog catalog;
  std::vector<corpus::UserHistory> histories;
};

PreparedData prepare(const DatasetSpec& spec, std::uint64_t seed) {
  PreparedData data;
  if (spec.kind == "histories") {
    data.catalog = read_catalog_jsonl(spec.paths.at("catalog"));
    data.histories = read_histories_jsonl(spec.paths.at("histories"));
    return data;
  }
  corpus::IngestResult ingest = load_dataset(spec, seed);
  corpus::HistoriesResult built = corpus::build_histories(
      ingest.interactions, ingest.catalog, spec.min_history);
  data.catalog = std::move(ingest.catalog);
  data.histories = std::move(built.histories);
  return data;
}

std::vector<protocol::EvalInstance> build_instances(const RunConfig& cfg) {
  if (cfg.dataset.kind == "instances") {
    std::vector<protocol::EvalInstance> instances =
        protocol::read_instances_jsonl(cfg.dataset.paths.at("instances"));
    for (protocol::EvalInstance& inst : instances) {
      inst = protocol::truncate_history(inst, cfg.sampling.max_history);
    }
    return instances;
  }
  PreparedData data = prepare(cfg.dataset, cfg.seed);
  protocol::SamplingConfig sampling = cfg.sampling;
  sampling.seed = rng::derive_seed(cfg.seed, "protocol");
  return protocol::make_instances(data.histories, data.catalog, sampling);
}

std::shared_ptr<gateway::CompletionBackend> make_backend(
    const gateway::ProviderConfig& provider) {
  if (provider.kind == "http") {
    return std::shared_ptr<gateway::CompletionBackend>(
        gateway::make_http_backend(provider));
  }
  return std::shared_ptr<gateway::CompletionBackend>(
      mocks::make_mock_backend(provider.kind));
}

void validate(const RunConfig& cfg) {
  if (cfg.strategies.empty()) {
    throw std::invalid_argument("run: strategy list must be nonempty");
  }
  for (const std::string& tag : cfg.strategies) {
    const promptkit::PromptStrategy s = promptkit::strategy_from_tag(tag);
    if (s.kind == promptkit::StrategyKind::ClusterRequest) {
      throw std::invalid_argument(
          "run: cluster-request is a sub-step of cluster-augmented, not a "
          "ranking strategy");
    }
  }
  for (const std::string& member : cfg.ensemble_members) {
    if (std::find(cfg.strategies.begin(), cfg.strategies.end(), member) ==
        cfg.strategies.end()) {
      throw std::invalid_argument("run: ensemble member '" + member +
                                  "' is not in the strategy list");
    }
  }
}

gateway::ChatRequest to_request(const RunConfig& cfg,
                                const promptkit::RenderedPrompt& rendered) {
  gateway::ChatRequest request;
  request.model = cfg.provider.model;
  request.temperature = cfg.provider.temperature;
  request.messages = rendered.messages;
  request.max_output_tokens = cfg.provider.max_output_tokens;
  return request;
}

std::size_t rank_of(const std::vector<std::size_t>& order,
                    std::size_t ground_truth_index) {
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (order[pos] == ground_truth_index) return pos + 1;
  }
  throw std::logic_error("ground truth missing from ranking order");
}

void check_budget(const RunConfig& cfg,
                  const promptkit::RenderedPrompt& rendered) {
  if (cfg.max_prompt_tokens > 0 &&
      rendered.token_estimate > cfg.max_prompt_tokens) {
    throw std::runtime_error(
        "prompt over token budget: " + std::to_string(rendered.token_estimate) +
        " > " + std::to_string(cfg.max_prompt_tokens));
  }
}

StrategyOutcome run_strategy(const RunConfig& cfg, gateway::Gateway& gw,
                             const protocol::EvalInstance& inst,
                             const std::string& tag,
                             std::size_t instance_index) {
  StrategyOutcome outcome;
  outcome.strategy = tag;
  try {
    const promptkit::PromptStrategy strategy =
        promptkit::strategy_from_tag(tag, cfg.k, cfg.sample_size);

    promptkit::RenderedPrompt rendered;
    if (strategy.kind == promptkit::StrategyKind::ClusterAugmented) {
      const promptkit::RenderedPrompt cluster_prompt =
          promptkit::render_cluster_request(inst);
      check_budget(cfg, cluster_prompt);
      const gateway::ChatRequest cluster_request =
          to_request(cfg, cluster_prompt);
      outcome.cluster_request_hash = gateway::request_hash(cluster_request);
      const gateway::ChatResponse cluster_response =
          gw.complete(cluster_request);
      outcome.usage.prompt += cluster_response.usage.prompt;
      outcome.usage.completion += cluster_response.usage.completion;
      outcome.latency_ms += cluster_response.latency_ms;

      ClusterAnalysis analysis;
      try {
        analysis = promptkit::parse_clusters(cluster_response.text, inst);
      } catch (const promptkit::ClusterParseError&) {
        analysis = promptkit::fallback_single_cluster(inst);
      }
      if (cfg.cluster_randomization == ClusterRandomization::Shuffle) {
        analysis = protocol::randomize_clusters(
            analysis,
            rng::derive_seed(cfg.seed, "cluster-r", instance_index));
      }
      rendered = promptkit::render_cluster_augmented(inst, analysis);
    } else {
      rendered = promptkit::render(
          strategy, inst, rng::derive_seed(cfg.seed, "gcl", instance_index));
    }
    check_budget(cfg, rendered);

    const gateway::ChatRequest request = to_request(cfg, rendered);
    outcome.request_hash = gateway::request_hash(request);
    const gateway::ChatResponse response = gw.complete(request);
    outcome.usage.prompt += response.usage.prompt;
    outcome.usage.completion += response.usage.completion;
    outcome.latency_ms += response.latency_ms;

    const rankparse::ParsedRanking parsed =
        rankparse::parse_ranking(response.text, inst.candidate_titles());
    outcome.order = parsed.order;
    outcome.matched_count = parsed.matched_count;
    outcome.appended_count = parsed.appended_missing.size();
    outcome.unmatched_lines = parsed.unmatched_lines.size();
    for (std::size_t i = 0; i < parsed.unmatched_lines.size() && i < 3; ++i) {
      outcome.unmatched_samples.push_back(parsed.unmatched_lines[i]);
    }
    outcome.valid = parsed.valid;
    outcome.rank_of_truth = rank_of(parsed.order, inst.ground_truth_index);
  } catch (const std::exception& e) {
    outcome.failed = true;
    outcome.error = e.what();
  }
  return outcome;
}

InstanceOutcome run_instance(const RunConfig& cfg, gateway::Gateway& gw,
                             const protocol::EvalInstance& original,
                             std::size_t index) {
  InstanceOutcome outcome;
  outcome.index = index;

  protocol::EvalInstance inst = original;
  if (cfg.history_randomization == HistoryRandomization::Items) {
    inst = protocol::randomize_items(
        inst, rng::derive_seed(cfg.seed, "item-r", index));
  }

  for (const std::string& tag : cfg.strategies) {
    outcome.strategies.push_back(run_strategy(cfg, gw, inst, tag, index));
  }

  std::vector<std::vector<std::size_t>> member_orders;
  std::vector<std::string> member_tags;
  for (const StrategyOutcome& so : outcome.strategies) {
    if (so.failed || !so.valid) continue;
    if (std::find(cfg.ensemble_members.begin(), cfg.ensemble_members.end(),
                  so.strategy) == cfg.ensemble_members.end()) {
      continue;
    }
    member_orders.push_back(so.order);
    member_tags.push_back(so.strategy);
  }
  if (member_orders.empty()) {
    outcome.ensemble_dropped = true;
  } else {
    std::vector<std::size_t> presentation(inst.candidates.size());
    for (std::size_t i = 0; i < presentation.size(); ++i) presentation[i] = i;
    const ensemble::ScoredRanking scored = ensemble::aggregate(
        member_orders, presentation, std::move(member_tags));
    outcome.ensemble_order = scored.final_order;
    outcome.ensemble_rank =
        rank_of(scored.final_order, inst.ground_truth_index);
  }
  return outcome;
}

}  // namespace

namespace detail {

void compute_reports(const RunConfig& cfg, RepeatResult& repeat) {
  std::vector<int> ks = cfg.metric_ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  for (const std::string& tag : cfg.strategies) {
    std::vector<std::size_t> ranks;
    std::size_t dropped = 0;
    for (const InstanceOutcome& inst : repeat.instances) {
      for (const StrategyOutcome& so : inst.strategies) {
        if (so.strategy != tag) continue;
        if (so.failed || !so.valid) {
          ++dropped;
        } else {
          ranks.push_back(so.rank_of_truth);
        }
      }
    }
    metrics::MetricReport report;
    report.instance_count = ranks.size();
    report.dropped_count = dropped;
    for (const int k : ks) {
      report.per_k[k] = ranks.empty() ? 0.0 : metrics::mean_ndcg(ranks, k);
    }
    repeat.strategy_reports[tag] = std::move(report);
  }

  std::vector<std::size_t> ensemble_ranks;
  std::size_t ensemble_dropped = 0;
  for (const InstanceOutcome& inst : repeat.instances) {
    if (inst.ensemble_dropped) {
      ++ensemble_dropped;
    } else {
      ensemble_ranks.push_back(inst.ensemble_rank);
    }
    for (const StrategyOutcome& so : inst.strategies) {
      if (so.failed) ++repeat.failures;
      repeat.tokens_total.prompt += so.usage.prompt;
      repeat.tokens_total.completion += so.usage.completion;
      repeat.latency_ms_total += so.latency_ms;
    }
  }
  repeat.ensemble_report.instance_count = ensemble_ranks.size();
  repeat.ensemble_report.dropped_count = ensemble_dropped;
  for (const int k : ks) {
    repeat.ensemble_report.per_k[k] =
        ensemble_ranks.empty() ? 0.0
                               : metrics::mean_ndcg(ensemble_ranks, k);
  }
}

metrics::MetricReport mean_report(
    const std::vector<const metrics::MetricReport*>& reports) {
  metrics::MetricReport mean;
  if (reports.empty()) return mean;
  for (const metrics::MetricReport* r : reports) {
    mean.instance_count += r->instance_count;
    mean.dropped_count += r->dropped_count;
    for (const auto& [k, value] : r->per_k) mean.per_k[k] += value;
  }
  for (auto& [k, value] : mean.per_k) {
    value /= static_cast<double>(reports.size());
  }
  return mean;
}

json outcome_to_json(const InstanceOutcome& outcome) {
  json j;
  j["index"] = outcome.index;
  json ens;
  ens["dropped"] = outcome.ensemble_dropped;
  if (!outcome.ensemble_dropped) {
    ens["order"] = outcome.ensemble_order;
    ens["rank"] = outcome.ensemble_rank;
  }
  j["ensemble"] = std::move(ens);
  j["strategies"] = json::array();
  for (const StrategyOutcome& so : outcome.strategies) {
    json s;
    s["strategy"] = so.strategy;
    s["failed"] = so.failed;
    if (so.failed) {
      s["error"] = so.error;
    } else {
      s["request_hash"] = so.request_hash;
      if (!so.cluster_request_hash.empty()) {
        s["cluster_request_hash"] = so.cluster_request_hash;
      }
      s["order"] = so.order;
      s["rank"] = so.rank_of_truth;
      s["matched"] = so.matched_count;
      s["appended"] = so.appended_count;
      s["unmatched_lines"] = so.unmatched_lines;
      if (!so.unmatched_samples.empty()) {
        s["unmatched_samples"] = so.unmatched_samples;
      }
      s["valid"] = so.valid;
      s["usage"]["prompt"] = so.usage.prompt;
      s["usage"]["completion"] = so.usage.completion;
      s["latency_ms"] = so.latency_ms;
    }
    j["strategies"].push_back(std::move(s));
  }
  return j;
}

StrategyOutcome outcome_from_json_strategy(const json& s) {
  StrategyOutcome so;
  so.strategy = s.at("strategy").get<std::string>();
  so.failed = s.at("failed").get<bool>();
  if (so.failed) {
    so.error = s.value("error", std::string());
    return so;
  }
  so.request_hash = s.value("request_hash", std::string());
  so.cluster_request_hash = s.value("cluster_request_hash", std::string());
  so.order = s.at("order").get<std::vector<std::size_t>>();
  so.rank_of_truth = s.at("rank").get<std::size_t>();
  so.matched_count = s.at("matched").get<std::size_t>();
  so.appended_count = s.at("appended").get<std::size_t>();
  so.unmatched_lines = s.at("unmatched_lines").get<std::size_t>();
  if (const auto it = s.find("unmatched_samples"); it != s.end()) {
    so.unmatched_samples = it->get<std::vector<std::string>>();
  }
  so.valid = s.at("valid").get<bool>();
  if (const auto it = s.find("usage"); it != s.end()) {
    so.usage.prompt = it->value("prompt", 0LL);
    so.usage.completion = it->value("completion", 0LL);
  }
  so.latency_ms = s.value("latency_ms", 0LL);
  return so;
}

InstanceOutcome outcome_from_json(const json& j) {
  InstanceOutcome outcome;
  outcome.index = j.at("index").get<std::size_t>();
  const json& ens = j.at("ensemble");
  outcome.ensemble_dropped = ens.at("dropped").get<bool>();
  if (!outcome.ensemble_dropped) {
    outcome.ensemble_order = ens.at("order").get<std::vector<std::size_t>>();
    outcome.ensemble_rank = ens.at("rank").get<std::size_t>();
  }
  for (const json& s : j.at("strategies")) {
    outcome.strategies.push_back(outcome_from_json_strategy(s));
  }
  return outcome;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace detail

corpus::IngestResult load_dataset(const DatasetSpec& spec,
                                  std::uint64_t seed) {
  if (spec.kind == "movielens") {
    return corpus::load_movielens(spec.paths.at("ratings"),
                                  spec.paths.at("movies"));
  }
  if (spec.kind == "amazon") {
    return corpus::load_amazon(spec.paths.at("reviews"),
                               spec.paths.at("meta"));
  }
  if (spec.kind == "synthetic-uniform") {
    synthetic::UniformSpec s;
    s.num_users = spec.synthetic_users;
    s.catalog_size = spec.synthetic_catalog;
    s.events_per_user = spec.synthetic_events;
    s.seed = rng::derive_seed(seed, "dataset");
    return synthetic::make_uniform_dataset(s);
  }
  if (spec.kind == "synthetic-cohort") {
    synthetic::CohortSpec s;
    s.num_users = spec.synthetic_users;
    s.seed = rng::derive_seed(seed, "dataset");
    return synthetic::make_cohort_dataset(s);
  }
  throw std::invalid_argument("unknown dataset kind: " + spec.kind);
}

RunResult run(const RunConfig& config) {
  validate(config);

  RunResult result;
  result.config = config;
  result.instances = build_instances(config);

  const std::string transcript_dir = config.transcript_dir.empty()
                                         ? config.out_dir + "/transcripts"
                                         : config.transcript_dir;
  const std::shared_ptr<gateway::CompletionBackend> backend =
      make_backend(config.provider);

  for (int repeat_index = 0; repeat_index < config.repeats; ++repeat_index) {
    std::shared_ptr<gateway::Transcript> transcript;
    if (config.transcript_mode != gateway::TranscriptMode::Passthrough) {
      transcript = std::make_shared<gateway::Transcript>(
          transcript_dir + "/rep" + std::to_string(repeat_index) + ".jsonl",
          config.transcript_mode);
    }
    gateway::Gateway gw(backend, transcript, config.provider);

    RepeatResult repeat;
    repeat.instances.resize(result.instances.size());

    const std::size_t n = result.instances.size();
    const std::size_t worker_count = std::max(
        1, std::min(config.workers, static_cast<int>(n == 0 ? 1 : n)));
    if (worker_count <= 1) {
      for (std::size_t i = 0; i < n; ++i) {
        repeat.instances[i] = run_instance(config, gw, result.instances[i], i);
      }
    } else {
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          repeat.instances[i] =
              run_instance(config, gw, result.instances[i], i);
        }
      };
      std::vector<std::thread> threads;
      threads.reserve(worker_count);
      for (std::size_t w = 0; w < worker_count; ++w) {
        threads.emplace_back(work);
      }
      for (std::thread& t : threads) t.join();
    }

    detail::compute_reports(config, repeat);
    result.repeats.push_back(std::move(repeat));
  }

  {
    std::vector<const metrics::MetricReport*> ensemble_parts;
    for (const RepeatResult& r : result.repeats) {
      ensemble_parts.push_back(&r.ensemble_report);
    }
    result.ensemble_report = detail::mean_report(ensemble_parts);
    for (const std::string& tag : config.strategies) {
      std::vector<const metrics::MetricReport*> parts;
      for (const RepeatResult& r : result.repeats) {
        parts.push_back(&r.strategy_reports.at(tag));
      }
      result.strategy_reports[tag] = detail::mean_report(parts);
    }
  }

  // Persist everything, then derive the report from the persisted records so
  // reported numbers are always recomputable from disk.
  fs::create_directories(config.out_dir);
  detail::write_text_file(config.out_dir + "/config.json",
                          run_config_json(config));
  protocol::write_instances_jsonl(config.out_dir + "/instances.jsonl",
                                  result.instances);
  for (std::size_t r = 0; r < result.repeats.size(); ++r) {
    std::ofstream out(
        config.out_dir + "/rankings-rep" + std::to_string(r) + ".jsonl",
        std::ios::binary);
    for (const InstanceOutcome& outcome : result.repeats[r].instances) {
      out << detail::outcome_to_json(outcome).dump() << '\n';
    }
  }
  {
    json meta;
    gateway::TokenUsage tokens;
    long long latency = 0;
    std::size_t failures = 0;
    for (const RepeatResult& r : result.repeats) {
      tokens.prompt += r.tokens_total.prompt;
      tokens.completion += r.tokens_total.completion;
      latency += r.latency_ms_total;
      failures += r.failures;
    }
    meta["tokens"]["prompt"] = tokens.prompt;
    meta["tokens"]["completion"] = tokens.completion;
    meta["latency_ms_total"] = latency;
    meta["failures"] = failures;
    meta["repeats"] = result.repeats.size();
    meta["instances"] = result.instances.size();
    detail::write_text_file(config.out_dir + "/run_meta.json",
                            meta.dump(2) + "\n");
  }
  report(config.out_dir);

  return result;
}

namespace {

RunConfig with_subdir(const RunConfig& base, const std::string& name) {
  RunConfig cfg = base;
  cfg.out_dir = base.out_dir + "/" + name;
  cfg.transcript_dir = cfg.out_dir + "/transcripts";
  return cfg;
}

std::vector<int> ensure_k10(std::vector<int> ks) {
  if (std::find(ks.begin(), ks.end(), 10) == ks.end()) ks.push_back(10);
  return ks;
}

std::vector<double> ndcg10_row(const RunResult& result,
                               const std::vector<std::string>& columns) {
  std::vector<double> row;
  for (const std::string& tag : columns) {
    if (tag == "ensemble") {
      row.push_back(result.ensemble_report.per_k.at(10));
    } else {
      row.push_back(result.strategy_reports.at(tag).per_k.at(10));
    }
  }
  return row;
}

}  // namespace

AblationTable ablate_history(const RunConfig& config,
                             const std::vector<std::size_t>& lengths) {
  std::vector<std::size_t> unique_lengths;
  for (const std::size_t len : lengths) {
    if (std::find(unique_lengths.begin(), unique_lengths.end(), len) ==
        unique_lengths.end()) {
      unique_lengths.push_back(len);
    }
  }
  AblationTable table;
  table.title = "history length sweep (NDCG@10)";
  table.columns = config.strategies;
  table.columns.push_back("ensemble");
  for (const std::size_t len : unique_lengths) {
    RunConfig cfg = with_subdir(config, "history-" + std::to_string(len));
    cfg.sampling.max_history = len;
    cfg.metric_ks = ensure_k10(cfg.metric_ks);
    const RunResult result = run(cfg);
    table.rows.emplace_back(std::to_string(len),
                            ndcg10_row(result, table.columns));
  }
  return table;
}

AblationTable ablate_k(const RunConfig& config, const std::vector<int>& ks) {
  std::vector<int> unique_ks;
  for (const int k : ks) {
    if (std::find(unique_ks.begin(), unique_ks.end(), k) == unique_ks.end()) {
      unique_ks.push_back(k);
    }
  }
  AblationTable table;
  table.title = "PCL demonstration count sweep (NDCG@10)";
  table.columns = {"pcl"};
  for (const int k : unique_ks) {
    RunConfig cfg = with_subdir(config, "k-" + std::to_string(k));
    cfg.strategies = {"pcl"};
    cfg.ensemble_members = {"pcl"};
    cfg.k = k;
    cfg.metric_ks = ensure_k10(cfg.metric_ks);
    const RunResult result = run(cfg);
    table.rows.emplace_back(std::to_string(k),
                            ndcg10_row(result, table.columns));
  }
  return table;
}

AblationTable ablate_randomization(const RunConfig& config) {
  AblationTable table;
  table.title = "input randomization (NDCG@10)";
  table.columns = {"Item-R", "Cluster-R", "Correct"};

  RunConfig item_r = with_subdir(config, "item-r");
  item_r.history_randomization = HistoryRandomization::Items;
  item_r.metric_ks = ensure_k10(item_r.metric_ks);

  RunConfig cluster_r = with_subdir(config, "cluster-r");
  cluster_r.cluster_randomization = ClusterRandomization::Shuffle;
  cluster_r.metric_ks = ensure_k10(cluster_r.metric_ks);

  RunConfig correct = with_subdir(config, "correct");
  correct.metric_ks = ensure_k10(correct.metric_ks);

  const RunResult item_result = run(item_r);
  const RunResult cluster_result = run(cluster_r);
  const RunResult correct_result = run(correct);

  std::vector<std::string> rows = config.strategies;
  rows.push_back("ensemble");
  for (const std::string& tag : rows) {
    auto value = [&tag](const RunResult& r) {
      return tag == "ensemble" ? r.ensemble_report.per_k.at(10)
                               : r.strategy_reports.at(tag).per_k.at(10);
    };
    table.rows.emplace_back(
        tag, std::vector<double>{value(item_result), value(cluster_result),
                                 value(correct_result)});
  }
  return table;
}

void write_catalog_jsonl(const std::string& path,
                         const corpus::Catalog& catalog) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const corpus::ItemRecord& item : catalog.items()) {
    json j;
    j["id"] = item.item_id;
    j["title"] = item.title;
    if (!item.attributes.empty()) j["attributes"] = item.attributes;
    out << j.dump() << '\n';
  }
}

corpus::Catalog read_catalog_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  corpus::Catalog catalog;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    corpus::ItemRecord item;
    item.item_id = j.at("id").get<std::string>();
    item.title = j.at("title").get<std::string>();
    if (const auto it = j.find("attributes"); it != j.end()) {
      item.attributes = it->get<std::vector<std::string>>();
    }
    catalog.add(std::move(item));
  }
  return catalog;
}

void write_histories_jsonl(const std::string& path,
                           const std::vector<corpus::UserHistory>& histories) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const corpus::UserHistory& history : histories) {
    json j;
    j["user_id"] = history.user_id;
    json events = json::array();
    for (const corpus::Event& ev : history.events) {
      json e;
      e["item_id"] = ev.item_id;
      e["ts"] = ev.timestamp;
      events.push_back(std::move(e));
    }
    j["events"] = std::move(events);
    out << j.dump() << '\n';
  }
}

std::vector<corpus::UserHistory> read_histories_jsonl(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<corpus::UserHistory> histories;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    corpus::UserHistory history;
    history.user_id = j.at("user_id").get<std::string>();
    for (const json& e : j.at("events")) {
      history.events.push_back({e.at("item_id").get<std::string>(),
                                e.at("ts").get<std::int64_t>()});
    }
    histories.push_back(std::move(history));
  }
  return histories;
}

}  // namespace tempura::harness
