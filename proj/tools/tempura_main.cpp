#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tempura/corpus.hpp"
#include "tempura/harness.hpp"
#include "tempura/icl_duality.hpp"

namespace {

using tempura::harness::RunConfig;

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', pos), csv.size());
    std::string part = csv.substr(pos, comma - pos);
    if (!part.empty()) out.push_back(std::move(part));
    pos = comma + 1;
  }
  return out;
}

struct RunFlags {
  std::string config_path;
  std::string strategies_csv;
  std::string ensemble_csv;
  std::string transcript_mode;
  std::string transcript_dir;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int repeats = 0;
  int workers = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "Run configuration JSON file");
  cmd->add_option("--seed", flags.seed, "Master run seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--strategies", flags.strategies_csv,
                  "Comma-separated strategy tags");
  cmd->add_option("--ensemble", flags.ensemble_csv,
                  "Comma-separated ensemble member tags");
  cmd->add_option("--transcript-mode", flags.transcript_mode,
                  "record | replay | passthrough")
      ->check(CLI::IsMember({"record", "replay", "passthrough"}));
  cmd->add_option("--transcript", flags.transcript_dir,
                  "Transcript directory");
  cmd->add_option("--repeats", flags.repeats, "Repeat runs to average");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--workers", flags.workers, "Parallel instance workers");
}

RunConfig build_config(const RunFlags& flags) {
  RunConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = tempura::harness::load_run_config_file(flags.config_path);
  }
  if (flags.seed_set) cfg.seed = flags.seed;
  if (!flags.strategies_csv.empty()) {
    cfg.strategies = split_csv(flags.strategies_csv);
  }
  if (!flags.ensemble_csv.empty()) {
    cfg.ensemble_members = split_csv(flags.ensemble_csv);
  }
  if (!flags.transcript_mode.empty()) {
    cfg.transcript_mode =
        tempura::gateway::transcript_mode_from_name(flags.transcript_mode);
  }
  if (!flags.transcript_dir.empty()) cfg.transcript_dir = flags.transcript_dir;
  if (flags.repeats > 0) cfg.repeats = flags.repeats;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.workers > 0) cfg.workers = flags.workers;
  return cfg;
}

int do_run(const RunFlags& flags, bool force_replay) {
  RunConfig cfg = build_config(flags);
  if (force_replay) {
    cfg.transcript_mode = tempura::gateway::TranscriptMode::Replay;
  }
  tempura::harness::run(cfg);
  std::cout << tempura::harness::report(cfg.out_dir);
  std::cout << "results written to " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tempura: temporal-aware prompting harness for LLM-based sequential "
      "recommendation"};
  app.require_subcommand(1);

  // ingest
  auto* ingest =
      app.add_subcommand("ingest", "Parse a dataset into catalog/history "
                                   "JSONL files");
  std::string dataset_kind;
  std::string ratings_path, movies_path, reviews_path, meta_path;
  std::string ingest_out = "ingested";
  std::size_t min_length = 6;
  ingest->add_option("--dataset", dataset_kind, "movielens | amazon")
      ->required()
      ->check(CLI::IsMember({"movielens", "amazon"}));
  ingest->add_option("--ratings", ratings_path, "MovieLens ratings.dat");
  ingest->add_option("--movies", movies_path, "MovieLens movies.dat");
  ingest->add_option("--reviews", reviews_path, "Amazon reviews JSONL");
  ingest->add_option("--meta", meta_path, "Amazon metadata JSONL");
  ingest->add_option("--min-length", min_length,
                     "Minimum events per kept user");
  ingest->add_option("--out", ingest_out, "Output directory");

  // run / replay
  auto* run_cmd = app.add_subcommand("run", "Execute a full evaluation run");
  RunFlags run_flags;
  add_run_flags(run_cmd, run_flags);

  auto* replay_cmd = app.add_subcommand(
      "replay", "Re-execute a run strictly from recorded transcripts");
  RunFlags replay_flags;
  add_run_flags(replay_cmd, replay_flags);

  // ablations
  auto* ab_history = app.add_subcommand(
      "ablate-history", "Sweep the presented history length");
  RunFlags ab_history_flags;
  std::string lengths_csv = "15,25,35,50";
  add_run_flags(ab_history, ab_history_flags);
  ab_history->add_option("--lengths", lengths_csv,
                         "Comma-separated history lengths");

  auto* ab_k =
      app.add_subcommand("ablate-k", "Sweep the PCL demonstration count");
  RunFlags ab_k_flags;
  std::string ks_csv = "1,3,5,7";
  add_run_flags(ab_k, ab_k_flags);
  ab_k->add_option("--ks", ks_csv, "Comma-separated k values");

  auto* ab_random = app.add_subcommand(
      "ablate-random", "Compare Item-R / Cluster-R / Correct inputs");
  RunFlags ab_random_flags;
  add_run_flags(ab_random, ab_random_flags);

  // duality-check
  auto* duality = app.add_subcommand(
      "duality-check",
      "Numerically verify the linear-attention identities");
  int dim = 16;
  int cases = 100;
  std::uint64_t duality_seed = 42;
  double tolerance = 1e-9;
  duality->add_option("--dim", dim, "Vector dimension");
  duality->add_option("--cases", cases, "Number of random cases");
  duality->add_option("--seed", duality_seed, "Case generator seed");
  duality->add_option("--tolerance", tolerance, "Max allowed discrepancy");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Re-render tables from a results dir");
  std::string results_dir;
  report_cmd->add_option("--results", results_dir, "Results directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      tempura::corpus::IngestResult result;
      if (dataset_kind == "movielens") {
        result = tempura::corpus::load_movielens(ratings_path, movies_path);
      } else {
        result = tempura::corpus::load_amazon(reviews_path, meta_path);
      }
      const tempura::corpus::HistoriesResult built =
          tempura::corpus::build_histories(result.interactions, result.catalog,
                                           min_length);
      std::filesystem::create_directories(ingest_out);
      tempura::harness::write_catalog_jsonl(ingest_out + "/catalog.jsonl",
                                            result.catalog);
      tempura::harness::write_histories_jsonl(ingest_out + "/histories.jsonl",
                                              built.histories);
      std::cout << "catalog items: " << result.catalog.size() << "\n"
                << "interactions: " << result.interactions.size()
                << " (malformed lines skipped: "
                << result.stats.interaction_malformed
                << ", dropped without catalog item: "
                << result.stats.dropped_interactions << ")\n"
                << "users kept: " << built.stats.users_kept
                << " (excluded below min length: "
                << built.stats.users_excluded << ")\n"
                << "written to " << ingest_out << "\n";
      return 0;
    }
    if (*run_cmd) return do_run(run_flags, false);
    if (*replay_cmd) return do_run(replay_flags, true);
    if (*ab_history) {
      RunConfig cfg = build_config(ab_history_flags);
      std::vector<std::size_t> lengths;
      for (const std::string& s : split_csv(lengths_csv)) {
        lengths.push_back(std::stoul(s));
      }
      const auto table = tempura::harness::ablate_history(cfg, lengths);
      std::cout << table.to_text();
      return 0;
    }
    if (*ab_k) {
      RunConfig cfg = build_config(ab_k_flags);
      std::vector<int> ks;
      for (const std::string& s : split_csv(ks_csv)) ks.push_back(std::stoi(s));
      const auto table = tempura::harness::ablate_k(cfg, ks);
      std::cout << table.to_text();
      return 0;
    }
    if (*ab_random) {
      RunConfig cfg = build_config(ab_random_flags);
      const auto table = tempura::harness::ablate_randomization(cfg);
      std::cout << table.to_text();
      return 0;
    }
    if (*duality) {
      const auto rep = tempura::duality::run_duality_checks(
          dim, cases, duality_seed, tolerance);
      std::printf("sasrec-duality       max discrepancy %.3e   %s\n",
                  rep.max_sasrec_discrepancy,
                  rep.max_sasrec_discrepancy < rep.tolerance ? "PASS" : "FAIL");
      std::printf("icl-decomposition    max discrepancy %.3e   %s\n",
                  rep.max_icl_discrepancy,
                  rep.max_icl_discrepancy < rep.tolerance ? "PASS" : "FAIL");
      std::printf("cases: %d  dim: %d  tolerance: %.1e\n", rep.cases, dim,
                  rep.tolerance);
      return rep.passed() ? 0 : 1;
    }
    if (*report_cmd) {
      std::cout << tempura::harness::report(results_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
