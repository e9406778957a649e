#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "harness_internal.hpp"

namespace tempura::harness {
namespace {

using nlohmann::json;

std::string fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

json report_entry(const metrics::MetricReport& r) {
  json j;
  j["used"] = r.instance_count;
  j["dropped"] = r.dropped_count;
  for (const auto& [k, value] : r.per_k) {
    j["per_k"][std::to_string(k)] = value;
  }
  return j;
}

std::string render_table(
    const RunConfig& cfg,
    const std::map<std::string, metrics::MetricReport>& strategy_reports,
    const metrics::MetricReport& ensemble_report, std::size_t instances,
    std::size_t repeats, std::size_t failures, std::size_t invalid_parses,
    std::size_t unmatched_lines) {
  std::vector<int> ks = cfg.metric_ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  std::ostringstream out;
  out << pad_right("strategy", 20);
  for (const int k : ks) out << pad_left("N@" + std::to_string(k), 9);
  out << pad_left("used", 9) << pad_left("dropped", 9) << '\n';

  auto row = [&](const std::string& name, const metrics::MetricReport& r) {
    out << pad_right(name, 20);
    for (const int k : ks) {
      const auto it = r.per_k.find(k);
      out << pad_left(it == r.per_k.end() ? "-" : fixed2(it->second), 9);
    }
    out << pad_left(std::to_string(r.instance_count), 9)
        << pad_left(std::to_string(r.dropped_count), 9) << '\n';
  };

  for (const std::string& tag : cfg.strategies) {
    row(tag, strategy_reports.at(tag));
  }
  row("ensemble", ensemble_report);

  out << '\n'
      << "instances: " << instances << "   repeats: " << repeats
      << "   failed strategy calls: " << failures << '\n'
      << "parser: invalid parses " << invalid_parses << ", unmatched lines "
      << unmatched_lines << '\n';
  return out.str();
}

}  // namespace

namespace detail {

std::vector<std::vector<InstanceOutcome>> read_rankings(
    const std::string& results_dir) {
  std::vector<std::vector<InstanceOutcome>> repeats;
  for (int r = 0;; ++r) {
    const std::string path =
        results_dir + "/rankings-rep" + std::to_string(r) + ".jsonl";
    std::ifstream in(path, std::ios::binary);
    if (!in) break;
    std::vector<InstanceOutcome> outcomes;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      outcomes.push_back(outcome_from_json(json::parse(line)));
    }
    repeats.push_back(std::move(outcomes));
  }
  return repeats;
}

}  // namespace detail

std::string report(const std::string& results_dir) {
  const RunConfig cfg = load_run_config_file(results_dir + "/config.json");
  std::vector<std::vector<InstanceOutcome>> repeats =
      detail::read_rankings(results_dir);
  if (repeats.empty()) {
    throw std::runtime_error("no rankings files under " + results_dir);
  }

  std::vector<RepeatResult> repeat_results;
  std::size_t invalid_parses = 0;
  std::size_t unmatched_lines = 0;
  std::size_t failures = 0;
  for (std::vector<InstanceOutcome>& outcomes : repeats) {
    RepeatResult repeat;
    repeat.instances = std::move(outcomes);
    detail::compute_reports(cfg, repeat);
    for (const InstanceOutcome& inst : repeat.instances) {
      for (const StrategyOutcome& so : inst.strategies) {
        if (!so.failed && !so.valid) ++invalid_parses;
        unmatched_lines += so.unmatched_lines;
      }
    }
    failures += repeat.failures;
    repeat_results.push_back(std::move(repeat));
  }

  std::map<std::string, metrics::MetricReport> strategy_reports;
  for (const std::string& tag : cfg.strategies) {
    std::vector<const metrics::MetricReport*> parts;
    for (const RepeatResult& r : repeat_results) {
      parts.push_back(&r.strategy_reports.at(tag));
    }
    strategy_reports[tag] = detail::mean_report(parts);
  }
  std::vector<const metrics::MetricReport*> ensemble_parts;
  for (const RepeatResult& r : repeat_results) {
    ensemble_parts.push_back(&r.ensemble_report);
  }
  const metrics::MetricReport ensemble_report =
      detail::mean_report(ensemble_parts);

  const std::size_t instances =
      repeat_results.empty() ? 0 : repeat_results.front().instances.size();

  json j;
  j["instances"] = instances;
  j["repeats"] = repeat_results.size();
  j["failures"] = failures;
  j["parser"]["invalid_parses"] = invalid_parses;
  j["parser"]["unmatched_lines"] = unmatched_lines;
  j["ensemble"] = report_entry(ensemble_report);
  for (const auto& [tag, r] : strategy_reports) {
    j["strategies"][tag] = report_entry(r);
  }

  const std::string text =
      render_table(cfg, strategy_reports, ensemble_report, instances,
                   repeat_results.size(), failures, invalid_parses,
                   unmatched_lines);
  detail::write_text_file(results_dir + "/report.json", j.dump(2) + "\n");
  detail::write_text_file(results_dir + "/report.txt", text);
  return text;
}

std::string AblationTable::to_text() const {
  std::ostringstream out;
  out << title << '\n';
  out << pad_right("", 20);
  for (const std::string& column : columns) out << pad_left(column, 12);
  out << '\n';
  for (const auto& [label, values] : rows) {
    out << pad_right(label, 20);
    for (const double v : values) out << pad_left(fixed2(v), 12);
    out << '\n';
  }
  return out.str();
}

}  // namespace tempura::harness
