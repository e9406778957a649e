#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tempura/harness.hpp"

namespace tempura::harness::detail {

nlohmann::json outcome_to_json(const InstanceOutcome& outcome);
InstanceOutcome outcome_from_json(const nlohmann::json& j);

// Per-repeat rankings files under a results directory, in repeat order.
std::vector<std::vector<InstanceOutcome>> read_rankings(
    const std::string& results_dir);

void compute_reports(const RunConfig& cfg, RepeatResult& repeat);
metrics::MetricReport mean_report(
    const std::vector<const metrics::MetricReport*>& reports);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace tempura::harness::detail
