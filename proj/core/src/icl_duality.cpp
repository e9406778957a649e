#include "tempura/icl_duality.hpp"

#include <algorithm>
#include <stdexcept>

#include "tempura/rng.hpp"

namespace tempura::duality {
namespace {

void require_same_size(const std::vector<Eigen::VectorXd>& a,
                       const std::vector<Eigen::VectorXd>& b,
                       const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) +
                                ": paired lists differ in length");
  }
}

}  // namespace

Eigen::MatrixXd accumulate_update(
    const std::vector<Eigen::VectorXd>& error_signals,
    const std::vector<Eigen::VectorXd>& demo_inputs) {
  require_same_size(error_signals, demo_inputs, "accumulate_update");
  if (error_signals.empty()) {
    throw std::invalid_argument("accumulate_update: empty input");
  }
  const Eigen::Index d = error_signals.front().size();
  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < error_signals.size(); ++i) {
    if (error_signals[i].size() != d || demo_inputs[i].size() != d) {
      throw std::invalid_argument("accumulate_update: dimension mismatch");
    }
    update.noalias() += error_signals[i] * demo_inputs[i].transpose();
  }
  return update;
}

Eigen::VectorXd lin_att(const std::vector<Eigen::VectorXd>& values,
                        const std::vector<Eigen::VectorXd>& keys,
                        const Eigen::VectorXd& query) {
  require_same_size(values, keys, "lin_att");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(query.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (keys[i].size() != query.size()) {
      throw std::invalid_argument("lin_att: dimension mismatch");
    }
    out.noalias() += values[i] * keys[i].dot(query);
  }
  return out;
}

double check_sasrec_duality(const DualityCase& c) {
  Eigen::MatrixXd weights = c.base_weights;
  if (!c.error_signals.empty()) {
    weights += accumulate_update(c.error_signals, c.demo_inputs);
  }
  const Eigen::VectorXd updated_side = weights * c.candidate;
  const Eigen::VectorXd attention_side =
      c.base_weights * c.candidate +
      lin_att(c.error_signals, c.demo_inputs, c.candidate);
  return (updated_side - attention_side).cwiseAbs().maxCoeff();
}

double check_icl_decomposition(const DualityCase& c) {
  const Eigen::VectorXd query = c.query_proj * c.candidate;

  // Full attention over prefix tokens followed by demonstrations.
  std::vector<Eigen::VectorXd> keys;
  std::vector<Eigen::VectorXd> values;
  keys.reserve(c.prefix_inputs.size() + c.demo_inputs.size());
  values.reserve(keys.capacity());
  for (const auto& x : c.prefix_inputs) {
    keys.push_back(c.key_proj * x);
    values.push_back(c.value_proj * x);
  }
  for (const auto& x : c.demo_inputs) {
    keys.push_back(c.key_proj * x);
    values.push_back(c.value_proj * x);
  }
  const Eigen::VectorXd full = lin_att(values, keys, query);

  // Zero-shot term: (Wv X)(Wk X)^T q with prefix tokens as columns of X.
  const Eigen::Index d = c.candidate.size();
  Eigen::MatrixXd prefix(d, static_cast<Eigen::Index>(c.prefix_inputs.size()));
  for (std::size_t i = 0; i < c.prefix_inputs.size(); ++i) {
    prefix.col(static_cast<Eigen::Index>(i)) = c.prefix_inputs[i];
  }
  Eigen::VectorXd zero_shot = Eigen::VectorXd::Zero(d);
  if (!c.prefix_inputs.empty()) {
    const Eigen::MatrixXd zsl_weights =
        (c.value_proj * prefix) * (c.key_proj * prefix).transpose();
    zero_shot = zsl_weights * query;
  }

  // Demonstration term: LinAtt(Wv X', Wk X', q).
  std::vector<Eigen::VectorXd> demo_keys;
  std::vector<Eigen::VectorXd> demo_values;
  demo_keys.reserve(c.demo_inputs.size());
  demo_values.reserve(c.demo_inputs.size());
  for (const auto& x : c.demo_inputs) {
    demo_keys.push_back(c.key_proj * x);
    demo_values.push_back(c.value_proj * x);
  }
  const Eigen::VectorXd demo_term = lin_att(demo_values, demo_keys, query);

  return (full - (zero_shot + demo_term)).cwiseAbs().maxCoeff();
}

DualityCase make_random_case(int dim, int num_demos, int num_prefix,
                             std::uint64_t seed) {
  if (dim < 1 || num_demos < 0 || num_prefix < 0) {
    throw std::invalid_argument("make_random_case: bad sizes");
  }
  rng::Sampler sampler(seed);
  auto unit = [&sampler] { return 2.0 * sampler.uniform_unit() - 1.0; };
  auto matrix = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int col = 0; col < cols; ++col) m(r, col) = unit();
    }
    return m;
  };
  auto vectors = [&](int count) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(matrix(dim, 1));
    return out;
  };

  DualityCase c;
  c.base_weights = matrix(dim, dim);
  c.query_proj = matrix(dim, dim);
  c.key_proj = matrix(dim, dim);
  c.value_proj = matrix(dim, dim);
  c.demo_inputs = vectors(num_demos);
  c.error_signals = vectors(num_demos);
  c.prefix_inputs = vectors(num_prefix);
  c.candidate = matrix(dim, 1);
  return c;
}

DualityReport run_duality_checks(int dim, int cases, std::uint64_t seed,
                                 double tolerance) {
  DualityReport report;
  report.cases = cases;
  report.tolerance = tolerance;
  for (int i = 0; i < cases; ++i) {
    rng::Sampler size_sampler(rng::derive_seed(seed, "case-sizes", i));
    const int num_demos =
        1 + static_cast<int>(size_sampler.uniform_below(8));
    const int num_prefix =
        1 + static_cast<int>(size_sampler.uniform_below(8));
    const DualityCase c = make_random_case(
        dim, num_demos, num_prefix, rng::derive_seed(seed, "case", i));
    report.max_sasrec_discrepancy =
        std::max(report.max_sasrec_discrepancy, check_sasrec_duality(c));
    report.max_icl_discrepancy =
        std::max(report.max_icl_discrepancy, check_icl_decomposition(c));
  }
  return report;
}

}  // namespace tempura::duality
