#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace tempura::duality {

// Random test case for the two additive identities below: a trained
// linear-attention sequence model's weight update equals a linear-attention
// read over the historic items, and full attention over a prefix plus
// demonstrations splits into a zero-shot term and a demonstration term.
struct DualityCase {
  Eigen::MatrixXd base_weights;              // d x d
  Eigen::MatrixXd query_proj;                // d x d
  Eigen::MatrixXd key_proj;                  // d x d
  Eigen::MatrixXd value_proj;                // d x d
  std::vector<Eigen::VectorXd> demo_inputs;  // historic item representations
  std::vector<Eigen::VectorXd> error_signals;
  std::vector<Eigen::VectorXd> prefix_inputs;  // tokens before the candidate
  Eigen::VectorXd candidate;
};

// Accumulated outer products of error signals with historic item
// representations: sum_i e_i * x_i^T.
Eigen::MatrixXd accumulate_update(
    const std::vector<Eigen::VectorXd>& error_signals,
    const std::vector<Eigen::VectorXd>& demo_inputs);

// Unnormalized linear attention: sum_i v_i * (k_i . q).
Eigen::VectorXd lin_att(const std::vector<Eigen::VectorXd>& values,
                        const std::vector<Eigen::VectorXd>& keys,
                        const Eigen::VectorXd& query);

// Max-abs difference between (W0 + sum e_i x_i^T) x and
// W0 x + LinAtt(errors, inputs, x). Zero in exact arithmetic.
double check_sasrec_duality(const DualityCase& c);

// Max-abs difference between full linear attention over
// [prefix || demonstrations] and the zero-shot term
// (Wv X)(Wk X)^T q plus LinAtt(Wv X', Wk X', q), with q = Wq * candidate.
double check_icl_decomposition(const DualityCase& c);

DualityCase make_random_case(int dim, int num_demos, int num_prefix,
                             std::uint64_t seed);

struct DualityReport {
  int cases = 0;
  double max_sasrec_discrepancy = 0.0;
  double max_icl_discrepancy = 0.0;
  double tolerance = 1e-9;
  bool passed() const {
    return max_sasrec_discrepancy < tolerance &&
           max_icl_discrepancy < tolerance;
  }
};

DualityReport run_duality_checks(int dim, int cases, std::uint64_t seed,
                                 double tolerance = 1e-9);

}  // namespace tempura::duality
