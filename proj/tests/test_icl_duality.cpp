#include <doctest.h>

#include "tempura/icl_duality.hpp"
#include "tempura/rng.hpp"

using namespace tempura;

TEST_SUITE_BEGIN("icl-duality");

namespace {

std::vector<Eigen::VectorXd> random_vectors(int count, int dim,
                                            rng::Sampler& sampler) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v(d) = 2.0 * sampler.uniform_unit() - 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("zero error signals accumulate to the zero matrix") {
  rng::Sampler sampler(1);
  const auto inputs = random_vectors(4, 6, sampler);
  const std::vector<Eigen::VectorXd> zeros(4, Eigen::VectorXd::Zero(6));
  const Eigen::MatrixXd update = duality::accumulate_update(zeros, inputs);
  CHECK(update.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a single pair gives the rank-1 outer product") {
  Eigen::VectorXd e(3), x(3);
  e << 1.0, 2.0, -1.0;
  x << 0.5, 0.0, 3.0;
  const Eigen::MatrixXd update = duality::accumulate_update({e}, {x});
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      CHECK(update(r, c) == doctest::Approx(e(r) * x(c)).epsilon(1e-15));
    }
  }
}

TEST_CASE("accumulated update matches entry-wise brute force") {
  rng::Sampler sampler(2);
  const int d = 8;
  const auto errors = random_vectors(5, d, sampler);
  const auto inputs = random_vectors(5, d, sampler);
  const Eigen::MatrixXd update = duality::accumulate_update(errors, inputs);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      double sum = 0.0;
      for (int i = 0; i < 5; ++i) sum += errors[i](r) * inputs[i](c);
      CHECK(update(r, c) == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("lin_att of a query orthogonal to all keys is zero") {
  Eigen::VectorXd k1(3), k2(3), q(3), v(3);
  k1 << 1, 0, 0;
  k2 << 0, 1, 0;
  q << 0, 0, 5;
  v << 9, 9, 9;
  const Eigen::VectorXd out = duality::lin_att({v, v}, {k1, k2}, q);
  CHECK(out.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lin_att with a unit key equal to the query returns the value") {
  Eigen::VectorXd k(3), v(3);
  k << 1, 0, 0;
  v << 2, -3, 4;
  const Eigen::VectorXd out = duality::lin_att({v}, {k}, k);
  CHECK((out - v).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("lin_att matches term-by-term summation") {
  rng::Sampler sampler(3);
  const int d = 8;
  const auto values = random_vectors(6, d, sampler);
  const auto keys = random_vectors(6, d, sampler);
  const auto q = random_vectors(1, d, sampler)[0];
  const Eigen::VectorXd out = duality::lin_att(values, keys, q);
  for (int r = 0; r < d; ++r) {
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += keys[i](c) * q(c);
      sum += values[i](r) * dot;
    }
    CHECK(out(r) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("lin_att is linear in the query") {
  rng::Sampler sampler(4);
  const int d = 10;
  const auto values = random_vectors(5, d, sampler);
  const auto keys = random_vectors(5, d, sampler);
  const auto q1 = random_vectors(1, d, sampler)[0];
  const auto q2 = random_vectors(1, d, sampler)[0];
  const double alpha = 1.75;
  const Eigen::VectorXd lhs =
      duality::lin_att(values, keys, alpha * q1 + q2);
  const Eigen::VectorXd rhs = alpha * duality::lin_att(values, keys, q1) +
                              duality::lin_att(values, keys, q2);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("zero error signals make both duality sides equal exactly") {
  duality::DualityCase c = duality::make_random_case(8, 4, 2, 11);
  for (auto& e : c.error_signals) e.setZero();
  CHECK(duality::check_sasrec_duality(c) == 0.0);
}

TEST_CASE("identity base weights with one demonstration stay within rounding") {
  duality::DualityCase c = duality::make_random_case(6, 1, 1, 12);
  c.base_weights = Eigen::MatrixXd::Identity(6, 6);
  CHECK(duality::check_sasrec_duality(c) < 1e-12);
}

TEST_CASE("100 random cases at d=16 satisfy both identities below 1e-9") {
  const auto report = duality::run_duality_checks(16, 100, 1234);
  CHECK(report.max_sasrec_discrepancy < 1e-9);
  CHECK(report.max_icl_discrepancy < 1e-9);
  CHECK(report.passed());
}

TEST_CASE("empty demonstrations reduce full attention to the zero-shot term") {
  duality::DualityCase c = duality::make_random_case(8, 3, 5, 21);
  c.demo_inputs.clear();
  c.error_signals.clear();
  CHECK(duality::check_icl_decomposition(c) < 1e-12);
}

TEST_CASE("empty prefix reduces full attention to the demonstration term") {
  duality::DualityCase c = duality::make_random_case(8, 4, 3, 22);
  c.prefix_inputs.clear();
  CHECK(duality::check_icl_decomposition(c) < 1e-12);
}

TEST_CASE("random decomposition case at d=16 with 6 prefix and 4 demos") {
  const duality::DualityCase c = duality::make_random_case(16, 4, 6, 23);
  CHECK(duality::check_icl_decomposition(c) < 1e-9);
}

TEST_SUITE_END();
