#include <doctest.h>

#include <cmath>

#include "gcrfbc/inference.hpp"
#include "oracle.hpp"

using namespace gcrfbc;

TEST_CASE("sigmoid: basics and saturation") {
  CHECK(sigmoid(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sigmoid(500.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigmoid(-500.0) >= 0.0);
  CHECK(sigmoid(-2.0) == doctest::Approx(1.0 - sigmoid(2.0)).epsilon(1e-15));
  CHECK(std::isfinite(sigmoid(700.0)));
  CHECK(std::isfinite(sigmoid(-700.0)));
}

TEST_CASE("sigmoid: monotone and complement identity on a grid") {
  double prev = 0.0;
  for (int i = -60; i <= 60; ++i) {
    const double x = i * 0.5;
    const double s = sigmoid(x);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    if (i > -60) CHECK(s > prev);
    prev = s;
    CHECK(std::abs(sigmoid(-x) - (1.0 - s)) < 1e-15);
  }
}

TEST_CASE("log_sigmoid: stable for large magnitudes") {
  CHECK(log_sigmoid(0.0) == doctest::Approx(std::log(0.5)));
  CHECK(log_sigmoid(-800.0) == doctest::Approx(-800.0));
  CHECK(log_sigmoid(800.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(log_sigmoid(-800.0)));
}

TEST_CASE("quadrature config validation") {
  CHECK_NOTHROW(QuadratureConfig{}.validate());
  CHECK_THROWS_AS((QuadratureConfig{4, 10.0}.validate()), StructuralError);
  CHECK_THROWS_AS((QuadratureConfig{1, 10.0}.validate()), StructuralError);
  CHECK_THROWS_AS((QuadratureConfig{257, 0.0}.validate()), StructuralError);
}

TEST_CASE("sigmoid_gaussian_expectation: odd symmetry gives one half") {
  CHECK(sigmoid_gaussian_expectation(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sigmoid_gaussian_expectation(0.0, 7.3) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sigmoid_gaussian_expectation: collapses to a point mass") {
  CHECK(sigmoid_gaussian_expectation(2.0, 0.0) == doctest::Approx(sigmoid(2.0)).epsilon(1e-15));
  CHECK(sigmoid_gaussian_expectation(2.0, 1e-13) == doctest::Approx(0.8808).epsilon(1e-4));
}

TEST_CASE("sigmoid_gaussian_expectation: matches brute-force trapezoid oracle") {
  const double ref = oracle::trapezoid(
      [](double z) { return oracle::sigmoid(z) * oracle::normal_pdf((z - 1.0) / 2.0) / 2.0; },
      -30.0, 30.0, 1000001);
  CHECK(sigmoid_gaussian_expectation(1.0, 4.0) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("sigmoid_gaussian_expectation: negative variance is a numeric error") {
  CHECK_THROWS_AS(sigmoid_gaussian_expectation(0.0, -1e-3), NumericError);
}

TEST_CASE("predict_b: doubling the grid changes nothing measurable") {
  const auto inst = oracle::random_instance(61, 4, 2, 2, false);
  const auto p = oracle::random_params(62, 2, 2);
  const PredictionResult base = predict_b(p, inst);
  const PredictionResult fine = predict_b(p, inst, QuadratureConfig{513, 10.0});
  CHECK((base.probs - fine.probs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("predict_b: probabilities are strictly inside (0, 1)") {
  StructuredInstance inst;
  inst.n_nodes = 2;
  inst.predictors = (MatrixXd(2, 1) << 40.0, -40.0).finished();
  inst.similarities = {MatrixXd::Zero(2, 2)};
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  const PredictionResult pred = predict_b(p, inst);
  CHECK(pred.probs[0] > 0.0);
  CHECK(pred.probs[0] < 1.0);
  CHECK(pred.probs[1] > 0.0);
  CHECK(pred.probs[1] < 1.0);
}

TEST_CASE("predict_b: marginalization identity against full N-dim quadrature") {
  for (int n = 1; n <= 3; ++n) {
    const auto inst = oracle::random_instance(70 + static_cast<unsigned>(n), n, 2, 2, false);
    const auto p = oracle::random_params(80 + static_cast<unsigned>(n), 2, 2);
    const PredictionResult pred = predict_b(p, inst);
    const GaussianCanonical g = canonical(p, inst);
    const MatrixXd sigma = g.full_covariance();
    const int points = n == 3 ? 161 : 301;
    for (int i = 0; i < n; ++i) {
      const double full = oracle::marginal_prob(g.mu(), sigma, i, points);
      CHECK(pred.probs[i] == doctest::Approx(full).epsilon(1e-5));
    }
  }
}

TEST_CASE("predict_nb: sigmoid of the mean") {
  StructuredInstance inst;
  inst.n_nodes = 1;
  inst.predictors = MatrixXd::Zero(1, 1);
  inst.similarities = {MatrixXd::Zero(1, 1)};
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  CHECK(predict_nb(p, inst).probs[0] == doctest::Approx(0.5).epsilon(1e-12));

  inst.predictors(0, 0) = -40.0;  // mu = -40
  const PredictionResult pred = predict_nb(p, inst);
  CHECK(pred.probs[0] < 1e-15);
  CHECK(std::isfinite(pred.probs[0]));
}

TEST_CASE("predict_nb: composes canonical mean with the sigmoid") {
  const auto inst = oracle::random_instance(91, 3, 2, 2, false);
  const auto p = oracle::random_params(92, 2, 2);
  const PredictionResult pred = predict_nb(p, inst);
  const VectorXd mu = canonical(p, inst).mu();
  for (int i = 0; i < 3; ++i) {
    CHECK(pred.probs[i] == doctest::Approx(oracle::sigmoid(mu[i])).epsilon(1e-12));
  }
  CHECK(pred.variance_norm ==
        doctest::Approx(pred.marginal_var.norm()).epsilon(1e-12));
}

TEST_CASE("predict_b and predict_nb agree when the variance norm vanishes") {
  const auto inst = oracle::random_instance(95, 3, 2, 2, false);
  const ModelParams p{VectorXd::Constant(2, 5e5), VectorXd::Ones(2)};
  const PredictionResult pb = predict_b(p, inst);
  const PredictionResult pnb = predict_nb(p, inst);
  REQUIRE(pb.variance_norm < 1e-6);
  CHECK((pb.probs - pnb.probs).cwiseAbs().maxCoeff() < 1e-4);
}
