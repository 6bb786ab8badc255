#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gcrfbc/gaussian.hpp"
#include "oracle.hpp"

using namespace gcrfbc;

namespace {

StructuredInstance single_node(double r) {
  StructuredInstance inst;
  inst.n_nodes = 1;
  inst.predictors = MatrixXd::Constant(1, 1, r);
  inst.similarities = {MatrixXd::Zero(1, 1)};
  return inst;
}

StructuredInstance two_node_pair() {
  StructuredInstance inst;
  inst.n_nodes = 2;
  inst.predictors = MatrixXd::Ones(2, 1);
  MatrixXd s(2, 2);
  s << 0, 1, 1, 0;
  inst.similarities = {s};
  return inst;
}

}  // namespace

TEST_CASE("build_precision: single node without neighbors") {
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  const MatrixXd q = build_precision(p, single_node(0.4));
  REQUIRE(q.rows() == 1);
  CHECK(q(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("build_precision: two nodes, one edge") {
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  const MatrixXd q = build_precision(p, two_node_pair());
  CHECK(q(0, 0) == doctest::Approx(2.0));
  CHECK(q(0, 1) == doctest::Approx(-1.0));
  CHECK(q(1, 0) == doctest::Approx(-1.0));
  CHECK(q(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("build_precision: 2Q is positive definite for random inputs") {
  for (unsigned seed = 0; seed < 8; ++seed) {
    const auto inst = oracle::random_instance(seed, 3, 2, 2, false);
    const auto p = oracle::random_params(seed + 100, 2, 2, 0.05, 3.0);
    const MatrixXd prec = 2.0 * build_precision(p, inst);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(prec);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("build_precision: dimension mismatch is a structural error") {
  const ModelParams p{VectorXd::Ones(2), VectorXd::Ones(1)};
  CHECK_THROWS_AS(build_precision(p, single_node(0.0)), StructuralError);
  const ModelParams p2{VectorXd::Ones(1), VectorXd::Ones(3)};
  CHECK_THROWS_AS(build_precision(p2, single_node(0.0)), StructuralError);
}

TEST_CASE("build_b: direct evaluations") {
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  CHECK(build_b(p, single_node(0.5))[0] == doctest::Approx(1.0));

  StructuredInstance inst;
  inst.n_nodes = 2;
  inst.predictors = MatrixXd::Ones(2, 2);
  inst.similarities = {MatrixXd::Zero(2, 2)};
  const ModelParams p2{(VectorXd(2) << 2.0, 3.0).finished(), VectorXd::Ones(1)};
  const VectorXd b = build_b(p2, inst);
  CHECK(b[0] == doctest::Approx(10.0));
  CHECK(b[1] == doctest::Approx(10.0));
}

TEST_CASE("build_b: matches a plain-loop recomputation") {
  const auto inst = oracle::random_instance(3, 4, 2, 1, false);
  const ModelParams p{(VectorXd(2) << 0.3, 0.7).finished(), VectorXd::Ones(1)};
  const VectorXd b = build_b(p, inst);
  for (int i = 0; i < 4; ++i) {
    double expect = 0.0;
    for (int k = 0; k < 2; ++k) expect += p.alpha[k] * inst.predictors(i, k);
    CHECK(b[i] == doctest::Approx(2.0 * expect).epsilon(1e-14));
  }
}

TEST_CASE("build_b: non-finite predictors are a data error") {
  StructuredInstance inst = single_node(0.5);
  inst.predictors(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  CHECK_THROWS_AS(build_b(p, inst), DataError);
}

TEST_CASE("canonical: single node closed form") {
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  const GaussianCanonical g = canonical(p, single_node(0.7));
  CHECK(g.mu()[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(g.marginal_var()[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("canonical: symmetry forces equal means") {
  const ModelParams p{VectorXd::Ones(1), VectorXd::Ones(1)};
  const GaussianCanonical g = canonical(p, two_node_pair());  // b = [2, 2]
  CHECK(g.b()[0] == doctest::Approx(2.0));
  CHECK(g.mu()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.mu()[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical: mean matches an explicit-inverse oracle") {
  const auto inst = oracle::random_instance(9, 3, 2, 2, false);
  const auto p = oracle::random_params(10, 2, 2);
  const GaussianCanonical g = canonical(p, inst);
  const MatrixXd prec = 2.0 * build_precision(p, inst);
  const VectorXd mu_oracle = prec.inverse() * build_b(p, inst);
  CHECK((g.mu() - mu_oracle).norm() < 1e-8);
  const MatrixXd sigma_oracle = prec.inverse();
  CHECK((g.marginal_var() - sigma_oracle.diagonal()).norm() < 1e-8);
}

TEST_CASE("canonical: mean residual stays tiny") {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const auto inst = oracle::random_instance(seed + 40, 5, 2, 2, false);
    const auto p = oracle::random_params(seed + 50, 2, 2, 0.01, 5.0);
    const GaussianCanonical g = canonical(p, inst);
    const MatrixXd prec = 2.0 * g.q();
    const double resid = (prec * g.mu() - g.b()).norm();
    CHECK(resid <= 1e-10 * std::max(g.b().norm(), 1e-30));
  }
}

TEST_CASE("canonical: factorization failure is a numeric error") {
  CHECK_THROWS_AS(GaussianCanonical(MatrixXd::Constant(1, 1, -1.0), VectorXd::Zero(1)),
                  NumericError);
}

TEST_CASE("log_density: standard normal at the mode") {
  const GaussianCanonical g(MatrixXd::Constant(1, 1, 0.5), VectorXd::Zero(1));  // mu 0, var 1
  CHECK(g.marginal_var()[0] == doctest::Approx(1.0));
  CHECK(log_density(g, VectorXd::Zero(1)) == doctest::Approx(-0.9189385332046727).epsilon(1e-12));
}

TEST_CASE("log_density: maximal at the mean") {
  const auto inst = oracle::random_instance(17, 3, 2, 2, false);
  const auto p = oracle::random_params(18, 2, 2);
  const GaussianCanonical g = canonical(p, inst);
  const double at_mode = log_density(g, g.mu());
  for (int i = 0; i < 3; ++i) {
    VectorXd z = g.mu();
    z[i] += 0.05;
    CHECK(log_density(g, z) < at_mode);
    z[i] -= 0.1;
    CHECK(log_density(g, z) < at_mode);
  }
}

TEST_CASE("log_density: matches quadratic-form oracle at N=2") {
  const auto inst = oracle::random_instance(21, 2, 2, 2, false);
  const auto p = oracle::random_params(22, 2, 2);
  const GaussianCanonical g = canonical(p, inst);
  const VectorXd z = (VectorXd(2) << 0.3, -1.1).finished();

  const MatrixXd prec = 2.0 * build_precision(p, inst);
  const VectorXd d = z - g.mu();
  const double expect = -0.5 * (2.0 * std::log(2.0 * M_PI) - std::log(prec.determinant()) +
                                d.dot(prec * d));
  CHECK(log_density(g, z) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("log_density: integrates to one at N=1") {
  const GaussianCanonical g(MatrixXd::Constant(1, 1, 0.8), VectorXd::Constant(1, 0.5));
  const double sd = std::sqrt(g.marginal_var()[0]);
  const double mu = g.mu()[0];
  const double mass = oracle::trapezoid(
      [&g](double z) { return std::exp(log_density(g, VectorXd::Constant(1, z))); },
      mu - 10.0 * sd, mu + 10.0 * sd, 200001);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("precision is linear in beta across graphs") {
  const auto inst = oracle::random_instance(33, 4, 2, 3, false);
  const VectorXd alpha = (VectorXd(2) << 0.4, 0.9).finished();
  const VectorXd beta = (VectorXd(3) << 0.3, 1.2, 2.1).finished();
  const MatrixXd q_full = build_precision({alpha, beta}, inst);

  MatrixXd sum = MatrixXd::Zero(4, 4);
  for (int l = 0; l < 3; ++l) {
    StructuredInstance single = inst;
    single.similarities = {inst.similarities[static_cast<std::size_t>(l)]};
    sum += build_precision({alpha, VectorXd::Constant(1, beta[l])}, single);
  }
  sum -= 2.0 * MatrixXd::Identity(4, 4) * alpha.sum();  // (L-1) copies of the alpha diagonal
  CHECK((q_full - sum).norm() < 1e-12);
}

TEST_CASE("mean is invariant under joint scaling of alpha and beta") {
  const auto inst = oracle::random_instance(35, 4, 2, 2, false);
  const auto p = oracle::random_params(36, 2, 2);
  const double c = 3.7;
  const ModelParams scaled{c * p.alpha, c * p.beta};
  const VectorXd mu1 = canonical(p, inst).mu();
  const VectorXd mu2 = canonical(scaled, inst).mu();
  CHECK((mu1 - mu2).norm() < 1e-10);
}

TEST_CASE("model params validation") {
  ModelParams p{VectorXd::Ones(2), VectorXd::Ones(2)};
  CHECK_NOTHROW(p.validate());
  p.alpha[1] = 0.0;
  CHECK_THROWS_AS(p.validate(), DataError);
  p.alpha[1] = 1.0;
  p.beta[0] = -2.0;
  CHECK_THROWS_AS(p.validate(), DataError);
  CHECK_THROWS_AS((ModelParams{VectorXd(0), VectorXd::Ones(1)}.validate()), StructuralError);
}

TEST_CASE("instance validation rejects malformed similarity matrices") {
  StructuredInstance inst = oracle::random_instance(44, 3, 2, 1, true);
  CHECK_NOTHROW(inst.validate());

  StructuredInstance bad = inst;
  bad.similarities[0](1, 1) = 0.2;  // nonzero diagonal
  CHECK_THROWS_AS(bad.validate(), DataError);

  bad = inst;
  bad.similarities[0](0, 1) = -0.5;
  CHECK_THROWS_AS(bad.validate(), DataError);

  bad = inst;
  bad.similarities[0](0, 1) += 1e-3;  // asymmetric
  CHECK_THROWS_AS(bad.validate(), DataError);

  bad = inst;
  (*bad.labels)[0] = 2;
  CHECK_THROWS_AS(bad.validate(), DataError);
}
