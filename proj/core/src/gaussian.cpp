#include "gcrfbc/gaussian.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace gcrfbc {

namespace {

constexpr double kJitter = 1e-10;
constexpr double kLog2Pi = 1.8378770664093454836;

void check_dims(const ModelParams& params, const StructuredInstance& inst) {
  if (params.alpha.size() != inst.predictors.cols()) {
    throw StructuralError("alpha has " + std::to_string(params.alpha.size()) +
                          " entries but the instance has " +
                          std::to_string(inst.predictors.cols()) + " predictor columns");
  }
  if (params.beta.size() != static_cast<Eigen::Index>(inst.similarities.size())) {
    throw StructuralError("beta has " + std::to_string(params.beta.size()) +
                          " entries but the instance has " +
                          std::to_string(inst.similarities.size()) + " similarity graphs");
  }
}

}  // namespace

MatrixXd graph_laplacian(const MatrixXd& similarity) {
  MatrixXd lap = -similarity;
  lap.diagonal() += similarity.rowwise().sum();
  return lap;
}

MatrixXd build_precision(const ModelParams& params, const StructuredInstance& inst) {
  check_dims(params, inst);
  const int n = inst.n_nodes;
  MatrixXd q = MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < inst.similarities.size(); ++l) {
    q.noalias() -= params.beta[static_cast<Eigen::Index>(l)] * inst.similarities[l];
  }
  // The subtraction above put -beta_l * S^l_ii = 0 on the diagonal; now add
  // the association mass and the neighbor sums.
  const double alpha_sum = params.alpha.sum();
  for (int i = 0; i < n; ++i) {
    double diag = alpha_sum;
    for (std::size_t l = 0; l < inst.similarities.size(); ++l) {
      diag += params.beta[static_cast<Eigen::Index>(l)] * inst.similarities[l].row(i).sum();
    }
    q(i, i) = diag;
  }
  return q;
}

VectorXd build_b(const ModelParams& params, const StructuredInstance& inst) {
  check_dims(params, inst);
  if (!inst.predictors.allFinite()) {
    throw DataError("predictor matrix contains non-finite values");
  }
  return 2.0 * (inst.predictors * params.alpha);
}

GaussianCanonical::GaussianCanonical(MatrixXd q, VectorXd b, int full_cov_threshold)
    : q_(std::move(q)), b_(std::move(b)) {
  const int n = size();
  if (q_.rows() != n || q_.cols() != n) {
    throw StructuralError("Q and b dimensions do not agree");
  }

  MatrixXd precision = 2.0 * q_;
  llt_.compute(precision);
  if (llt_.info() != Eigen::Success) {
    // One retry with a small diagonal jitter; borderline conditioning only.
    precision.diagonal().array() += kJitter;
    llt_.compute(precision);
    if (llt_.info() != Eigen::Success) {
      throw NumericError(
          "Cholesky factorization of 2Q failed; a parameter is at or below the positivity floor");
    }
  }

  log_det_precision_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();

  // One step of iterative refinement keeps the residual near machine level
  // even when the precision matrix is badly scaled.
  mu_ = llt_.solve(b_);
  mu_ += llt_.solve(b_ - precision * mu_);

  marginal_var_.resize(n);
  if (n <= full_cov_threshold) {
    const MatrixXd sigma = llt_.solve(MatrixXd::Identity(n, n));
    marginal_var_ = sigma.diagonal();
  } else {
    VectorXd e = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      e[i] = 1.0;
      marginal_var_[i] = llt_.solve(e)[i];
      e[i] = 0.0;
    }
  }
}

VectorXd GaussianCanonical::solve(const VectorXd& rhs) const {
  if (rhs.size() != size()) throw StructuralError("solve: dimension mismatch");
  return llt_.solve(rhs);
}

MatrixXd GaussianCanonical::solve(const MatrixXd& rhs) const {
  if (rhs.rows() != size()) throw StructuralError("solve: dimension mismatch");
  return llt_.solve(rhs);
}

MatrixXd GaussianCanonical::full_covariance() const {
  return llt_.solve(MatrixXd::Identity(size(), size()));
}

GaussianCanonical canonical(const ModelParams& params, const StructuredInstance& inst,
                            int full_cov_threshold) {
  return GaussianCanonical(build_precision(params, inst), build_b(params, inst),
                           full_cov_threshold);
}

double log_density(const GaussianCanonical& g, const VectorXd& z) {
  if (z.size() != g.size()) throw StructuralError("log_density: dimension mismatch");
  const VectorXd centered = z - g.mu();
  const double quad = centered.dot(2.0 * g.q() * centered);
  return -0.5 * (g.size() * kLog2Pi - g.log_det_precision() + quad);
}

}  // namespace gcrfbc
