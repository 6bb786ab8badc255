#ifndef GCRFBC_GAUSSIAN_HPP
#define GCRFBC_GAUSSIAN_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gcrfbc/types.hpp"

namespace gcrfbc {

// Above this node count the full covariance is no longer formed when
// constructing a GaussianCanonical; marginal variances are extracted
// column by column from the factorization instead.
inline constexpr int kFullCovarianceThreshold = 512;

// Canonical multivariate Gaussian of the latent layer: precision 2Q,
// potential vector b, mean mu = (2Q)^{-1} b. Holds the Cholesky factor of
// 2Q so downstream code can solve against the precision without forming
// the covariance. Immutable after construction.
class GaussianCanonical {
 public:
  GaussianCanonical(MatrixXd q, VectorXd b, int full_cov_threshold = kFullCovarianceThreshold);

  int size() const { return static_cast<int>(b_.size()); }
  const MatrixXd& q() const { return q_; }
  const VectorXd& b() const { return b_; }
  const VectorXd& mu() const { return mu_; }
  const VectorXd& marginal_var() const { return marginal_var_; }
  double variance_norm() const { return marginal_var_.norm(); }

  // log |2Q|, from the Cholesky diagonal.
  double log_det_precision() const { return log_det_precision_; }

  // x = (2Q)^{-1} rhs
  VectorXd solve(const VectorXd& rhs) const;
  MatrixXd solve(const MatrixXd& rhs) const;

  // Dense Sigma = (2Q)^{-1}. O(N^3); learning needs it as a matrix, the
  // prediction path does not.
  MatrixXd full_covariance() const;

  const Eigen::LLT<MatrixXd>& factor() const { return llt_; }

 private:
  MatrixXd q_;
  VectorXd b_;
  Eigen::LLT<MatrixXd> llt_;  // factor of 2Q (plus jitter if it was needed)
  VectorXd mu_;
  VectorXd marginal_var_;
  double log_det_precision_ = 0.0;
};

// Q per the canonical GCRF form: Q_ii = sum_k alpha_k + sum_l beta_l * sum_h S^l_ih,
// Q_ij = -sum_l beta_l S^l_ij for i != j.
MatrixXd build_precision(const ModelParams& params, const StructuredInstance& inst);

// b_i = 2 * sum_k alpha_k R_k(x_i)
VectorXd build_b(const ModelParams& params, const StructuredInstance& inst);

GaussianCanonical canonical(const ModelParams& params, const StructuredInstance& inst,
                            int full_cov_threshold = kFullCovarianceThreshold);

// log N(z | mu, (2Q)^{-1})
double log_density(const GaussianCanonical& g, const VectorXd& z);

// diag(rowsum(S)) - S; the derivative of Q with respect to the graph's beta.
MatrixXd graph_laplacian(const MatrixXd& similarity);

}  // namespace gcrfbc

#endif  // GCRFBC_GAUSSIAN_HPP
