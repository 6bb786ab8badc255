#ifndef GCRFBC_LEARNING_HPP
#define GCRFBC_LEARNING_HPP

#include "gcrfbc/gaussian.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

// Curvature coefficient of the sigmoid lower bound,
//   lambda(xi) = (sigmoid(xi) - 1/2) / (2 xi) = tanh(xi/2) / (4 xi),
// with the limit 1/8 at xi = 0. Even and strictly positive.
double lambda_xi(double xi);

// d lambda / d xi. Odd; zero at xi = 0. Uses a series expansion near zero
// where the direct formula cancels.
double lambda_xi_deriv(double xi);

// Variational parameters, one per (instance, node).
struct VariationalState {
  MatrixXd xi;  // M x N

  static VariationalState ones(int n_instances, int n_nodes) {
    return {MatrixXd::Ones(n_instances, n_nodes)};
  }
};

// Per-instance pieces of the variational lower bound: the bounded model's
// Gaussian posterior over the latent vector has precision s_inv and mean m.
struct BoundParts {
  MatrixXd s_inv;        // S^{-1} = Sigma^{-1} + 2 Lambda
  VectorXd m;            // m = S((y - 1/2) + Sigma^{-1} mu)
  VectorXd lambda_diag;  // diagonal of Lambda, entries lambda(xi_i)
  double value;          // lower bound of this instance's log-likelihood
};

// Assembles S^{-1}, m and the bound value for one labeled instance. The
// value includes every normalization term, so it is directly comparable
// to (and never exceeds) the exact marginal log-likelihood.
BoundParts bound_parts(const ModelParams& params, const StructuredInstance& inst,
                       const VectorXd& xi_row);

// Sum of per-instance bound values over the dataset.
double lower_bound(const ModelParams& params, const Dataset& dataset,
                   const VariationalState& vstate);

struct BoundGradient {
  VectorXd alpha;  // K
  VectorXd beta;   // L
  MatrixXd xi;     // M x N
};

// Analytic gradient of lower_bound with respect to alpha, beta and xi.
// Contract: matches central finite differences of lower_bound.
BoundGradient grad_b(const ModelParams& params, const Dataset& dataset,
                     const VariationalState& vstate);

// Plug-in conditional log-likelihood: Bernoulli log-likelihood evaluated
// at sigmoid of the latent mean.
double nb_log_likelihood(const ModelParams& params, const Dataset& dataset);

struct ParamGradient {
  VectorXd alpha;  // K
  VectorXd beta;   // L
};

// Analytic gradient of nb_log_likelihood; same finite-difference contract.
ParamGradient grad_nb(const ModelParams& params, const Dataset& dataset);

// Coordinate-ascent tightening of the bound over xi at fixed parameters
// (fixed-point xi_i^2 = m_i^2 + S_ii). Used when reporting the bound for a
// dataset; learning itself moves xi by gradient.
VariationalState tighten_xi(const ModelParams& params, const Dataset& dataset,
                            int max_sweeps = 50, double tol = 1e-12);

}  // namespace gcrfbc

#endif  // GCRFBC_LEARNING_HPP
