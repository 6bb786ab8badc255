#include "gcrfbc/learning.hpp"

#include <cmath>
#include <string>

#include "gcrfbc/inference.hpp"

namespace gcrfbc {

namespace {

void check_labeled(const StructuredInstance& inst) {
  if (!inst.labeled()) throw DataError("instance has no labels; learning requires them");
}

void check_vstate(const Dataset& dataset, const VariationalState& vstate) {
  if (vstate.xi.rows() != dataset.size() ||
      (dataset.size() > 0 && vstate.xi.cols() != dataset.n_nodes())) {
    throw StructuralError("variational state is not M x N for this dataset");
  }
}

// Factor of S^{-1} = 2Q + 2*Lambda. Lambda's positive diagonal only improves
// conditioning over 2Q itself, so a failure here means real trouble.
Eigen::LLT<MatrixXd> factor_s_inv(const MatrixXd& s_inv) {
  Eigen::LLT<MatrixXd> llt(s_inv);
  if (llt.info() != Eigen::Success) {
    throw NumericError("Cholesky factorization of S^{-1} failed");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<MatrixXd>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

struct InstanceBound {
  GaussianCanonical g;
  Eigen::LLT<MatrixXd> s_llt;
  BoundParts parts;
  VectorXd u;  // (y - 1/2) + b; note Sigma^{-1} mu = b
};

InstanceBound instance_bound(const ModelParams& params, const StructuredInstance& inst,
                             const VectorXd& xi_row) {
  check_labeled(inst);
  if (xi_row.size() != inst.n_nodes) {
    throw StructuralError("xi row length does not match node count");
  }

  InstanceBound ib{canonical(params, inst), {}, {}, {}};
  const int n = inst.n_nodes;
  const VectorXd y = inst.labels->cast<double>();

  ib.parts.lambda_diag = xi_row.unaryExpr([](double x) { return lambda_xi(x); });
  ib.parts.s_inv = 2.0 * ib.g.q();
  ib.parts.s_inv.diagonal() += 2.0 * ib.parts.lambda_diag;
  ib.s_llt = factor_s_inv(ib.parts.s_inv);

  ib.u = (y.array() - 0.5).matrix() + ib.g.b();
  ib.parts.m = ib.s_llt.solve(ib.u);

  double xi_terms = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = xi_row[i];
    xi_terms += log_sigmoid(xi) - 0.5 * xi + ib.parts.lambda_diag[i] * xi * xi;
  }

  // mu' Sigma^{-1} mu = b' mu and m' S^{-1} m = u' m. The 1/2 log|Sigma^{-1}|
  // - 1/2 log|S^{-1}| pair carries the normalization constants; the
  // (2 pi)^{N/2} factors of the two Gaussians cancel exactly.
  ib.parts.value = xi_terms - 0.5 * ib.g.b().dot(ib.g.mu()) + 0.5 * ib.u.dot(ib.parts.m) +
                   0.5 * (ib.g.log_det_precision() - log_det_from_llt(ib.s_llt));
  return ib;
}

}  // namespace

double lambda_xi(double xi) {
  if (xi == 0.0) return 0.125;
  return std::tanh(0.5 * xi) / (4.0 * xi);
}

double lambda_xi_deriv(double xi) {
  const double ax = std::abs(xi);
  if (ax < 0.05) {
    // lambda(xi) = 1/8 - xi^2/96 + xi^4/960 - ...; differentiating,
    // the direct formula loses all digits to cancellation here.
    return xi * (-1.0 / 48.0 + xi * xi / 240.0);
  }
  const double s = sigmoid(xi);
  const double sp = s * (1.0 - s);
  return sp / (2.0 * xi) - (s - 0.5) / (2.0 * xi * xi);
}

BoundParts bound_parts(const ModelParams& params, const StructuredInstance& inst,
                       const VectorXd& xi_row) {
  return instance_bound(params, inst, xi_row).parts;
}

double lower_bound(const ModelParams& params, const Dataset& dataset,
                   const VariationalState& vstate) {
  check_vstate(dataset, vstate);
  double total = 0.0;
  for (int j = 0; j < dataset.size(); ++j) {
    total += instance_bound(params, dataset.instances[j], vstate.xi.row(j)).parts.value;
  }
  return total;
}

BoundGradient grad_b(const ModelParams& params, const Dataset& dataset,
                     const VariationalState& vstate) {
  check_vstate(dataset, vstate);
  const int k = static_cast<int>(params.alpha.size());
  const int l = static_cast<int>(params.beta.size());

  BoundGradient grad;
  grad.alpha = VectorXd::Zero(k);
  grad.beta = VectorXd::Zero(l);
  grad.xi = MatrixXd::Zero(dataset.size(), dataset.n_nodes());

  for (int j = 0; j < dataset.size(); ++j) {
    const StructuredInstance& inst = dataset.instances[j];
    const int n = inst.n_nodes;
    const InstanceBound ib = instance_bound(params, inst, vstate.xi.row(j));

    const VectorXd& mu = ib.g.mu();
    const VectorXd& m = ib.parts.m;
    const MatrixXd sigma = ib.g.full_covariance();
    const MatrixXd s = ib.s_llt.solve(MatrixXd::Identity(n, n));
    const MatrixXd sigma_minus_s = sigma - s;

    // d(bound)/d(theta) = db'(m - mu) + 1/2 mu' dP mu - 1/2 m' dP m
    //                     + 1/2 tr((Sigma - S) dP)
    // with P = 2Q, dP/d(alpha_k) = 2I and dP/d(beta_l) = 2 * Laplacian_l.
    const VectorXd m_minus_mu = m - mu;
    for (int kk = 0; kk < k; ++kk) {
      grad.alpha[kk] += 2.0 * inst.predictors.col(kk).dot(m_minus_mu) + mu.squaredNorm() -
                        m.squaredNorm() + sigma_minus_s.trace();
    }
    for (int ll = 0; ll < l; ++ll) {
      const MatrixXd lap = graph_laplacian(inst.similarities[static_cast<std::size_t>(ll)]);
      grad.beta[ll] += mu.dot(lap * mu) - m.dot(lap * m) +
                       sigma_minus_s.cwiseProduct(lap).sum();
    }

    // d(bound)/d(xi_i) = lambda'(xi_i) (xi_i^2 - m_i^2 - S_ii); the linear
    // terms of the bound in xi cancel against sigmoid identities.
    for (int i = 0; i < n; ++i) {
      const double xi = vstate.xi(j, i);
      grad.xi(j, i) = lambda_xi_deriv(xi) * (xi * xi - m[i] * m[i] - s(i, i));
    }
  }
  return grad;
}

double nb_log_likelihood(const ModelParams& params, const Dataset& dataset) {
  double total = 0.0;
  for (const StructuredInstance& inst : dataset.instances) {
    check_labeled(inst);
    const VectorXd mu = canonical(params, inst).mu();
    for (int i = 0; i < inst.n_nodes; ++i) {
      total += (*inst.labels)[i] == 1 ? log_sigmoid(mu[i]) : log_sigmoid(-mu[i]);
    }
  }
  return total;
}

ParamGradient grad_nb(const ModelParams& params, const Dataset& dataset) {
  const int k = static_cast<int>(params.alpha.size());
  const int l = static_cast<int>(params.beta.size());
  ParamGradient grad{VectorXd::Zero(k), VectorXd::Zero(l)};

  for (const StructuredInstance& inst : dataset.instances) {
    check_labeled(inst);
    const GaussianCanonical g = canonical(params, inst);
    const VectorXd& mu = g.mu();
    const VectorXd residual =
        inst.labels->cast<double>() - mu.unaryExpr([](double m) { return sigmoid(m); });
    // (y - sigmoid(mu))' dmu/dtheta with dmu/dtheta = Sigma (db - dP mu);
    // one solve gives the left factor for every coordinate.
    const VectorXd w = g.solve(residual);
    for (int kk = 0; kk < k; ++kk) {
      grad.alpha[kk] += w.dot(2.0 * inst.predictors.col(kk) - 2.0 * mu);
    }
    for (int ll = 0; ll < l; ++ll) {
      const MatrixXd lap = graph_laplacian(inst.similarities[static_cast<std::size_t>(ll)]);
      grad.beta[ll] += -2.0 * w.dot(lap * mu);
    }
  }
  return grad;
}

VariationalState tighten_xi(const ModelParams& params, const Dataset& dataset,
                            int max_sweeps, double tol) {
  VariationalState vstate = VariationalState::ones(dataset.size(), dataset.n_nodes());
  for (int j = 0; j < dataset.size(); ++j) {
    const StructuredInstance& inst = dataset.instances[j];
    VectorXd xi_row = vstate.xi.row(j);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const InstanceBound ib = instance_bound(params, inst, xi_row);
      const MatrixXd s = ib.s_llt.solve(MatrixXd::Identity(inst.n_nodes, inst.n_nodes));
      double change = 0.0;
      for (int i = 0; i < inst.n_nodes; ++i) {
        const double next = std::sqrt(ib.parts.m[i] * ib.parts.m[i] + s(i, i));
        change = std::max(change, std::abs(next - xi_row[i]));
        xi_row[i] = next;
      }
      if (change < tol) break;
    }
    vstate.xi.row(j) = xi_row;
  }
  return vstate;
}

}  // namespace gcrfbc
