#include "gcrfbc/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace gcrfbc {

namespace {

constexpr int kMaxBacktracks = 50;
constexpr int kConsecutiveSmallSteps = 3;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct AscentResult {
  VectorXd point;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

// Monotone backtracking gradient ascent. `project` pulls a trial point back
// into the feasible set; `objective` may return -inf (or throw NumericError)
// for infeasible/overflowed trials, which simply rejects the step.
AscentResult ascend(const std::function<double(const VectorXd&)>& objective,
                    const std::function<VectorXd(const VectorXd&)>& gradient,
                    const std::function<void(VectorXd&)>& project, VectorXd init,
                    const OptimizerConfig& cfg) {
  auto safe_objective = [&](const VectorXd& v) -> double {
    try {
      return objective(v);
    } catch (const NumericError&) {
      return kNegInf;
    }
  };

  AscentResult res;
  project(init);
  res.point = std::move(init);

  double f = objective(res.point);
  if (!std::isfinite(f)) {
    throw DataError("objective is not finite at the initial point");
  }
  res.trace.push_back(f);

  double step = cfg.step;
  int consec_small = 0;
  VectorXd prev_point, prev_grad;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    res.iterations = iter;
    const VectorXd g = gradient(res.point);
    if (!g.allFinite()) throw NumericError("gradient is not finite");

    // Spectral (Barzilai-Borwein) initial step when curvature information
    // is available; plain doubling otherwise. Backtracking below keeps
    // every accepted step an improvement either way.
    double s = step;
    if (prev_point.size() > 0) {
      const VectorXd dx = res.point - prev_point;
      const VectorXd dg = g - prev_grad;
      const double dgg = dg.squaredNorm();
      const double dxg = std::abs(dx.dot(dg));
      if (dgg > 0.0 && dxg > 0.0) {
        const double bb = dxg / dgg;
        if (std::isfinite(bb) && bb > 0.0) s = std::clamp(bb, 1e-12, 1e6);
      }
    }
    prev_point = res.point;
    prev_grad = g;

    bool accepted = false;
    VectorXd trial;
    double f_trial = kNegInf;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      trial = res.point + s * g;
      project(trial);
      f_trial = safe_objective(trial);
      if (std::isfinite(f_trial) && f_trial > f) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }

    if (!accepted) {
      // No improving step at any scale: stationary to working precision.
      res.converged = true;
      break;
    }

    const double rel_change = std::abs(f_trial - f) / std::max(1.0, std::abs(f));
    res.point = std::move(trial);
    f = f_trial;
    res.trace.push_back(f);
    step = 2.0 * s;

    if (rel_change < cfg.tol) {
      if (++consec_small >= kConsecutiveSmallSteps) {
        res.converged = true;
        break;
      }
    } else {
      consec_small = 0;
    }
  }
  return res;
}

int theta_size(const ModelParams& p) {
  return static_cast<int>(p.alpha.size() + p.beta.size());
}

// Working-vector <-> parameter mapping for the two constraint modes.
struct ParamCodec {
  OptimizerConfig::Mode mode;
  double floor;
  int k, l;

  VectorXd encode(const ModelParams& p) const {
    VectorXd v(k + l);
    v.head(k) = p.alpha;
    v.tail(l) = p.beta;
    if (mode == OptimizerConfig::Mode::LogReparam) v = v.array().log().matrix();
    return v;
  }

  ModelParams decode(const VectorXd& v) const {
    VectorXd theta = v.head(k + l);
    if (mode == OptimizerConfig::Mode::LogReparam) theta = theta.array().exp().matrix();
    return {theta.head(k), theta.tail(l)};
  }

  // Chain rule: d/du = theta * d/dtheta in log space, identity otherwise.
  VectorXd encode_grad(const VectorXd& theta_grad, const VectorXd& v) const {
    if (mode == OptimizerConfig::Mode::LogReparam) {
      return (theta_grad.array() * v.array().exp()).matrix();
    }
    return theta_grad;
  }

  void project(VectorXd& v) const {
    const double lo = mode == OptimizerConfig::Mode::LogReparam ? std::log(floor) : floor;
    for (int i = 0; i < k + l; ++i) v[i] = std::max(v[i], lo);
  }
};

void check_fit_preconditions(const Dataset& dataset, const ModelParams& init) {
  if (!dataset.all_labeled()) throw DataError("fit requires a fully labeled dataset");
  init.validate();
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw StructuralError("max_iters must be >= 1");
  if (!(tol > 0.0)) throw StructuralError("tol must be > 0");
  if (!(step > 0.0)) throw StructuralError("step must be > 0");
  if (!(param_floor > 0.0)) throw StructuralError("param_floor must be > 0");
}

FitReport fit_b(const Dataset& dataset, const ModelParams& init_params,
                const VariationalState& init_xi, const OptimizerConfig& cfg) {
  cfg.validate();
  check_fit_preconditions(dataset, init_params);
  const int m = dataset.size();
  const int n = dataset.n_nodes();
  if (init_xi.xi.rows() != m || init_xi.xi.cols() != n) {
    throw StructuralError("initial xi is not M x N for this dataset");
  }

  const ParamCodec codec{cfg.mode, cfg.param_floor, static_cast<int>(init_params.alpha.size()),
                         static_cast<int>(init_params.beta.size())};
  const int nt = codec.k + codec.l;

  VectorXd v0(nt + m * n);
  v0.head(nt) = codec.encode(init_params);
  v0.tail(m * n) = Eigen::Map<const VectorXd>(init_xi.xi.data(), m * n);

  auto unpack_xi = [m, n, nt](const VectorXd& v) {
    return VariationalState{Eigen::Map<const MatrixXd>(v.data() + nt, m, n)};
  };

  auto objective = [&](const VectorXd& v) -> double {
    const ModelParams p = codec.decode(v);
    if (!p.alpha.allFinite() || !p.beta.allFinite()) return kNegInf;
    return lower_bound(p, dataset, unpack_xi(v));
  };
  auto gradient = [&](const VectorXd& v) -> VectorXd {
    const ModelParams p = codec.decode(v);
    const BoundGradient g = grad_b(p, dataset, unpack_xi(v));
    VectorXd theta_grad(nt);
    theta_grad.head(codec.k) = g.alpha;
    theta_grad.tail(codec.l) = g.beta;
    VectorXd out(nt + m * n);
    out.head(nt) = codec.encode_grad(theta_grad, v.head(nt));
    out.tail(m * n) = Eigen::Map<const VectorXd>(g.xi.data(), m * n);
    return out;
  };
  auto project = [&](VectorXd& v) { codec.project(v); };

  AscentResult res = ascend(objective, gradient, project, std::move(v0), cfg);

  FitReport report;
  report.final_params = codec.decode(res.point);
  report.final_xi = unpack_xi(res.point);
  report.objective_trace = std::move(res.trace);
  report.iterations = res.iterations;
  report.converged = res.converged;
  return report;
}

FitReport fit_nb(const Dataset& dataset, const ModelParams& init_params,
                 const OptimizerConfig& cfg) {
  cfg.validate();
  check_fit_preconditions(dataset, init_params);

  const ParamCodec codec{cfg.mode, cfg.param_floor, static_cast<int>(init_params.alpha.size()),
                         static_cast<int>(init_params.beta.size())};

  auto objective = [&](const VectorXd& v) -> double {
    const ModelParams p = codec.decode(v);
    if (!p.alpha.allFinite() || !p.beta.allFinite()) return kNegInf;
    return nb_log_likelihood(p, dataset);
  };
  auto gradient = [&](const VectorXd& v) -> VectorXd {
    const ModelParams p = codec.decode(v);
    const ParamGradient g = grad_nb(p, dataset);
    VectorXd theta_grad(codec.k + codec.l);
    theta_grad.head(codec.k) = g.alpha;
    theta_grad.tail(codec.l) = g.beta;
    return codec.encode_grad(theta_grad, v);
  };
  auto project = [&](VectorXd& v) { codec.project(v); };

  AscentResult res = ascend(objective, gradient, project, codec.encode(init_params), cfg);

  FitReport report;
  report.final_params = codec.decode(res.point);
  report.objective_trace = std::move(res.trace);
  report.iterations = res.iterations;
  report.converged = res.converged;
  return report;
}

GradientCheck check_gradients(const std::function<double(const VectorXd&)>& objective,
                              const std::function<VectorXd(const VectorXd&)>& gradient,
                              const VectorXd& point, double step, double tolerance) {
  if (!std::isfinite(objective(point))) {
    throw DataError("objective is not finite at the check point");
  }

  GradientCheck check;
  check.analytic = gradient(point);
  const int n = static_cast<int>(point.size());
  check.numeric.resize(n);
  check.rel_err.resize(n);

  VectorXd x = point;
  for (int i = 0; i < n; ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double fp = objective(x);
    x[i] = saved - step;
    const double fm = objective(x);
    x[i] = saved;
    check.numeric[i] = (fp - fm) / (2.0 * step);

    const double denom =
        std::max({std::abs(check.analytic[i]), std::abs(check.numeric[i]), 1e-6});
    check.rel_err[i] = std::abs(check.analytic[i] - check.numeric[i]) / denom;
    check.max_rel_err = std::max(check.max_rel_err, check.rel_err[i]);
    if (check.rel_err[i] > tolerance) {
      check.failed.push_back(i);
      check.pass = false;
    }
  }
  return check;
}

}  // namespace gcrfbc
