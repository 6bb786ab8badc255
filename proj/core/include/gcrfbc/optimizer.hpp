#ifndef GCRFBC_OPTIMIZER_HPP
#define GCRFBC_OPTIMIZER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "gcrfbc/learning.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

// Bound-constrained first-order ascent. The default mode optimizes
// theta = exp(u), which keeps alpha and beta positive without projection;
// the projected mode steps in theta directly and clamps at the floor.
struct OptimizerConfig {
  enum class Mode { LogReparam, Projected };

  int max_iters = 500;
  double tol = 1e-6;        // relative objective-change stopping threshold
  double step = 0.1;        // initial step size
  double param_floor = kParamFloor;
  Mode mode = Mode::LogReparam;

  void validate() const;
};

struct FitReport {
  ModelParams final_params;
  std::optional<VariationalState> final_xi;
  std::vector<double> objective_trace;  // objective after init and each accepted step
  int iterations = 0;
  bool converged = false;
};

// Maximize the variational lower bound jointly over (alpha, beta, xi).
// xi starts at the given state (conventionally all ones).
FitReport fit_b(const Dataset& dataset, const ModelParams& init_params,
                const VariationalState& init_xi, const OptimizerConfig& cfg = {});

// Maximize the plug-in conditional log-likelihood over (alpha, beta).
FitReport fit_nb(const Dataset& dataset, const ModelParams& init_params,
                 const OptimizerConfig& cfg = {});

struct GradientCheck {
  VectorXd analytic;
  VectorXd numeric;          // central finite differences
  VectorXd rel_err;          // |analytic - numeric| / max(|analytic|, |numeric|, 1e-6)
  std::vector<int> failed;   // coordinates whose rel_err exceeds the tolerance
  double max_rel_err = 0.0;
  bool pass = true;
};

// Central-difference verification of an analytic gradient, coordinate by
// coordinate.
GradientCheck check_gradients(const std::function<double(const VectorXd&)>& objective,
                              const std::function<VectorXd(const VectorXd&)>& gradient,
                              const VectorXd& point, double step = 1e-5,
                              double tolerance = 1e-4);

}  // namespace gcrfbc

#endif  // GCRFBC_OPTIMIZER_HPP
