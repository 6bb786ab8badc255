#include "gcrfbc/inference.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gcrfbc {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double std_normal_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }
}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

void QuadratureConfig::validate() const {
  if (points < 3 || points % 2 == 0) {
    throw StructuralError("quadrature point count must be odd and >= 3, got " +
                          std::to_string(points));
  }
  if (!(interval_width > 0.0) || !std::isfinite(interval_width)) {
    throw StructuralError("quadrature interval width must be positive and finite");
  }
}

double sigmoid_gaussian_expectation(double mean, double var, const QuadratureConfig& quad) {
  quad.validate();
  if (var < 0.0) {
    throw NumericError("negative marginal variance " + std::to_string(var));
  }
  if (var < kVarianceFloor) return sigmoid(mean);

  // Standardized variable: integral of sigmoid(mean + sd*t) * phi(t) dt
  // over [-w, w], composite Simpson.
  const double sd = std::sqrt(var);
  const double w = quad.interval_width;
  const int n = quad.points;
  const double h = 2.0 * w / (n - 1);

  auto f = [&](double t) { return sigmoid(mean + sd * t) * std_normal_pdf(t); };

  double sum = f(-w) + f(w);
  for (int k = 1; k < n - 1; ++k) {
    const double t = -w + k * h;
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(t);
  }
  double value = sum * h / 3.0;

  // The integrand is strictly inside (0, 1); keep the estimate there too.
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (value >= 1.0) value = hi;
  if (value <= 0.0) value = std::numeric_limits<double>::min();
  return value;
}

PredictionResult predict_b(const ModelParams& params, const StructuredInstance& inst,
                           const QuadratureConfig& quad) {
  const GaussianCanonical g = canonical(params, inst);
  const int n = g.size();
  PredictionResult out;
  out.mu = g.mu();
  out.marginal_var = g.marginal_var();
  out.probs.resize(n);
  for (int i = 0; i < n; ++i) {
    out.probs[i] = sigmoid_gaussian_expectation(out.mu[i], out.marginal_var[i], quad);
  }
  out.variance_norm = out.marginal_var.norm();
  return out;
}

PredictionResult predict_nb(const ModelParams& params, const StructuredInstance& inst) {
  const GaussianCanonical g = canonical(params, inst);
  PredictionResult out;
  out.mu = g.mu();
  out.marginal_var = g.marginal_var();
  out.probs = out.mu.unaryExpr([](double m) { return sigmoid(m); });
  out.variance_norm = out.marginal_var.norm();
  return out;
}

}  // namespace gcrfbc
