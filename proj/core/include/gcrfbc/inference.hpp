#ifndef GCRFBC_INFERENCE_HPP
#define GCRFBC_INFERENCE_HPP

#include "gcrfbc/gaussian.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

// Numerically stable logistic sigmoid; no overflow for |x| <= 700.
double sigmoid(double x);

// log(sigmoid(x)) without underflow to -inf for large negative x.
double log_sigmoid(double x);

// Composite Simpson settings for the per-node sigmoid-Gaussian integral.
// The integration interval is [mu - w*sd, mu + w*sd].
struct QuadratureConfig {
  int points = 257;              // odd, >= 3
  double interval_width = 10.0;  // w

  void validate() const;
};

// Below this marginal variance the integrand is treated as a point mass
// and the integral collapses to sigmoid(mean).
inline constexpr double kVarianceFloor = 1e-12;

struct PredictionResult {
  VectorXd probs;         // P(y_i = 1 | x), each strictly inside (0, 1)
  VectorXd mu;            // latent means
  VectorXd marginal_var;  // diagonal of the latent covariance
  double variance_norm;   // Euclidean norm of marginal_var
};

// integral of sigmoid(z) * N(z | mean, var) dz by composite Simpson.
double sigmoid_gaussian_expectation(double mean, double var,
                                    const QuadratureConfig& quad = {});

// Marginalized prediction: per-node 1-D quadrature against the latent
// marginal N(mu_i, Sigma_ii).
PredictionResult predict_b(const ModelParams& params, const StructuredInstance& inst,
                           const QuadratureConfig& quad = {});

// Plug-in prediction: sigmoid applied to the latent mean.
PredictionResult predict_nb(const ModelParams& params, const StructuredInstance& inst);

}  // namespace gcrfbc

#endif  // GCRFBC_INFERENCE_HPP
