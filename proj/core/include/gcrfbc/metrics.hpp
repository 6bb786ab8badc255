#ifndef GCRFBC_METRICS_HPP
#define GCRFBC_METRICS_HPP

#include <string>

#include "gcrfbc/inference.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

enum class Variant { B, Nb };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

// Rank-based (Mann-Whitney) AUC; tied scores contribute 1/2. Requires at
// least one positive and one negative label.
double auc(const VectorXd& scores, const VectorXi& labels);

struct EvalReport {
  double auc = 0.0;
  // Exact conditional log-likelihood for the plug-in variant; variational
  // lower bound (tightened over xi) for the marginalized one.
  double log_likelihood = 0.0;
  std::string likelihood_semantics;  // "exact" or "lower_bound"
  double variance_norm = 0.0;        // mean per-instance ||diag(Sigma)||_2
  MatrixXd per_node_probs;           // M x N
};

// Pools node-level (probability, label) pairs across all instances for a
// single AUC, and reports the variant's likelihood semantics.
EvalReport evaluate(Variant variant, const ModelParams& params, const Dataset& dataset,
                    const QuadratureConfig& quad = {});

}  // namespace gcrfbc

#endif  // GCRFBC_METRICS_HPP
