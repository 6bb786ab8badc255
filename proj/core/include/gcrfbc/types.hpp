#ifndef GCRFBC_TYPES_HPP
#define GCRFBC_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gcrfbc/errors.hpp"

namespace gcrfbc {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// Parameters below this floor are rejected; the optimizer clamps to it.
// Strict positivity is what the model needs, but cannot be enforced in
// floating point, so the floor stands in for it.
inline constexpr double kParamFloor = 1e-8;

// Weights of the association (alpha, one per unstructured predictor) and
// interaction (beta, one per similarity graph) potentials. All entries
// must be positive; positivity makes the latent precision matrix
// diagonally dominant and hence positive definite.
struct ModelParams {
  VectorXd alpha;  // K >= 1 entries, each >= kParamFloor
  VectorXd beta;   // L >= 1 entries, each >= kParamFloor

  void validate() const;
};

// One graph-structured example: N nodes, a row of predictor outputs per
// node, L symmetric nonnegative similarity matrices, and (optionally)
// binary labels.
struct StructuredInstance {
  int n_nodes = 0;
  MatrixXd predictors;                 // N x K, entry (i,k) = R_k(x_i)
  std::vector<MatrixXd> similarities;  // L matrices, each N x N
  std::optional<VectorXi> labels;      // entries in {0,1}

  int n_predictors() const { return static_cast<int>(predictors.cols()); }
  int n_graphs() const { return static_cast<int>(similarities.size()); }
  bool labeled() const { return labels.has_value(); }

  // Full validation: shapes, symmetry, zero diagonals, nonnegative
  // weights, finite predictors, binary labels. O(L*N^2); call once per
  // instance (at load or construction), not per operation.
  void validate() const;
};

// A set of structured instances sharing N, K and L. `origin` records the
// positions the instances had before a split; empty means identity.
struct Dataset {
  std::vector<StructuredInstance> instances;
  std::vector<int> origin;

  int size() const { return static_cast<int>(instances.size()); }
  bool empty() const { return instances.empty(); }
  int n_nodes() const;
  int n_predictors() const;
  int n_graphs() const;
  bool all_labeled() const;

  void validate() const;
};

}  // namespace gcrfbc

#endif  // GCRFBC_TYPES_HPP
