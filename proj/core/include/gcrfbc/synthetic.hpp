#ifndef GCRFBC_SYNTHETIC_HPP
#define GCRFBC_SYNTHETIC_HPP

#include <cstdint>
#include <utility>

#include "gcrfbc/inference.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

// Controlled data generation: predictor outputs and similarity weights are
// drawn uniformly, latent means follow from (alpha_true, beta_true), and
// labels threshold the chosen model's output probabilities.
struct GenConfig {
  enum class Labeler { BcB, BcNb };

  int n_nodes = 4;
  int n_instances = 200;
  int n_predictors = 2;
  int n_graphs = 2;
  VectorXd alpha_true;
  VectorXd beta_true;
  std::uint64_t seed = 0;
  double label_threshold = 0.5;
  Labeler labeler = Labeler::BcNb;
  QuadratureConfig quad{};  // used by the BcB labeler
  int max_retries = 10;     // regenerations allowed for single-class datasets

  void validate() const;
};

// Deterministic for a fixed config; a dataset whose labels are all equal is
// regenerated with an incremented seed, up to max_retries times.
Dataset generate(const GenConfig& cfg);

// Strict inequality: a probability exactly at the threshold labels 0.
VectorXi threshold_labels(const VectorXd& probs, double threshold);

struct SplitResult {
  Dataset train;
  Dataset test;
};

// Instance-level split; test gets round(test_fraction * M) instances, at
// least one on each side. Deterministic per seed.
SplitResult split(const Dataset& dataset, double test_fraction = 0.2, std::uint64_t seed = 0);

}  // namespace gcrfbc

#endif  // GCRFBC_SYNTHETIC_HPP
