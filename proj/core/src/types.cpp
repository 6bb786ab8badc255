#include "gcrfbc/types.hpp"

#include <cmath>
#include <string>

namespace gcrfbc {

void ModelParams::validate() const {
  if (alpha.size() < 1) throw StructuralError("alpha must have at least one entry");
  if (beta.size() < 1) throw StructuralError("beta must have at least one entry");
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    if (!std::isfinite(alpha[k]) || alpha[k] < kParamFloor) {
      throw DataError("alpha[" + std::to_string(k) + "] = " +
                      std::to_string(alpha[k]) + " is below the positivity floor");
    }
  }
  for (Eigen::Index l = 0; l < beta.size(); ++l) {
    if (!std::isfinite(beta[l]) || beta[l] < kParamFloor) {
      throw DataError("beta[" + std::to_string(l) + "] = " +
                      std::to_string(beta[l]) + " is below the positivity floor");
    }
  }
}

void StructuredInstance::validate() const {
  const int n = n_nodes;
  if (n < 1) throw StructuralError("instance must have at least one node");
  if (predictors.rows() != n) {
    throw StructuralError("predictor matrix has " + std::to_string(predictors.rows()) +
                          " rows, expected " + std::to_string(n));
  }
  if (predictors.cols() < 1) throw StructuralError("instance needs at least one predictor column");
  if (!predictors.allFinite()) throw DataError("predictor matrix contains non-finite values");
  if (similarities.empty()) throw StructuralError("instance needs at least one similarity graph");

  for (std::size_t l = 0; l < similarities.size(); ++l) {
    const MatrixXd& s = similarities[l];
    const std::string tag = "similarity graph " + std::to_string(l);
    if (s.rows() != n || s.cols() != n) throw StructuralError(tag + " is not N x N");
    if (!s.allFinite()) throw DataError(tag + " contains non-finite values");
    for (int i = 0; i < n; ++i) {
      if (s(i, i) != 0.0) throw DataError(tag + " has a nonzero diagonal entry");
      for (int j = i + 1; j < n; ++j) {
        if (s(i, j) < 0.0 || s(j, i) < 0.0) throw DataError(tag + " has a negative weight");
        const double scale = std::max({std::abs(s(i, j)), std::abs(s(j, i)), 1.0});
        if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale) {
          throw DataError(tag + " is not symmetric");
        }
      }
    }
  }

  if (labels) {
    if (labels->size() != n) throw StructuralError("label vector length does not match node count");
    for (int i = 0; i < n; ++i) {
      const int y = (*labels)[i];
      if (y != 0 && y != 1) throw DataError("label " + std::to_string(y) + " is not binary");
    }
  }
}

int Dataset::n_nodes() const {
  if (empty()) throw StructuralError("dataset is empty");
  return instances.front().n_nodes;
}

int Dataset::n_predictors() const {
  if (empty()) throw StructuralError("dataset is empty");
  return instances.front().n_predictors();
}

int Dataset::n_graphs() const {
  if (empty()) throw StructuralError("dataset is empty");
  return instances.front().n_graphs();
}

bool Dataset::all_labeled() const {
  for (const auto& inst : instances) {
    if (!inst.labeled()) return false;
  }
  return !empty();
}

void Dataset::validate() const {
  if (empty()) throw StructuralError("dataset is empty");
  const int n = instances.front().n_nodes;
  const int k = instances.front().n_predictors();
  const int l = instances.front().n_graphs();
  for (std::size_t j = 0; j < instances.size(); ++j) {
    const auto& inst = instances[j];
    if (inst.n_nodes != n || inst.n_predictors() != k || inst.n_graphs() != l) {
      throw StructuralError("instance " + std::to_string(j) +
                            " does not match the dataset's (N, K, L)");
    }
    inst.validate();
  }
  if (!origin.empty() && origin.size() != instances.size()) {
    throw StructuralError("origin index list does not match instance count");
  }
}

}  // namespace gcrfbc
