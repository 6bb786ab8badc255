#include "gcrfbc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace gcrfbc {

namespace {

// Seed mixing and uniform draws are spelled out bit by bit so that datasets
// are reproducible across platforms and standard-library versions.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // {0, ..., n-1}
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

StructuredInstance random_instance(std::uint64_t seed, int n, int k, int l) {
  Rng rng(seed);
  StructuredInstance inst;
  inst.n_nodes = n;
  inst.predictors.resize(n, k);
  for (int i = 0; i < n; ++i) {
    for (int kk = 0; kk < k; ++kk) {
      inst.predictors(i, kk) = 2.0 * rng.unit() - 1.0;  // uniform on [-1, 1)
    }
  }
  inst.similarities.assign(static_cast<std::size_t>(l), MatrixXd::Zero(n, n));
  for (int ll = 0; ll < l; ++ll) {
    MatrixXd& s = inst.similarities[static_cast<std::size_t>(ll)];
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double w = rng.unit();  // uniform on [0, 1)
        s(i, j) = w;
        s(j, i) = w;
      }
    }
  }
  return inst;
}

}  // namespace

VectorXi threshold_labels(const VectorXd& probs, double threshold) {
  VectorXi labels(probs.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    labels[i] = probs[i] > threshold ? 1 : 0;
  }
  return labels;
}

void GenConfig::validate() const {
  if (n_nodes < 1) throw StructuralError("n_nodes must be >= 1");
  if (n_instances < 1) throw StructuralError("n_instances must be >= 1");
  if (alpha_true.size() != n_predictors) {
    throw StructuralError("alpha_true must have n_predictors entries");
  }
  if (beta_true.size() != n_graphs) {
    throw StructuralError("beta_true must have n_graphs entries");
  }
  ModelParams{alpha_true, beta_true}.validate();
  if (!(label_threshold >= 0.0 && label_threshold <= 1.0)) {
    throw StructuralError("label_threshold must lie in [0, 1]");
  }
  if (max_retries < 0) throw StructuralError("max_retries must be >= 0");
  quad.validate();
}

Dataset generate(const GenConfig& cfg) {
  cfg.validate();
  const ModelParams truth{cfg.alpha_true, cfg.beta_true};

  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    const std::uint64_t attempt_seed = mix64(cfg.seed + static_cast<std::uint64_t>(attempt));
    Dataset ds;
    ds.instances.reserve(static_cast<std::size_t>(cfg.n_instances));

    int ones = 0;
    for (int j = 0; j < cfg.n_instances; ++j) {
      StructuredInstance inst = random_instance(
          mix64(attempt_seed + static_cast<std::uint64_t>(j) + 1), cfg.n_nodes,
          cfg.n_predictors, cfg.n_graphs);
      const PredictionResult pred = cfg.labeler == GenConfig::Labeler::BcB
                                        ? predict_b(truth, inst, cfg.quad)
                                        : predict_nb(truth, inst);
      inst.labels = threshold_labels(pred.probs, cfg.label_threshold);
      ones += inst.labels->sum();
      ds.instances.push_back(std::move(inst));
    }

    const int total = cfg.n_instances * cfg.n_nodes;
    if (ones > 0 && ones < total) return ds;
    if (total == 1) return ds;  // a single node cannot have two classes
  }
  throw DataError("generated labels were single-class after " +
                  std::to_string(cfg.max_retries + 1) + " attempts; adjust parameters");
}

SplitResult split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  const int m = dataset.size();
  if (m < 2) throw DataError("splitting needs at least two instances");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw StructuralError("test_fraction must lie strictly between 0 and 1");
  }

  int n_test = static_cast<int>(std::lround(test_fraction * m));
  n_test = std::clamp(n_test, 1, m - 1);

  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix64(seed));
  for (int i = m - 1; i > 0; --i) {
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }

  std::vector<int> test_idx(idx.begin(), idx.begin() + n_test);
  std::vector<int> train_idx(idx.begin() + n_test, idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  auto take = [&dataset](const std::vector<int>& which) {
    Dataset out;
    out.instances.reserve(which.size());
    out.origin.reserve(which.size());
    for (int i : which) {
      out.instances.push_back(dataset.instances[static_cast<std::size_t>(i)]);
      out.origin.push_back(dataset.origin.empty() ? i
                                                  : dataset.origin[static_cast<std::size_t>(i)]);
    }
    return out;
  };
  return {take(train_idx), take(test_idx)};
}

}  // namespace gcrfbc
