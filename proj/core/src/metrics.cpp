#include "gcrfbc/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gcrfbc/learning.hpp"

namespace gcrfbc {

std::string variant_name(Variant v) { return v == Variant::B ? "b" : "nb"; }

Variant parse_variant(const std::string& name) {
  if (name == "b") return Variant::B;
  if (name == "nb") return Variant::Nb;
  throw StructuralError("unknown variant '" + name + "'; expected 'b' or 'nb'");
}

double auc(const VectorXd& scores, const VectorXi& labels) {
  const int n = static_cast<int>(scores.size());
  if (labels.size() != n) throw StructuralError("scores and labels differ in length");

  int n_pos = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0 or 1");
    n_pos += labels[i];
  }
  const int n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw DataError("AUC is undefined when all labels belong to one class");
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scores](int a, int b) { return scores[a] < scores[b]; });

  // Average ranks over tied score groups, then the Mann-Whitney statistic.
  double pos_rank_sum = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && scores[order[static_cast<std::size_t>(j + 1)]] ==
                            scores[order[static_cast<std::size_t>(i)]]) {
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>((i + 1) + (j + 1));
    for (int t = i; t <= j; ++t) {
      if (labels[order[static_cast<std::size_t>(t)]] == 1) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }

  return (pos_rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1)) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport evaluate(Variant variant, const ModelParams& params, const Dataset& dataset,
                    const QuadratureConfig& quad) {
  if (!dataset.all_labeled()) throw DataError("evaluation requires a labeled dataset");
  const int m = dataset.size();
  const int n = dataset.n_nodes();

  EvalReport report;
  report.per_node_probs.resize(m, n);

  VectorXd pooled_scores(m * n);
  VectorXi pooled_labels(m * n);
  double var_norm_sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const StructuredInstance& inst = dataset.instances[static_cast<std::size_t>(j)];
    const PredictionResult pred =
        variant == Variant::B ? predict_b(params, inst, quad) : predict_nb(params, inst);
    report.per_node_probs.row(j) = pred.probs;
    pooled_scores.segment(j * n, n) = pred.probs;
    pooled_labels.segment(j * n, n) = *inst.labels;
    var_norm_sum += pred.variance_norm;
  }

  report.auc = auc(pooled_scores, pooled_labels);
  report.variance_norm = var_norm_sum / m;
  if (variant == Variant::B) {
    report.log_likelihood = lower_bound(params, dataset, tighten_xi(params, dataset));
    report.likelihood_semantics = "lower_bound";
  } else {
    report.log_likelihood = nb_log_likelihood(params, dataset);
    report.likelihood_semantics = "exact";
  }
  return report;
}

}  // namespace gcrfbc
