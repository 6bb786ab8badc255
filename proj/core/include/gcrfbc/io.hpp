#ifndef GCRFBC_IO_HPP
#define GCRFBC_IO_HPP

#include <optional>
#include <ostream>
#include <string>

#include "gcrfbc/learning.hpp"
#include "gcrfbc/metrics.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

// Datasets and models are stored as JSON documents. Similarity matrices are
// written as upper-triangle (i, j, weight) triples with nonzero weight;
// numbers round-trip exactly.

void save_dataset(const std::string& path, const Dataset& dataset);
Dataset load_dataset(const std::string& path);

struct ModelFile {
  ModelParams params;
  std::optional<VariationalState> xi;
  std::string variant;  // "b" or "nb"; may be empty for bare parameter files
};

void save_model(const std::string& path, const ModelParams& params,
                const std::optional<VariationalState>& xi = std::nullopt,
                const std::string& variant = "");
ModelFile load_model(const std::string& path);

// CSV emitters used by the command-line pipelines.
void write_eval_csv(std::ostream& os, const EvalReport& report);
void write_probs_csv(std::ostream& os, const Dataset& dataset, const MatrixXd& per_node_probs);

}  // namespace gcrfbc

#endif  // GCRFBC_IO_HPP
