#ifndef GCRFBC_BENCH_HPP
#define GCRFBC_BENCH_HPP

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "gcrfbc/inference.hpp"
#include "gcrfbc/types.hpp"

namespace gcrfbc {

struct BenchCell {
  int m = 0;
  int n = 0;
  double learn_b_s = 0.0;
  double learn_nb_s = 0.0;
  double infer_b_s = 0.0;
  double infer_nb_s = 0.0;
};

struct BenchReport {
  std::vector<BenchCell> cells;
};

struct BenchConfig {
  std::vector<std::pair<int, int>> grid;  // (M, N) cells
  std::uint64_t seed = 0;
  int train_iters = 5;  // fixed iteration budget so timings scale with size
  int repeats = 1;      // best-of-k wall-clock
  QuadratureConfig quad{};
};

// Times learning and inference for both variants on synthetic datasets of
// each grid size. Single-threaded; wall-clock seconds.
BenchReport run_benchmark(const BenchConfig& cfg);

void write_bench_csv(std::ostream& os, const BenchReport& report);
void write_bench_table(std::ostream& os, const BenchReport& report);

}  // namespace gcrfbc

#endif  // GCRFBC_BENCH_HPP
