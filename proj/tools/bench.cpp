// Benchmark: OpenMP kernels vs the serial reference implementations.
//
//   occamix_bench [--hypotheses N] [--pairs N] [--size N] [--iters N]
//
// Workloads mirror the two hot paths: pooled hypothesis evaluation and
// per-cell weighted aggregation. Outputs are cross-checked before timing
// is reported.

#include <CLI11.hpp>

#include <omp.h>

#include <cstdio>
#include <random>

#include "occamix/mixture.hpp"
#include "occamix/reference.hpp"

using namespace occamix;

namespace {

Grid random_grid(std::mt19937& rng, int size, double fill = 0.35) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> color(1, 9);
  Grid g(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      if (coin(rng) < fill) g.set(r, c, static_cast<CellValue>(color(rng)));
  return g;
}

std::vector<Hypothesis> synthetic_pool(std::mt19937& rng, int n) {
  static const char* programs[] = {
      "replicate_vertical(direction=both, until=edge)",
      "replicate_vertical(direction=both, until=blocked)",
      "replicate_vertical(direction=down, until=blocked)",
      "fill_column",
      "move_to_center",
      "per_column(parity=even, inner=translate(dx=0, dy=-1))",
      "per_column(parity=odd, inner=duplicate_offset(dx=0, dy=1))",
      "per_object(filter=size:1, inner=replicate_vertical(direction=both, "
      "until=edge))",
      "rotate(quarter_turns=2)",
      "reflect(axis=h); translate(dx=1, dy=0)",
  };
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> extra_words(0, 8);
  std::vector<Hypothesis> pool;
  for (int i = 0; i < n; ++i) {
    std::string desc = "synthetic hypothesis " + std::to_string(i);
    for (int w = extra_words(rng); w > 0; --w) desc += " padding";
    pool.push_back(make_hypothesis("h" + std::to_string(i), desc, {},
                                   programs[pick(rng)]));
  }
  return pool;
}

double bench_score_pool(const std::vector<Hypothesis>& pool,
                        const std::vector<GridPair>& train, int iters) {
  const double t0 = omp_get_wtime();
  for (int i = 0; i < iters; ++i)
    score_pool(pool, train, AccuracyPolicy::AllCells, NoiseModel{}, 0.05);
  return (omp_get_wtime() - t0) / iters;
}

double bench_counts_serial(const std::vector<Hypothesis>& pool,
                           const std::vector<GridPair>& train, int iters) {
  const double t0 = omp_get_wtime();
  for (int i = 0; i < iters; ++i)
    reference::pooled_counts_serial(pool, train, AccuracyPolicy::AllCells);
  return (omp_get_wtime() - t0) / iters;
}

double bench_matrix(const std::vector<Grid>& preds,
                    const std::vector<double>& weights, int iters) {
  const double t0 = omp_get_wtime();
  for (int i = 0; i < iters; ++i)
    build_weighted_matrix(preds, weights, WeightMethod::Solomonoff);
  return (omp_get_wtime() - t0) / iters;
}

double bench_tally_serial(const std::vector<Grid>& preds,
                          const std::vector<double>& weights, int iters) {
  const double t0 = omp_get_wtime();
  for (int i = 0; i < iters; ++i) reference::tally_matrix(preds, weights);
  return (omp_get_wtime() - t0) / iters;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occamix parallel-vs-serial kernel benchmark"};
  int n_hypotheses = 64, n_pairs = 8, size = 30, iters = 20;
  app.add_option("--hypotheses", n_hypotheses, "pool size");
  app.add_option("--pairs", n_pairs, "training pairs");
  app.add_option("--size", size, "grid side length (<=30)");
  app.add_option("--iters", iters, "iterations per measurement");
  CLI11_PARSE(app, argc, argv);

  std::mt19937 rng(7);
  const auto pool = synthetic_pool(rng, n_hypotheses);
  std::vector<GridPair> train;
  for (int i = 0; i < n_pairs; ++i) {
    Grid in = random_grid(rng, size);
    train.push_back({in, apply_program(pool[i % pool.size()].program, in)});
  }

  // Cross-check parallel pooled counts against the serial reference.
  const auto scored =
      score_pool(pool, train, AccuracyPolicy::AllCells, NoiseModel{}, 0.05);
  const auto serial =
      reference::pooled_counts_serial(pool, train, AccuracyPolicy::AllCells);
  for (const auto& b : scored.ranked) {
    if (b.cells_correct != serial.correct[b.pool_index] ||
        b.cells_total != serial.total[b.pool_index]) {
      std::fprintf(stderr, "mismatch: parallel and serial counts differ\n");
      return 1;
    }
  }

  std::vector<Grid> preds;
  for (int i = 0; i < n_hypotheses; ++i)
    preds.push_back(apply_program(pool[i].program, train[0].input));
  std::vector<double> weights(n_hypotheses, 1.0 / n_hypotheses);
  const auto matrix = build_weighted_matrix(preds, weights,
                                            WeightMethod::Solomonoff);
  const auto tally = reference::tally_matrix(preds, weights);
  for (size_t i = 0; i < tally.size(); ++i) {
    for (int v = 0; v < kNumColors; ++v) {
      if (matrix.dists[i].probs[v] != tally[i][v]) {
        std::fprintf(stderr, "mismatch: matrix and tally differ\n");
        return 1;
      }
    }
  }

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("pool=%d pairs=%d grid=%dx%d iters=%d\n\n", n_hypotheses,
              n_pairs, size, size, iters);

  const double score_par = bench_score_pool(pool, train, iters);
  const double score_ser = bench_counts_serial(pool, train, iters);
  std::printf("%-28s %10.3f ms\n", "score_pool (openmp)", 1e3 * score_par);
  std::printf("%-28s %10.3f ms   speedup %.2fx\n",
              "pooled counts (serial ref)", 1e3 * score_ser,
              score_ser / score_par);

  const double matrix_par = bench_matrix(preds, weights, iters * 50);
  const double matrix_ser = bench_tally_serial(preds, weights, iters * 50);
  std::printf("%-28s %10.3f ms\n", "weighted matrix (openmp)",
              1e3 * matrix_par);
  std::printf("%-28s %10.3f ms   speedup %.2fx\n", "tally (serial ref)",
              1e3 * matrix_ser, matrix_ser / matrix_par);
  return 0;
}
