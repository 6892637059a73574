#pragma once

#include <array>
#include <set>
#include <vector>

#include "occamix/dsl.hpp"
#include "occamix/grid.hpp"
#include "occamix/scoring.hpp"

// Serial reference implementations kept for testing and benchmarking.
// Everything here is written independently of the OpenMP kernels it checks:
// plain loops, direct probability arithmetic, no shared code paths.
namespace occamix::reference {

// Triple-loop indicator tally of the weighted per-cell mixture.
std::vector<std::array<double, kNumColors>> tally_matrix(
    const std::vector<Grid>& predictions, const std::vector<double>& weights);

// BMA posterior computed in the direct probability domain (no logs);
// usable for small cell counts only.
std::vector<double> bma_weights_direct(const std::vector<long long>& n_correct,
                                       const std::vector<long long>& n_wrong,
                                       const NoiseModel& noise,
                                       const std::vector<double>& prior);

// Label-propagation flood fill; returns each component as a sorted cell set.
std::vector<std::set<std::pair<int, int>>> flood_fill_objects(
    const Grid& grid, Connectivity conn);

// Serial cell-agreement count.
MatchCounts match_counts_serial(const Grid& predicted, const Grid& truth,
                                AccuracyPolicy policy);

// Serial version of the pooled per-hypothesis evaluation loop.
struct PooledCounts {
  std::vector<long long> correct;
  std::vector<long long> total;
};
PooledCounts pooled_counts_serial(const std::vector<Hypothesis>& pool,
                                  const std::vector<GridPair>& train,
                                  AccuracyPolicy policy);

}  // namespace occamix::reference
