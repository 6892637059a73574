#include "occamix/reference.hpp"

#include <cmath>
#include <map>

namespace occamix::reference {

std::vector<std::array<double, kNumColors>> tally_matrix(
    const std::vector<Grid>& predictions, const std::vector<double>& weights) {
  const int R = predictions.front().rows(), C = predictions.front().cols();
  std::vector<std::array<double, kNumColors>> tally(
      static_cast<size_t>(R) * C, std::array<double, kNumColors>{});
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c)
      for (size_t h = 0; h < predictions.size(); ++h)
        tally[r * C + c][predictions[h].at(r, c)] += weights[h];
  return tally;
}

std::vector<double> bma_weights_direct(const std::vector<long long>& n_correct,
                                       const std::vector<long long>& n_wrong,
                                       const NoiseModel& noise,
                                       const std::vector<double>& prior) {
  const double hit = 1.0 - noise.epsilon;
  const double miss = noise.epsilon / (noise.num_colors - 1);
  std::vector<double> posterior(n_correct.size());
  double sum = 0.0;
  for (size_t i = 0; i < n_correct.size(); ++i) {
    double likelihood = 1.0;
    for (long long k = 0; k < n_correct[i]; ++k) likelihood *= hit;
    for (long long k = 0; k < n_wrong[i]; ++k) likelihood *= miss;
    posterior[i] = likelihood * prior[i];
    sum += posterior[i];
  }
  for (double& w : posterior) w /= sum;
  return posterior;
}

std::vector<std::set<std::pair<int, int>>> flood_fill_objects(
    const Grid& grid, Connectivity conn) {
  const int R = grid.rows(), C = grid.cols();
  // Start with one label per nonzero cell, then propagate the minimum label
  // across same-color neighbors until nothing changes.
  std::vector<int> label(static_cast<size_t>(R) * C, -1);
  for (int i = 0; i < R * C; ++i)
    if (grid.cells()[i] != 0) label[i] = i;

  auto same = [&](int r1, int c1, int r2, int c2) {
    return grid.in_bounds(r2, c2) && grid.at(r2, c2) != 0 &&
           grid.at(r1, c1) == grid.at(r2, c2);
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r < R; ++r) {
      for (int c = 0; c < C; ++c) {
        if (label[r * C + c] < 0) continue;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            if (conn == Connectivity::Four && dr != 0 && dc != 0) continue;
            if (!same(r, c, r + dr, c + dc)) continue;
            const int other = label[(r + dr) * C + (c + dc)];
            if (other < label[r * C + c]) {
              label[r * C + c] = other;
              changed = true;
            }
          }
        }
      }
    }
  }
  std::map<int, std::set<std::pair<int, int>>> groups;
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c)
      if (label[r * C + c] >= 0) groups[label[r * C + c]].insert({r, c});
  std::vector<std::set<std::pair<int, int>>> out;
  for (auto& [_, cells] : groups) out.push_back(std::move(cells));
  return out;
}

MatchCounts match_counts_serial(const Grid& predicted, const Grid& truth,
                                AccuracyPolicy policy) {
  MatchCounts mc;
  for (int r = 0; r < truth.rows(); ++r) {
    for (int c = 0; c < truth.cols(); ++c) {
      const bool counted =
          policy == AccuracyPolicy::AllCells || truth.at(r, c) != 0;
      if (!counted) continue;
      mc.total += 1;
      if (predicted.at(r, c) == truth.at(r, c)) mc.matches += 1;
    }
  }
  return mc;
}

PooledCounts pooled_counts_serial(const std::vector<Hypothesis>& pool,
                                  const std::vector<GridPair>& train,
                                  AccuracyPolicy policy) {
  PooledCounts counts;
  counts.correct.assign(pool.size(), 0);
  counts.total.assign(pool.size(), 0);
  for (size_t i = 0; i < pool.size(); ++i) {
    for (const GridPair& pair : train) {
      const Grid predicted = apply_program(pool[i].program, pair.input);
      const MatchCounts mc = match_counts_serial(predicted, pair.output, policy);
      counts.correct[i] += mc.matches;
      counts.total[i] += mc.total;
    }
  }
  return counts;
}

}  // namespace occamix::reference
