#pragma once

#include <array>
#include <vector>

#include "occamix/grid.hpp"

namespace occamix {

struct CellDistribution {
  std::array<double, kNumColors> probs{};
  friend bool operator==(const CellDistribution&,
                         const CellDistribution&) = default;
};

enum class WeightMethod { Solomonoff, BMA };

const char* weight_method_name(WeightMethod method);

// Per-cell categorical distribution over colors, mixed from hypothesis
// predictions by normalized weights. Probabilities are kept as the exact
// weight sums; validity follows from weight normalization.
struct WeightedMatrix {
  int rows = 0;
  int cols = 0;
  WeightMethod method = WeightMethod::Solomonoff;
  std::vector<CellDistribution> dists;  // row-major

  const CellDistribution& at(int r, int c) const {
    return dists[r * cols + c];
  }
};

// P[r][c](v) = sum over hypotheses of weight(h) * [prediction_h(r,c) == v].
WeightedMatrix build_weighted_matrix(const std::vector<Grid>& predictions,
                                     const std::vector<double>& weights,
                                     WeightMethod method);

// Per-cell argmax; ties break toward the smallest cell value.
Grid argmax_prediction(const WeightedMatrix& matrix);

// Per-cell max probability, row-major.
std::vector<double> confidence_map(const WeightedMatrix& matrix);

// Per-cell Shannon entropy in nats, row-major; 0 iff unanimous.
std::vector<double> entropy_map(const WeightedMatrix& matrix);

}  // namespace occamix
