#include "occamix/mixture.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace occamix {

const char* weight_method_name(WeightMethod method) {
  return method == WeightMethod::Solomonoff ? "solomonoff" : "bma";
}

WeightedMatrix build_weighted_matrix(const std::vector<Grid>& predictions,
                                     const std::vector<double>& weights,
                                     WeightMethod method) {
  if (predictions.empty())
    throw Error(ErrorCode::EmptyInput, "build_weighted_matrix: no predictions");
  if (weights.size() != predictions.size())
    throw Error(ErrorCode::WeightLengthMismatch,
                "weights and predictions differ in length");
  const int R = predictions.front().rows(), C = predictions.front().cols();
  for (const Grid& g : predictions)
    if (g.rows() != R || g.cols() != C)
      throw Error(ErrorCode::DimensionMismatch,
                  "predictions differ in shape");
  double sum = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::InvalidWeights,
                  "weights must be finite and nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidWeights, "weights do not sum to 1");

  WeightedMatrix matrix;
  matrix.rows = R;
  matrix.cols = C;
  matrix.method = method;
  matrix.dists.assign(static_cast<size_t>(R) * C, CellDistribution{});

  const int n = static_cast<int>(predictions.size());
  const int cells = R * C;
  // Threads own disjoint contiguous cell ranges and sweep the hypotheses
  // in pool order within them: no races, sequential reads through each
  // prediction, and per-cell accumulation order is fixed, so the result
  // does not depend on the thread count.
#pragma omp parallel if (static_cast<long long>(cells) * n > 65536)
  {
    const int threads = omp_get_num_threads();
    const int tid = omp_get_thread_num();
    const int chunk = (cells + threads - 1) / threads;
    const int lo = tid * chunk;
    const int hi = std::min(cells, lo + chunk);
    for (int h = 0; h < n; ++h) {
      const CellValue* pred = predictions[h].cells().data();
      const double w = weights[h];
      for (int idx = lo; idx < hi; ++idx)
        matrix.dists[idx].probs[pred[idx]] += w;
    }
  }
  return matrix;
}

Grid argmax_prediction(const WeightedMatrix& matrix) {
  Grid out(matrix.rows, matrix.cols);
  for (int r = 0; r < matrix.rows; ++r) {
    for (int c = 0; c < matrix.cols; ++c) {
      const auto& probs = matrix.at(r, c).probs;
      int best = 0;
      for (int v = 1; v < kNumColors; ++v)
        if (probs[v] > probs[best]) best = v;  // ties keep the smaller value
      out.set(r, c, static_cast<CellValue>(best));
    }
  }
  return out;
}

std::vector<double> confidence_map(const WeightedMatrix& matrix) {
  std::vector<double> out(matrix.dists.size());
  for (size_t i = 0; i < matrix.dists.size(); ++i) {
    double best = 0.0;
    for (const double p : matrix.dists[i].probs) best = std::max(best, p);
    out[i] = best;
  }
  return out;
}

std::vector<double> entropy_map(const WeightedMatrix& matrix) {
  std::vector<double> out(matrix.dists.size());
  for (size_t i = 0; i < matrix.dists.size(); ++i) {
    double h = 0.0;
    for (const double p : matrix.dists[i].probs)
      if (p > 0.0) h -= p * std::log(p);
    out[i] = h;
  }
  return out;
}

}  // namespace occamix
