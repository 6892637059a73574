#pragma once

#include <string>
#include <vector>

#include "occamix/dsl.hpp"
#include "occamix/grid.hpp"

namespace occamix {

// Categorical per-cell noise model for the BMA likelihood: a correct cell
// has probability 1-epsilon, a wrong one epsilon/(K-1).
struct NoiseModel {
  double epsilon = 0.1;
  int num_colors = kNumColors;
};

void validate_noise_model(const NoiseModel& noise);

struct ScoreBreakdown {
  std::string hypothesis_id;
  int pool_index = 0;      // position in the input pool
  int length = 0;          // token length of the hypothesis text
  int program_length = 0;  // diagnostic: tokens of the canonical DSL text
  double simplicity = 0.0;
  double accuracy = 0.0;
  double raw_score = 0.0;  // simplicity * accuracy
  double solomonoff_weight = 0.0;
  double bma_log_likelihood = 0.0;
  double bma_weight = 0.0;
  long long cells_correct = 0;
  long long cells_total = 0;
};

struct WeightVector {
  std::vector<double> weights;
  bool degenerate_uniform = false;  // all-zero input fell back to uniform
};

struct ScoredPool {
  // Sorted by solomonoff_weight desc; ties by accuracy desc, length asc,
  // id asc.
  std::vector<ScoreBreakdown> ranked;
  bool degenerate_uniform = false;
  std::vector<std::string> warnings;
};

// 1 - (L - Lmin)/(Lmax - Lmin), clipped into [delta, 1]. A pool with all
// lengths equal scores 1.0 everywhere.
std::vector<double> simplicity_scores(const std::vector<int>& lengths,
                                      double delta);

// Elementwise simplicity * accuracy.
std::vector<double> solomonoff_scores(const std::vector<double>& simplicities,
                                      const std::vector<double>& accuracies);

// Divides by the sum; an all-zero input yields the uniform distribution
// with the degenerate flag set.
WeightVector normalize_weights(const std::vector<double>& raw);

// n_correct*ln(1-eps) + n_wrong*ln(eps/(K-1)); log domain throughout.
double bma_log_likelihood(long long n_correct, long long n_wrong,
                          const NoiseModel& noise);

// Softmax over log-likelihood + log prior with max subtraction.
std::vector<double> bma_weights(const std::vector<double>& log_likelihoods,
                                const std::vector<double>& prior);

std::vector<double> uniform_prior(size_t n);

// Full pool scoring: executes every hypothesis on every training input
// (parallel across hypotheses), pools cell counts under `policy`, and
// derives both weight vectors.
ScoredPool score_pool(const std::vector<Hypothesis>& pool,
                      const std::vector<GridPair>& train,
                      AccuracyPolicy policy, const NoiseModel& noise,
                      double delta);

// Shannon entropy in nats of a distribution.
double shannon_entropy(const std::vector<double>& dist);

}  // namespace occamix
