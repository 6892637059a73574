#include "occamix/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace occamix {

void validate_noise_model(const NoiseModel& noise) {
  if (!(noise.epsilon > 0.0 && noise.epsilon < 1.0))
    throw Error(ErrorCode::ConfigError, "epsilon must be in (0,1)");
  if (noise.num_colors < 2)
    throw Error(ErrorCode::ConfigError, "num_colors must be >= 2");
}

std::vector<double> simplicity_scores(const std::vector<int>& lengths,
                                      double delta) {
  if (lengths.empty())
    throw Error(ErrorCode::EmptyPool, "simplicity_scores: empty pool");
  if (delta < 0.0 || delta > 1.0)
    throw Error(ErrorCode::ConfigError, "delta must be in [0,1]");
  const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
  std::vector<double> out(lengths.size(), 1.0);
  if (*lo == *hi) return out;  // degenerate pool, everything maximally simple
  const double span = static_cast<double>(*hi - *lo);
  for (size_t i = 0; i < lengths.size(); ++i) {
    const double s = 1.0 - static_cast<double>(lengths[i] - *lo) / span;
    out[i] = std::clamp(s, delta, 1.0);
  }
  return out;
}

std::vector<double> solomonoff_scores(const std::vector<double>& simplicities,
                                      const std::vector<double>& accuracies) {
  if (simplicities.size() != accuracies.size())
    throw Error(ErrorCode::LengthMismatch,
                "simplicity and accuracy lists differ in length");
  if (simplicities.empty())
    throw Error(ErrorCode::EmptyPool, "solomonoff_scores: empty pool");
  std::vector<double> out(simplicities.size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = simplicities[i] * accuracies[i];
  return out;
}

WeightVector normalize_weights(const std::vector<double>& raw) {
  if (raw.empty())
    throw Error(ErrorCode::EmptyPool, "normalize_weights: empty input");
  double sum = 0.0;
  for (const double v : raw) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::NegativeScore,
                  "raw scores must be finite and nonnegative");
    sum += v;
  }
  WeightVector result;
  result.weights.resize(raw.size());
  if (sum == 0.0) {
    result.degenerate_uniform = true;
    std::fill(result.weights.begin(), result.weights.end(),
              1.0 / static_cast<double>(raw.size()));
    return result;
  }
  for (size_t i = 0; i < raw.size(); ++i) result.weights[i] = raw[i] / sum;
  return result;
}

double bma_log_likelihood(long long n_correct, long long n_wrong,
                          const NoiseModel& noise) {
  validate_noise_model(noise);
  if (n_correct < 0 || n_wrong < 0)
    throw Error(ErrorCode::EmptyData, "cell counts must be nonnegative");
  if (n_correct == 0 && n_wrong == 0)
    throw Error(ErrorCode::EmptyData, "no observed cells");
  return static_cast<double>(n_correct) * std::log(1.0 - noise.epsilon) +
         static_cast<double>(n_wrong) *
             std::log(noise.epsilon / (noise.num_colors - 1));
}

std::vector<double> bma_weights(const std::vector<double>& log_likelihoods,
                                const std::vector<double>& prior) {
  if (log_likelihoods.size() != prior.size())
    throw Error(ErrorCode::LengthMismatch,
                "log-likelihoods and prior differ in length");
  if (log_likelihoods.empty())
    throw Error(ErrorCode::EmptyPool, "bma_weights: empty pool");
  double prior_sum = 0.0;
  for (const double p : prior) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(ErrorCode::InvalidPrior, "prior entries must be in [0,1]");
    prior_sum += p;
  }
  if (std::abs(prior_sum - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidPrior, "prior does not sum to 1");

  const size_t n = log_likelihoods.size();
  std::vector<double> log_post(n);
  double max_lp = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    log_post[i] = prior[i] > 0.0
                      ? log_likelihoods[i] + std::log(prior[i])
                      : -std::numeric_limits<double>::infinity();
    max_lp = std::max(max_lp, log_post[i]);
  }
  std::vector<double> out(n);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::isfinite(log_post[i]) ? std::exp(log_post[i] - max_lp) : 0.0;
    sum += out[i];
  }
  for (double& w : out) w /= sum;
  return out;
}

std::vector<double> uniform_prior(size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

ScoredPool score_pool(const std::vector<Hypothesis>& pool,
                      const std::vector<GridPair>& train,
                      AccuracyPolicy policy, const NoiseModel& noise,
                      double delta) {
  if (pool.empty())
    throw Error(ErrorCode::EmptyPool, "score_pool: empty hypothesis pool");
  if (train.empty())
    throw Error(ErrorCode::EmptyData, "score_pool: no training pairs");
  validate_noise_model(noise);

  const int n = static_cast<int>(pool.size());
  std::vector<long long> correct(n, 0), total(n, 0);

  // Hypotheses are independent: integer cell counts, so the result is
  // identical for any thread count.
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    long long m = 0, t = 0;
    for (const GridPair& pair : train) {
      const Grid predicted = apply_program(pool[i].program, pair.input);
      const MatchCounts mc = match_counts(predicted, pair.output, policy);
      m += mc.matches;
      t += mc.total;
    }
    correct[i] = m;
    total[i] = t;
  }

  ScoredPool result;
  std::vector<int> lengths(n);
  std::vector<double> accuracies(n), log_liks(n);
  for (int i = 0; i < n; ++i) {
    lengths[i] = token_length(pool[i]);
    if (total[i] == 0) {
      result.warnings.push_back("hypothesis '" + pool[i].id +
                                "': degenerate accuracy denominator (no "
                                "counted cells); accuracy=1, likelihood=1");
      accuracies[i] = 1.0;
      log_liks[i] = 0.0;
    } else {
      accuracies[i] = static_cast<double>(correct[i]) /
                      static_cast<double>(total[i]);
      log_liks[i] =
          bma_log_likelihood(correct[i], total[i] - correct[i], noise);
    }
  }

  const std::vector<double> simplicities = simplicity_scores(lengths, delta);
  const std::vector<double> raw = solomonoff_scores(simplicities, accuracies);
  const WeightVector solomonoff = normalize_weights(raw);
  if (solomonoff.degenerate_uniform) {
    result.degenerate_uniform = true;
    result.warnings.push_back(
        "DegenerateUniform: all raw scores are zero; using uniform "
        "Solomonoff weights");
  }
  const std::vector<double> bma =
      bma_weights(log_liks, uniform_prior(static_cast<size_t>(n)));

  result.ranked.resize(n);
  for (int i = 0; i < n; ++i) {
    ScoreBreakdown& b = result.ranked[i];
    b.hypothesis_id = pool[i].id;
    b.pool_index = i;
    b.length = lengths[i];
    b.program_length =
        static_cast<int>(tokenize_text(pool[i].program_text).size());
    b.simplicity = simplicities[i];
    b.accuracy = accuracies[i];
    b.raw_score = raw[i];
    b.solomonoff_weight = solomonoff.weights[i];
    b.bma_log_likelihood = log_liks[i];
    b.bma_weight = bma[i];
    b.cells_correct = correct[i];
    b.cells_total = total[i];
  }
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const ScoreBreakdown& a, const ScoreBreakdown& b) {
              if (a.solomonoff_weight != b.solomonoff_weight)
                return a.solomonoff_weight > b.solomonoff_weight;
              if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
              if (a.length != b.length) return a.length < b.length;
              return a.hypothesis_id < b.hypothesis_id;
            });
  return result;
}

double shannon_entropy(const std::vector<double>& dist) {
  double h = 0.0;
  for (const double p : dist)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

}  // namespace occamix
