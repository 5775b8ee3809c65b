#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "bppr/dataset.hpp"
#include "bppr/model.hpp"

namespace bppr {

// Noiseless posterior draws f^(s)(x_i) (rows = draws, cols = points) and the
// matching noise scales.
struct PosteriorDraws {
  Eigen::MatrixXd f;
  Eigen::VectorXd sigma;
};

enum class IntervalKind { kMean, kCredible, kPredictive };

struct PredictionSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;  // empty for kMean
  Eigen::VectorXd upper;
};

// f^(s)(x) = B^(s)(x) beta^(s) for every retained state.
PosteriorDraws posterior_draws(const std::vector<ModelState>& states, const InputView& in);
PosteriorDraws posterior_draws(const PosteriorChain& chain, const EncodedInputs& inputs);

// Pointwise mean and central `level` intervals. Predictive intervals add
// N(0, sigma^(s)^2) noise drawn from `seed`.
PredictionSummary summarize(const PosteriorDraws& draws, IntervalKind kind, double level,
                            std::uint64_t seed = 0);

// Predictive draws f^(s)(x) + e, e ~ N(0, sigma^(s)^2).
Eigen::MatrixXd predictive_draws(const PosteriorDraws& draws, std::uint64_t seed);

// Column-wise sample quantiles (linear interpolation) of a draws matrix.
Eigen::VectorXd column_quantiles(const Eigen::MatrixXd& draws, double q);

}  // namespace bppr
