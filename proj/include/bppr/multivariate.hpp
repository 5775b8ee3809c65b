#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bppr/dataset.hpp"
#include "bppr/hyperparams.hpp"
#include "bppr/model.hpp"
#include "bppr/predict.hpp"

namespace bppr {

// Truncated orthonormal basis of the centered responses.
struct ResponseBasis {
  Eigen::MatrixXd H;        // D x D_minus, orthonormal columns
  Eigen::VectorXd y_mean;   // length D
  int D_minus = 0;
  Eigen::VectorXd explained_variance;  // per retained column, nonincreasing
};

// Exactly one of the two fields is used; `components` wins when both are set.
struct BasisConfig {
  std::optional<int> components;
  std::optional<double> variance_threshold;  // fraction of total variance in (0, 1]
};

// Principal-component basis of Y (n x D) after column centering.
ResponseBasis fit_response_basis(const Eigen::MatrixXd& Y, const BasisConfig& config);

// Rows of Y mapped to H'(y - mean).
Eigen::MatrixXd transform(const Eigen::MatrixXd& Y, const ResponseBasis& basis);
// Rows of Eta mapped to mean + H eta.
Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& Eta, const ResponseBasis& basis);

struct MultivariateFit {
  ResponseBasis basis;
  std::vector<PosteriorChain> chains;  // one per basis column
};

// Per-component chain seed derived from the master seed.
std::uint64_t component_seed(std::uint64_t master, int component);

// Fits one independent chain per retained basis column on `data.Y`.
// `threads` <= 0 means hardware concurrency.
MultivariateFit fit_multivariate(const Dataset& data, const Hyperparams& hyper,
                                 const BasisConfig& config, int threads = 0);

// Posterior predictive mean in response space (n x D).
Eigen::MatrixXd predict_mean(const MultivariateFit& fit, const EncodedInputs& inputs);

// Per-component draws (rows = draws) of the transformed response; noise is
// added per component when `predictive` is true.
std::vector<Eigen::MatrixXd> component_draws(const MultivariateFit& fit, const EncodedInputs& inputs,
                                             bool predictive, std::uint64_t seed);

// Response-space draws for output dimension d: mean_d + sum_k H(d, k) eta_k.
Eigen::MatrixXd combine_draws(const std::vector<Eigen::MatrixXd>& eta_draws,
                              const ResponseBasis& basis, int d);

}  // namespace bppr
