#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bppr/model.hpp"
#include "bppr/rng.hpp"

namespace bppr {

// Unnormalized proposal weights for the ridge complexity a (omega, length A)
// and for individual features (upsilon, length p).
struct AdaptiveWeights {
  std::vector<double> omega;
  std::vector<double> upsilon;

  // omega[a-1] / sum(omega).
  double omega_probability(int a) const;
};

AdaptiveWeights adaptive_weights(const std::vector<RidgeComponent>& components, int A, int p,
                                 double omega0, double upsilon0);

// Sorted active set of size a: uniform when a == 1, otherwise sequential
// weighted draws without replacement (Wallenius' distribution).
std::vector<int> sample_feature_set(std::span<const double> upsilon, int a, Rng& rng);

// Log probability that sequential weighted sampling without replacement
// yields the unordered set J, summed over all |J|! draw orders.
// Throws Error for |J| > 8.
double wallenius_log_pmf(std::span<const int> J, std::span<const double> upsilon);

// Isotropic unit vector in R^a.
Eigen::VectorXd sample_uniform_subsphere(int a, Rng& rng);

// Draw from the power spherical density proportional to (1 + mu'x)^kappa on
// the unit sphere in R^a. For a == 1 the sphere is {-1, +1}: kappa == 0 gives
// a fair sign, kappa > 0 returns mu.
Eigen::VectorXd sample_power_spherical(const Eigen::VectorXd& mu, double kappa, Rng& rng);

// kappa log(1 + mu'x); the unnormalized log density.
double power_spherical_log_kernel(const Eigen::VectorXd& mu, const Eigen::VectorXd& x, double kappa);

}  // namespace bppr
