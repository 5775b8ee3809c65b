#include "bppr/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bppr/error.hpp"

namespace bppr {

double AdaptiveWeights::omega_probability(int a) const {
  const double total = std::accumulate(omega.begin(), omega.end(), 0.0);
  return omega[static_cast<std::size_t>(a) - 1] / total;
}

AdaptiveWeights adaptive_weights(const std::vector<RidgeComponent>& components, int A, int p,
                                 double omega0, double upsilon0) {
  AdaptiveWeights w;
  w.omega.assign(static_cast<std::size_t>(A), omega0);
  w.upsilon.assign(static_cast<std::size_t>(p), upsilon0);
  for (const auto& r : components) {
    if (r.a() >= 1 && r.a() <= A) w.omega[static_cast<std::size_t>(r.a()) - 1] += 1.0;
    for (int j : r.J) w.upsilon[static_cast<std::size_t>(j)] += 1.0;
  }
  return w;
}

std::vector<int> sample_feature_set(std::span<const double> upsilon, int a, Rng& rng) {
  const int p = static_cast<int>(upsilon.size());
  if (a < 1 || a > p) throw InputError("feature set size out of range");
  if (a == 1) return {static_cast<int>(rng.index(static_cast<std::size_t>(p)))};
  std::vector<double> w(upsilon.begin(), upsilon.end());
  std::vector<int> J;
  J.reserve(static_cast<std::size_t>(a));
  for (int k = 0; k < a; ++k) {
    const auto j = rng.categorical(w);
    J.push_back(static_cast<int>(j));
    w[j] = 0.0;
  }
  std::sort(J.begin(), J.end());
  return J;
}

double wallenius_log_pmf(std::span<const int> J, std::span<const double> upsilon) {
  const std::size_t a = J.size();
  if (a == 0) return 0.0;
  if (a > 8) throw Error(ErrorClass::kInput, "Wallenius enumeration unsupported for more than 8 features");
  const double total = std::accumulate(upsilon.begin(), upsilon.end(), 0.0);
  std::vector<int> order(J.begin(), J.end());
  std::sort(order.begin(), order.end());
  // Log-sum-exp over all draw orders.
  std::vector<double> terms;
  do {
    double remaining = total;
    double lp = 0.0;
    for (int j : order) {
      const double wj = upsilon[static_cast<std::size_t>(j)];
      lp += std::log(wj) - std::log(remaining);
      remaining -= wj;
    }
    terms.push_back(lp);
  } while (std::next_permutation(order.begin(), order.end()));
  const double peak = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - peak);
  return peak + std::log(s);
}

Eigen::VectorXd sample_uniform_subsphere(int a, Rng& rng) {
  Eigen::VectorXd v(a);
  double norm = 0.0;
  do {
    for (int i = 0; i < a; ++i) v[i] = rng.normal();
    norm = v.norm();
  } while (!(norm > 0.0));
  return v / norm;
}

Eigen::VectorXd sample_power_spherical(const Eigen::VectorXd& mu, double kappa, Rng& rng) {
  const auto a = static_cast<int>(mu.size());
  const double mu_norm = mu.norm();
  if (a < 1 || !(mu_norm > 0.0)) throw InputError("power spherical mode must be a nonzero vector");
  const Eigen::VectorXd m = mu / mu_norm;
  if (a == 1) {
    if (kappa > 0.0) return m;
    return rng.uniform() < 0.5 ? m : Eigen::VectorXd(-m);
  }
  // Cosine to the mode: t = 2z - 1, z ~ Beta((a-1)/2 + kappa, (a-1)/2).
  const double half = 0.5 * (a - 1);
  const double t = 2.0 * rng.beta(half + kappa, half) - 1.0;
  const Eigen::VectorXd v = sample_uniform_subsphere(a - 1, rng);
  Eigen::VectorXd y(a);
  y[0] = t;
  y.tail(a - 1) = std::sqrt(std::max(0.0, 1.0 - t * t)) * v;
  // Householder reflection taking e_1 to m.
  Eigen::VectorXd u = -m;
  u[0] += 1.0;
  const double un = u.norm();
  if (un < 1e-300) return y;
  u /= un;
  return y - 2.0 * u * u.dot(y);
}

double power_spherical_log_kernel(const Eigen::VectorXd& mu, const Eigen::VectorXd& x, double kappa) {
  if (kappa == 0.0) return 0.0;
  const double c = mu.dot(x);
  if (c <= -1.0) return -std::numeric_limits<double>::infinity();
  return kappa * std::log1p(c);
}

}  // namespace bppr
