#pragma once

#include <cstdint>
#include <optional>

namespace bppr {

// User-facing tuning constants. `max_active` and `knot_quantile` are resolved
// against the data when left unset (see resolve()).
struct Hyperparams {
  double lambda = 10.0;           // Poisson mean of the ridge count
  int K = 4;                      // spline basis size per ridge
  std::optional<int> max_active;  // A
  double p0 = 2.0 / 3.0;          // prior probability of a global ridge
  std::optional<double> knot_quantile;  // q
  double omega0 = 1.0;
  double upsilon0 = 1.0;
  double kappa = 1000.0;  // power spherical concentration for change moves
  int n_mcmc = 10000;
  int n_burn = 9000;
  std::uint64_t seed = 0;

  int A() const { return *max_active; }
  double q() const { return *knot_quantile; }

  // Throws InputError when a field is out of range. Requires resolved A and q.
  void validate(int p) const;
};

// A = min{3, p_real} + min{3, ceil(p_dummy / 2)}; reduces to min{3, p} with no dummies.
int default_max_active(int p_real, int p_dummy);

// q = (n - max(20, ceil(0.05 n))) / n, clamped to [0.5, 1).
double default_knot_quantile(int n);

// Fills any unset data-dependent defaults and validates.
Hyperparams resolve(Hyperparams h, int n, int p_real, int p_dummy);

}  // namespace bppr
