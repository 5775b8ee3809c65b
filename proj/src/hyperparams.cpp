#include "bppr/hyperparams.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bppr/error.hpp"

namespace bppr {

void Hyperparams::validate(int p) const {
  auto fail = [](const std::string& what) { throw InputError("invalid hyperparameter: " + what); };
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (K < 1) fail("K must be a positive integer");
  if (!max_active || *max_active < 1) fail("A must be a positive integer");
  if (*max_active > p) fail("A must not exceed the number of input features");
  if (*max_active > 8) fail("A above 8 is unsupported");
  if (!(p0 > 0.0 && p0 <= 1.0)) fail("p0 must lie in (0, 1]");
  if (!knot_quantile || !(*knot_quantile > 0.0 && *knot_quantile < 1.0)) fail("q must lie in (0, 1)");
  if (!(omega0 > 0.0)) fail("omega0 must be positive");
  if (!(upsilon0 > 0.0)) fail("upsilon0 must be positive");
  if (!(kappa >= 0.0)) fail("kappa must be nonnegative");
  if (n_mcmc < 1) fail("n_mcmc must be positive");
  if (n_burn < 0 || n_burn >= n_mcmc) fail("n_burn must lie in [0, n_mcmc)");
}

int default_max_active(int p_real, int p_dummy) {
  const int real_part = std::min(3, p_real);
  const int dummy_part = std::min(3, (p_dummy + 1) / 2);
  return real_part + dummy_part;
}

double default_knot_quantile(int n) {
  const int tail = std::max(20, static_cast<int>(std::ceil(0.05 * n)));
  const double q = static_cast<double>(n - tail) / n;
  return std::clamp(q, 0.5, std::nextafter(1.0, 0.0));
}

Hyperparams resolve(Hyperparams h, int n, int p_real, int p_dummy) {
  if (!h.max_active) h.max_active = default_max_active(p_real, p_dummy);
  if (!h.knot_quantile) h.knot_quantile = default_knot_quantile(n);
  h.validate(p_real + p_dummy);
  return h;
}

}  // namespace bppr
