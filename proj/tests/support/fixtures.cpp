#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bppr/basis.hpp"
#include "bppr/csv.hpp"
#include "bppr/error.hpp"
#include "bppr/proposals.hpp"

namespace fixture {

bppr::Dataset synthetic_60x4(std::uint64_t seed) {
  bppr::Rng rng(seed);
  bppr::RawTable t;
  t.header = {"x1", "x2", "c", "y"};
  const char* levels[] = {"a", "b", "c"};
  for (int i = 0; i < 60; ++i) {
    const double x1 = rng.uniform(), x2 = rng.uniform();
    const int c = i < 3 ? i : static_cast<int>(rng.index(3));
    const double y = std::sin(3 * x1) + x2 + 0.5 * (c == 0) - 0.3 * (c == 1) + 0.3 * rng.normal();
    t.rows.push_back({bppr::format_double(x1), bppr::format_double(x2), levels[c], bppr::format_double(y)});
  }
  return bppr::prepare_dataset(t, {{"y"}, {"c"}, {}});
}

bppr::Hyperparams resolved(const bppr::Dataset& data, double lambda) {
  bppr::Hyperparams h;
  h.lambda = lambda;
  return bppr::resolve(h, data.n(), data.p_real(), data.p_dummy());
}

bppr::RidgeComponent random_ridge(const bppr::Dataset& data, const bppr::Hyperparams& h, bppr::Rng& rng) {
  while (true) {
    const int a = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(h.A())));
    std::vector<int> all(data.p());
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng.engine());
    std::vector<int> J(all.begin(), all.begin() + a);
    std::sort(J.begin(), J.end());
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(data.p());
    const Eigen::VectorXd dir = bppr::sample_uniform_subsphere(a, rng);
    for (int k = 0; k < a; ++k) theta(J[k]) = dir(k);
    try {
      const Eigen::VectorXd u = bppr::project(data.inputs(), J, theta);
      const bppr::KnotBounds kb = bppr::knot_bounds({u.data(), static_cast<std::size_t>(u.size())}, h.q(), h.p0);
      const double t0 = rng.uniform(kb.lower, kb.upper);
      return bppr::make_component(data.inputs(), J, theta, t0, h.K);
    } catch (const bppr::NumericError&) {
    }
  }
}

bppr::SamplerState random_state(const bppr::Dataset& data, const bppr::Hyperparams& h, bppr::Rng& rng,
                                int max_M) {
  while (true) {
    bppr::ModelState model;
    const int M = static_cast<int>(rng.index(static_cast<std::size_t>(max_M + 1)));
    for (int m = 0; m < M; ++m) model.components.push_back(random_ridge(data, h, rng));
    model.tau = std::exp(rng.uniform(std::log(0.5), std::log(200.0)));
    model.sigma2 = std::exp(rng.uniform(std::log(0.05), std::log(2.0)));
    try {
      return bppr::make_state(data, model);
    } catch (const bppr::NumericError&) {
    }
  }
}

}  // namespace fixture
