#include "bppr/predict.hpp"

#include <algorithm>
#include <vector>

#include "bppr/basis.hpp"
#include "bppr/error.hpp"
#include "bppr/rng.hpp"
#include "bppr/simd/kernels.hpp"

namespace bppr {

PosteriorDraws posterior_draws(const std::vector<ModelState>& states, const InputView& in) {
  const Eigen::Index n = in.X.rows();
  PosteriorDraws out;
  out.f.resize(static_cast<Eigen::Index>(states.size()), n);
  out.sigma.resize(static_cast<Eigen::Index>(states.size()));
  const auto& k = simd::active_kernels();
  Eigen::VectorXd f(n);
  for (std::size_t s = 0; s < states.size(); ++s) {
    const ModelState& st = states[s];
    const Eigen::MatrixXd B = build_design(in, st.components);
    if (B.cols() != st.beta.size()) throw InputError("coefficient length does not match ridge structure");
    k.gemv(B.data(), static_cast<std::size_t>(n), static_cast<std::size_t>(B.cols()), st.beta.data(), f.data());
    out.f.row(static_cast<Eigen::Index>(s)) = f.transpose();
    out.sigma[static_cast<Eigen::Index>(s)] = std::sqrt(st.sigma2);
  }
  return out;
}

PosteriorDraws posterior_draws(const PosteriorChain& chain, const EncodedInputs& inputs) {
  return posterior_draws(chain.states, inputs.inputs());
}

Eigen::VectorXd column_quantiles(const Eigen::MatrixXd& draws, double q) {
  Eigen::VectorXd out(draws.cols());
  std::vector<double> col(static_cast<std::size_t>(draws.rows()));
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    for (Eigen::Index s = 0; s < draws.rows(); ++s) col[static_cast<std::size_t>(s)] = draws(s, j);
    std::sort(col.begin(), col.end());
    out[j] = quantile_sorted(col, q);
  }
  return out;
}

Eigen::MatrixXd predictive_draws(const PosteriorDraws& draws, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd out = draws.f;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index s = 0; s < out.rows(); ++s) out(s, j) += draws.sigma[s] * rng.normal();
  }
  return out;
}

PredictionSummary summarize(const PosteriorDraws& draws, IntervalKind kind, double level,
                            std::uint64_t seed) {
  if (draws.f.rows() == 0) throw InputError("no posterior draws");
  if (!(level > 0.0 && level < 1.0)) throw InputError("interval level must lie in (0, 1)");
  PredictionSummary out;
  out.mean = draws.f.colwise().mean().transpose();
  if (kind == IntervalKind::kMean) return out;
  const double lo = 0.5 * (1.0 - level);
  if (kind == IntervalKind::kCredible) {
    out.lower = column_quantiles(draws.f, lo);
    out.upper = column_quantiles(draws.f, 1.0 - lo);
  } else {
    const Eigen::MatrixXd noisy = predictive_draws(draws, seed);
    out.lower = column_quantiles(noisy, lo);
    out.upper = column_quantiles(noisy, 1.0 - lo);
  }
  return out;
}

}  // namespace bppr
