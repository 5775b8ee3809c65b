#include "bppr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bppr/basis.hpp"
#include "bppr/error.hpp"
#include "bppr/predict.hpp"

namespace bppr {

double effective_sample_size(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < 10) throw InputError("effective sample size needs at least 10 draws");
  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = trace[i] - mean;
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += c[i] * c[i + lag];
    return s / static_cast<double>(n);
  };
  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) throw NumericError("zero variance trace");

  // Pairs Gamma_k = rho_{2k} + rho_{2k+1}; stop at the first nonpositive pair.
  double pair_sum = 0.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = (autocov(2 * k) + autocov(2 * k + 1)) / gamma0;
    if (!(pair > 0.0)) break;
    pair_sum += pair;
  }
  const double tau = std::max(-1.0 + 2.0 * pair_sum, 1.0 / static_cast<double>(n));
  return std::min(static_cast<double>(n), static_cast<double>(n) / tau);
}

double split_rhat(std::span<const double> trace, int n_splits) {
  if (n_splits < 2) throw InputError("split R-hat needs at least 2 sub-chains");
  if (trace.size() < static_cast<std::size_t>(10 * n_splits)) {
    throw InputError("trace too short for split R-hat");
  }
  const std::size_t len = trace.size() / static_cast<std::size_t>(n_splits);
  std::vector<double> means(static_cast<std::size_t>(n_splits));
  double within = 0.0;
  for (int m = 0; m < n_splits; ++m) {
    const auto sub = trace.subspan(static_cast<std::size_t>(m) * len, len);
    const double mu = std::accumulate(sub.begin(), sub.end(), 0.0) / static_cast<double>(len);
    double ss = 0.0;
    for (double v : sub) ss += (v - mu) * (v - mu);
    within += ss / static_cast<double>(len - 1);
    means[static_cast<std::size_t>(m)] = mu;
  }
  within /= n_splits;
  if (!(within > 0.0)) throw NumericError("zero within-chain variance");
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / n_splits;
  double between = 0.0;
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between *= static_cast<double>(len) / (n_splits - 1);
  const double nbar = static_cast<double>(len);
  const double pooled = (nbar - 1.0) / nbar * within + between / nbar;
  return std::sqrt(pooled / within);
}

double coverage(std::span<const double> lower, std::span<const double> upper,
                std::span<const double> truth) {
  if (lower.size() != truth.size() || upper.size() != truth.size()) {
    throw InputError("coverage inputs differ in length");
  }
  if (truth.empty()) throw InputError("coverage of an empty set");
  std::size_t inside = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (lower[i] <= truth[i] && truth[i] <= upper[i]) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(truth.size());
}

double rmse(std::span<const double> prediction, std::span<const double> truth) {
  if (prediction.size() != truth.size() || truth.empty()) throw InputError("rmse inputs differ in length");
  double ss = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) ss += (prediction[i] - truth[i]) * (prediction[i] - truth[i]);
  return std::sqrt(ss / static_cast<double>(truth.size()));
}

AleCurve ale_one_way(const std::vector<ModelState>& states, const Dataset& data, int feature,
                     int n_bins, double level) {
  if (feature < 0 || feature >= data.p()) throw InputError("feature index out of range");
  if (data.is_dummy(feature)) throw InputError("accumulated local effects need a real-valued feature");
  if (n_bins < 2) throw InputError("at least 2 bins are required");
  if (states.empty()) throw InputError("no posterior draws");
  const Eigen::Index n = data.n();
  const Eigen::VectorXd xj = data.X.col(feature);

  std::vector<double> sorted(xj.data(), xj.data() + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
  for (int k = 0; k <= n_bins; ++k) edges[static_cast<std::size_t>(k)] = quantile_sorted(sorted, static_cast<double>(k) / n_bins);
  for (int k = 0; k < n_bins; ++k) {
    if (!(edges[static_cast<std::size_t>(k)] < edges[static_cast<std::size_t>(k) + 1])) {
      throw InputError("feature has too few distinct values for " + std::to_string(n_bins) +
                       " bins; use fewer bins");
    }
  }

  // Bin k covers (edges[k], edges[k+1]]; the minimum joins bin 0.
  std::vector<int> bin(static_cast<std::size_t>(n));
  std::vector<int> count(static_cast<std::size_t>(n_bins), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto it = std::lower_bound(edges.begin() + 1, edges.end() - 1, xj[i]);
    const int k = static_cast<int>(it - (edges.begin() + 1));
    bin[static_cast<std::size_t>(i)] = k;
    ++count[static_cast<std::size_t>(k)];
  }

  Eigen::MatrixXd X_lo = data.X;
  Eigen::MatrixXd X_hi = data.X;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = bin[static_cast<std::size_t>(i)];
    X_lo(i, feature) = edges[static_cast<std::size_t>(k)];
    X_hi(i, feature) = edges[static_cast<std::size_t>(k) + 1];
  }
  const auto& features = data.standardization.features;
  const PosteriorDraws lo = posterior_draws(states, InputView{X_lo, data.D_raw, features});
  const PosteriorDraws hi = posterior_draws(states, InputView{X_hi, data.D_raw, features});

  const auto S = static_cast<Eigen::Index>(states.size());
  AleCurve curve;
  curve.draws.resize(S, n_bins);
  for (Eigen::Index s = 0; s < S; ++s) {
    std::vector<double> local(static_cast<std::size_t>(n_bins), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) local[static_cast<std::size_t>(bin[static_cast<std::size_t>(i)])] += hi.f(s, i) - lo.f(s, i);
    // Accumulated effect at each edge, then averaged to bin centers.
    double acc = 0.0;
    double weighted = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double before = acc;
      acc += local[static_cast<std::size_t>(k)] / count[static_cast<std::size_t>(k)];
      curve.draws(s, k) = 0.5 * (before + acc);
      weighted += count[static_cast<std::size_t>(k)] * curve.draws(s, k);
    }
    curve.draws.row(s).array() -= weighted / static_cast<double>(n);
  }

  const FeatureColumn& f = features[static_cast<std::size_t>(feature)];
  const Eigen::VectorXd lower = column_quantiles(curve.draws, 0.5 * (1.0 - level));
  const Eigen::VectorXd upper = column_quantiles(curve.draws, 1.0 - 0.5 * (1.0 - level));
  for (int k = 0; k < n_bins; ++k) {
    const double center = 0.5 * (edges[static_cast<std::size_t>(k)] + edges[static_cast<std::size_t>(k) + 1]);
    curve.bin_center.push_back(f.mean + f.sd * center);
    curve.mean.push_back(curve.draws.col(k).mean());
    curve.lower.push_back(lower[k]);
    curve.upper.push_back(upper[k]);
    curve.bin_count.push_back(count[static_cast<std::size_t>(k)]);
  }
  return curve;
}

}  // namespace bppr
