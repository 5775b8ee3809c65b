#include "bppr/basis.hpp"

#include <algorithm>
#include <cmath>

#include "bppr/error.hpp"
#include "bppr/simd/kernels.hpp"

namespace bppr {

double quantile_sorted(std::span<const double> sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 0) throw InputError("quantile of an empty sample");
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

KnotBounds knot_bounds(std::span<const double> projections, double q, double p0) {
  std::vector<double> sorted(projections.begin(), projections.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() < 2 || sorted.front() == sorted.back()) throw DegenerateProjection();
  const double upper = quantile_sorted(sorted, q);
  const double lower = upper - (upper - sorted.front()) / p0;
  if (!(lower < upper)) throw DegenerateProjection();
  return {lower, upper};
}

std::vector<double> interior_knots(std::span<const double> projections, double t0, int K) {
  std::vector<double> above;
  above.reserve(projections.size());
  for (double v : projections) {
    if (v > t0) above.push_back(v);
  }
  if (above.size() < static_cast<std::size_t>(K) + 1) {
    throw DegenerateKnots("only " + std::to_string(above.size()) + " projections exceed t0");
  }
  std::sort(above.begin(), above.end());
  std::vector<double> knots(static_cast<std::size_t>(K) + 1);
  for (int l = 0; l <= K; ++l) {
    knots[static_cast<std::size_t>(l)] = quantile_sorted(above, static_cast<double>(l) / K);
  }
  if (!(knots[static_cast<std::size_t>(K) - 1] < knots[static_cast<std::size_t>(K)])) {
    throw DegenerateKnots("tied upper knots");
  }
  return knots;
}

std::vector<double> eval_spline_basis(double u, double t0, std::span<const double> knots) {
  const int K = static_cast<int>(knots.size()) - 1;
  auto cube_pos = [](double v) { return v > 0.0 ? v * v * v : 0.0; };
  const double t_last = knots[static_cast<std::size_t>(K)];
  auto d = [&](int l) {  // 1-based divided difference
    const double tl = knots[static_cast<std::size_t>(l) - 1];
    return (cube_pos(u - tl) - cube_pos(u - t_last)) / (t_last - tl);
  };
  std::vector<double> b(static_cast<std::size_t>(K));
  b[0] = std::max(u - t0, 0.0);
  for (int l = 2; l <= K; ++l) b[static_cast<std::size_t>(l) - 1] = d(l - 1) - d(K);
  return b;
}

Eigen::VectorXd categorical_ridge_column(const Eigen::MatrixXd& D_raw, std::span<const int> dummy_columns) {
  Eigen::VectorXd none = Eigen::VectorXd::Ones(D_raw.rows());
  for (int k : dummy_columns) none.array() *= (1.0 - D_raw.col(k).array());
  return (1.0 - none.array()).matrix();
}

Eigen::VectorXd project(const InputView& in, std::span<const int> J, const Eigen::VectorXd& theta) {
  std::vector<double> w(J.size());
  for (std::size_t k = 0; k < J.size(); ++k) w[k] = theta[J[k]];
  Eigen::VectorXd out(in.X.rows());
  simd::active_kernels().project(in.X.data(), static_cast<std::size_t>(in.X.rows()),
                                 static_cast<std::size_t>(in.X.rows()), J.data(), w.data(), J.size(),
                                 out.data());
  return out;
}

Eigen::VectorXd project(const InputView& in, const RidgeComponent& ridge) {
  return project(in, ridge.J, ridge.theta);
}

bool all_dummies(const InputView& in, std::span<const int> J) {
  return std::all_of(J.begin(), J.end(), [&](int j) { return in.features[j].raw_dummy >= 0; });
}

Eigen::MatrixXd build_component_basis(const InputView& in, const RidgeComponent& ridge) {
  const Eigen::Index n = in.X.rows();
  if (ridge.kind == RidgeKind::kCategorical) {
    std::vector<int> raw(ridge.J.size());
    for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = in.features[ridge.J[k]].raw_dummy;
    return categorical_ridge_column(in.D_raw, raw);
  }
  const int K = static_cast<int>(ridge.knots.size()) - 1;
  const Eigen::VectorXd u = project(in, ridge);
  Eigen::MatrixXd out(n, K);
  simd::active_kernels().spline_basis(u.data(), static_cast<std::size_t>(n), ridge.t0,
                                      ridge.knots.data(), K, out.data());
  return out;
}

Eigen::MatrixXd build_design(const InputView& in, const std::vector<RidgeComponent>& components) {
  Eigen::Index cols = 1;
  for (const auto& r : components) cols += r.columns();
  Eigen::MatrixXd B(in.X.rows(), cols);
  B.col(0).setOnes();
  Eigen::Index at = 1;
  for (const auto& r : components) {
    const int c = r.columns();
    B.middleCols(at, c) = build_component_basis(in, r);
    at += c;
  }
  return B;
}

RidgeComponent make_component(const InputView& in, std::vector<int> J, Eigen::VectorXd theta,
                              double t0, int K) {
  RidgeComponent r;
  r.J = std::move(J);
  r.theta = std::move(theta);
  if (all_dummies(in, r.J)) {
    r.kind = RidgeKind::kCategorical;
    r.t0 = 0.0;
    return r;
  }
  r.kind = RidgeKind::kSpline;
  r.t0 = t0;
  const Eigen::VectorXd u = project(in, r);
  r.knots = interior_knots({u.data(), static_cast<std::size_t>(u.size())}, t0, K);
  return r;
}

}  // namespace bppr
