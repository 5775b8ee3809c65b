#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bppr/dataset.hpp"
#include "bppr/model.hpp"

namespace bppr {

// Support of the uniform prior on a ridge's initial knot t0.
struct KnotBounds {
  double lower;
  double upper;
};

// Sample quantile by linear interpolation between order statistics
// (1-based position (n - 1) q + 1). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double q);
double quantile(std::span<const double> values, double q);

// U = Q_q(projections), L = U - (U - min) / p0. Throws DegenerateProjection
// when all projections are equal.
KnotBounds knot_bounds(std::span<const double> projections, double q, double p0);

// t_l = Q_{(l-1)/K} of the projections strictly above t0, l = 1..K+1.
// Throws DegenerateKnots when fewer than K+1 values exceed t0 or when any
// t_l (l <= K) ties t_{K+1}.
std::vector<double> interior_knots(std::span<const double> projections, double t0, int K);

// Scalar reference evaluation of the K basis functions at u.
// knots = t_1..t_{K+1}.
std::vector<double> eval_spline_basis(double u, double t0, std::span<const double> knots);

// 1 - prod_k (1 - d_k) over the listed raw dummy columns.
Eigen::VectorXd categorical_ridge_column(const Eigen::MatrixXd& D_raw, std::span<const int> dummy_columns);

// X theta restricted to the active set.
Eigen::VectorXd project(const InputView& in, const RidgeComponent& ridge);
Eigen::VectorXd project(const InputView& in, std::span<const int> J, const Eigen::VectorXd& theta);

// n x columns() block for one ridge; uses the stored knots.
Eigen::MatrixXd build_component_basis(const InputView& in, const RidgeComponent& ridge);

// [1_n B_1 ... B_M].
Eigen::MatrixXd build_design(const InputView& in, const std::vector<RidgeComponent>& components);

// True when every index of J is a dummy feature.
bool all_dummies(const InputView& in, std::span<const int> J);

// Completes a ridge from (J, theta, t0): sets kind and computes knots from the
// projections of `in`. Categorical ridges ignore t0 (stored as 0).
RidgeComponent make_component(const InputView& in, std::vector<int> J, Eigen::VectorXd theta,
                              double t0, int K);

}  // namespace bppr
