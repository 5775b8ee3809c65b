#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bppr/dataset.hpp"
#include "bppr/hyperparams.hpp"

namespace bppr {

enum class RidgeKind { kSpline, kCategorical };

// Structural parameters of one ridge function plus its derived knots.
struct RidgeComponent {
  RidgeKind kind = RidgeKind::kSpline;
  std::vector<int> J;      // sorted active feature indices (0-based)
  Eigen::VectorXd theta;   // length p, unit norm, zero off J
  double t0 = 0.0;         // initial knot; unused for categorical ridges
  std::vector<double> knots;  // t_1..t_{K+1}; empty for categorical ridges

  int a() const { return static_cast<int>(J.size()); }
  // Design columns contributed by this ridge.
  int columns() const {
    return kind == RidgeKind::kSpline ? static_cast<int>(knots.size()) - 1 : 1;
  }
};

// Parameters of one posterior draw. The design matrix lives in SamplerState.
struct ModelState {
  std::vector<RidgeComponent> components;
  Eigen::VectorXd beta;  // intercept followed by each ridge's block
  double sigma2 = 1.0;
  double tau = 1.0;

  int M() const { return static_cast<int>(components.size()); }
  int ridge_columns() const {
    int c = 0;
    for (const auto& r : components) c += r.columns();
    return c;
  }
};

struct PosteriorChain {
  Hyperparams hyper;
  Standardization standardization;
  std::vector<ModelState> states;  // retained draws, in order
  std::vector<double> sigma_trace;  // sigma (not sigma^2), every iteration
  std::vector<int> M_trace;
  std::vector<double> tau_trace;
};

}  // namespace bppr
