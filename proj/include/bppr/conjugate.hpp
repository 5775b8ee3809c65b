#pragma once

#include <Eigen/Dense>

#include "bppr/rng.hpp"

namespace bppr {

// Factored normal equations of a design B against response y.
//
// The Cholesky factor is taken of the unit-diagonal rescaling
// S^-1 B'B S^-1 (S = diag of column norms), which makes the condition
// estimate scale-free. Rejection threshold: estimated condition > 1e12.
struct GramCache {
  Eigen::MatrixXd BtB;
  Eigen::VectorXd Bty;
  double yty = 0.0;
  int n = 0;
  Eigen::VectorXd col_norm;    // S
  Eigen::MatrixXd scaled_chol;  // lower factor of S^-1 B'B S^-1
  double ssq_fit = 0.0;         // y'B (B'B)^-1 B'y
  double residual_ssq = 0.0;    // ||y - B (B'B)^-1 B'y||^2
  double condition = 1.0;

  int columns() const { return static_cast<int>(BtB.rows()); }
  // Lower factor L of B'B itself (L L' = B'B).
  Eigen::MatrixXd lower_factor() const;
  // (B'B)^-1 v via the cached factor.
  Eigen::VectorXd solve(const Eigen::VectorXd& v) const;
};

inline constexpr double kMaxCondition = 1e12;

// Throws SingularDesign on Cholesky failure or condition estimate above kMaxCondition.
GramCache gram_cache(const Eigen::MatrixXd& B, const Eigen::VectorXd& y);

// -(n/2) log(y'y - tau/(1+tau) ssq_fit), evaluated as
// -(n/2) log(r + (y'y - r)/(1+tau)), r = residual_ssq. Throws SingularDesign when the
// bracket is not positive.
double log_marginal_quadform(const GramCache& cache, double tau);

// Posterior mean tau/(1+tau) (B'B)^-1 B'y.
Eigen::VectorXd beta_mean(const GramCache& cache, double tau);

// beta ~ N(Lambda B'y, sigma2 Lambda), Lambda = tau/(1+tau) (B'B)^-1.
Eigen::VectorXd gibbs_beta(const GramCache& cache, double sigma2, double tau, Rng& rng);

// sigma2 ~ Inv-Gamma(n/2, residual_ssq/2).
double gibbs_sigma2(double residual_ssq, int n, Rng& rng);

// tau ~ Inv-Gamma(1 + ridge_columns/2, (n + fitted_ssq/sigma2)/2) where
// fitted_ssq = ||B beta||^2 including the intercept column.
double gibbs_tau(double fitted_ssq, double sigma2, int ridge_columns, int n, Rng& rng);

}  // namespace bppr
