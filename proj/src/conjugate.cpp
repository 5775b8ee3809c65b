#include "bppr/conjugate.hpp"

#include <cmath>

#include "bppr/error.hpp"
#include "bppr/simd/kernels.hpp"

namespace bppr {

GramCache gram_cache(const Eigen::MatrixXd& B, const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(B.rows());
  const auto c = static_cast<std::size_t>(B.cols());
  if (B.rows() < B.cols()) throw SingularDesign("more columns than rows");
  const auto& k = simd::active_kernels();

  GramCache g;
  g.n = static_cast<int>(n);
  g.BtB.resize(B.cols(), B.cols());
  g.Bty.resize(B.cols());
  k.gram(B.data(), n, c, y.data(), g.BtB.data(), g.Bty.data());
  g.yty = k.dot(y.data(), y.data(), n);

  g.col_norm = g.BtB.diagonal().cwiseSqrt();
  if ((g.col_norm.array() <= 0.0).any()) throw SingularDesign("zero column");
  const Eigen::VectorXd inv = g.col_norm.cwiseInverse();
  const Eigen::MatrixXd scaled = inv.asDiagonal() * g.BtB * inv.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(scaled);
  if (llt.info() != Eigen::Success) throw SingularDesign("Cholesky failed");
  g.scaled_chol = llt.matrixL();
  const Eigen::VectorXd d = g.scaled_chol.diagonal();
  if ((d.array() <= 0.0).any()) throw SingularDesign("nonpositive pivot");
  const double ratio = d.maxCoeff() / d.minCoeff();
  g.condition = ratio * ratio;
  if (!(g.condition <= kMaxCondition)) throw SingularDesign("condition estimate above 1e12");

  const Eigen::VectorXd z =
      g.scaled_chol.triangularView<Eigen::Lower>().solve(inv.cwiseProduct(g.Bty));
  g.ssq_fit = z.squaredNorm();

  // least-squares residual taken directly, not as yty - ssq_fit
  Eigen::VectorXd beta_hat = g.solve(g.Bty);
  Eigen::VectorXd fitted(B.rows());
  k.gemv(B.data(), n, c, beta_hat.data(), fitted.data());
  beta_hat += g.solve(B.transpose() * (y - fitted));  // one refinement step
  k.gemv(B.data(), n, c, beta_hat.data(), fitted.data());
  g.residual_ssq = (y - fitted).squaredNorm();
  return g;
}

Eigen::MatrixXd GramCache::lower_factor() const { return col_norm.asDiagonal() * scaled_chol; }

Eigen::VectorXd GramCache::solve(const Eigen::VectorXd& v) const {
  const Eigen::VectorXd inv = col_norm.cwiseInverse();
  Eigen::VectorXd w = scaled_chol.triangularView<Eigen::Lower>().solve(inv.cwiseProduct(v));
  w = scaled_chol.transpose().triangularView<Eigen::Upper>().solve(w);
  return inv.cwiseProduct(w);
}

double log_marginal_quadform(const GramCache& cache, double tau) {
  const double q = cache.residual_ssq + (cache.yty - cache.residual_ssq) / (1.0 + tau);
  if (!(q > 0.0)) throw SingularDesign("nonpositive quadratic form");
  return -0.5 * cache.n * std::log(q);
}

Eigen::VectorXd beta_mean(const GramCache& cache, double tau) {
  return (tau / (1.0 + tau)) * cache.solve(cache.Bty);
}

Eigen::VectorXd gibbs_beta(const GramCache& cache, double sigma2, double tau, Rng& rng) {
  const int c = cache.columns();
  Eigen::VectorXd z(c);
  for (int i = 0; i < c; ++i) z[i] = rng.normal();
  // Cov = sigma2 tau/(1+tau) S^-1 (Ls Ls')^-1 S^-1, so S^-1 Ls'^-1 z has the right shape.
  const Eigen::VectorXd w = cache.scaled_chol.transpose().triangularView<Eigen::Upper>().solve(z);
  const double scale = std::sqrt(sigma2 * tau / (1.0 + tau));
  return beta_mean(cache, tau) + scale * cache.col_norm.cwiseInverse().cwiseProduct(w);
}

double gibbs_sigma2(double residual_ssq, int n, Rng& rng) {
  return rng.inv_gamma(0.5 * n, 0.5 * residual_ssq);
}

double gibbs_tau(double fitted_ssq, double sigma2, int ridge_columns, int n, Rng& rng) {
  return rng.inv_gamma(1.0 + 0.5 * ridge_columns, 0.5 * (n + fitted_ssq / sigma2));
}

}  // namespace bppr
