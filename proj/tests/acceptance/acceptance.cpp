// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is the number of failing criteria (capped at 255).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "bppr/basis.hpp"
#include "bppr/conjugate.hpp"
#include "bppr/diagnostics.hpp"
#include "bppr/error.hpp"
#include "bppr/multivariate.hpp"
#include "bppr/predict.hpp"
#include "bppr/proposals.hpp"
#include "bppr/sampler.hpp"
#include "bppr/testbed.hpp"
#include "bppr/testing/hooks.hpp"

using namespace bppr;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string f3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// ---- Friedman fits shared by criteria 1-3

struct FriedmanRun {
  std::uint64_t seed;
  double seconds;
  double sigma_mean, sigma_lo, sigma_hi;
  double rmse_f, coverage_y;
  double rhat, ess;
  int modal_M;
  double x6_share;
};

std::vector<FriedmanRun> friedman_runs() {
  std::vector<FriedmanRun> runs;
  const auto scen = make_scenario("friedman");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimulatedSplit split = simulate(*scen, 300, 6, 1.0, seed, 2000);
    const Dataset data = prepare_dataset(split.train.X, split.train.y);
    Hyperparams h;
    h.n_mcmc = 20000;
    h.n_burn = 18000;
    h.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const PosteriorChain chain = run_chain(data, h);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    FriedmanRun r{};
    r.seed = seed;
    r.seconds = secs;
    std::vector<double> sig(chain.sigma_trace.end() - static_cast<std::ptrdiff_t>(chain.states.size()),
                            chain.sigma_trace.end());
    double s = 0;
    for (double v : sig) s += v;
    r.sigma_mean = s / sig.size();
    r.sigma_lo = oracle::quantile(sig, 0.025);
    r.sigma_hi = oracle::quantile(sig, 0.975);
    try {
      r.rhat = split_rhat(sig, 5);
      r.ess = effective_sample_size(sig);
    } catch (const Error&) {
      r.rhat = NAN;
      r.ess = NAN;
    }

    const EncodedInputs enc = encode_inputs(chain.standardization, split.test.X);
    const PosteriorDraws draws = posterior_draws(chain, enc);
    const PredictionSummary pred = summarize(draws, IntervalKind::kPredictive, 0.95, seed + 100);
    r.rmse_f = rmse(vec(pred.mean), vec(split.test.f));
    r.coverage_y = coverage(vec(pred.lower), vec(pred.upper), vec(split.test.y));

    std::map<int, int> hist;
    long ridges = 0, with6 = 0;
    for (const auto& st : chain.states) {
      ++hist[st.M()];
      for (const auto& c : st.components) {
        ++ridges;
        with6 += std::find(c.J.begin(), c.J.end(), 5) != c.J.end();
      }
    }
    r.modal_M = std::max_element(hist.begin(), hist.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
    r.x6_share = ridges ? static_cast<double>(with6) / ridges : 0.0;
    runs.push_back(r);
  }
  return runs;
}

Outcome criterion1(const std::vector<FriedmanRun>& runs) {
  bool ok = true;
  std::ostringstream d;
  for (const auto& r : runs) {
    const bool pass = r.sigma_mean >= 0.90 && r.sigma_mean <= 1.20 && r.sigma_hi - r.sigma_lo < 0.35 &&
                      r.rmse_f <= 0.70 && r.coverage_y >= 0.88 && r.coverage_y <= 0.99 && r.seconds < 300;
    ok = ok && pass;
    d << " [seed " << r.seed << (pass ? "" : " FAIL") << ": sigma=" << f3(r.sigma_mean) << " ci_width="
      << f3(r.sigma_hi - r.sigma_lo) << " rmse_f=" << f3(r.rmse_f) << " coverage=" << f3(r.coverage_y)
      << " secs=" << f3(r.seconds) << "]";
  }
  return {ok, d.str()};
}

Outcome criterion2(const std::vector<FriedmanRun>& runs) {
  // judged on the seed-1 reference fit; all seeds shown
  const FriedmanRun& ref = runs.front();
  const bool ok = ref.rhat < 1.05 && ref.ess > 500;
  std::ostringstream d;
  d << " reference seed 1: rhat=" << f3(ref.rhat) << " ess=" << f3(ref.ess) << "; all seeds:";
  int all = 0;
  for (const auto& r : runs) {
    d << " " << r.seed << ":(" << f3(r.rhat) << "," << f3(r.ess) << ")";
    all += r.rhat < 1.05 && r.ess > 500;
  }
  d << " seeds meeting both=" << all << "/5";
  return {ok, d.str()};
}

Outcome criterion3(const std::vector<FriedmanRun>& runs) {
  int good = 0;
  std::ostringstream d;
  for (const auto& r : runs) {
    const bool g = r.modal_M >= 4 && r.modal_M <= 6 && r.x6_share < 0.05;
    good += g;
    d << " [seed " << r.seed << ": modal_M=" << r.modal_M << " x6_share=" << f3(r.x6_share) << "]";
  }
  return {good >= 3, " seeds satisfying=" + std::to_string(good) + "/5" + d.str()};
}

// ---- sampler oracles

AdaptiveWeights weights_of(const ModelState& m, const Dataset& d, const Hyperparams& h) {
  return adaptive_weights(m.components, h.A(), d.p(), h.omega0, h.upsilon0);
}

Outcome criterion4() {
  const Dataset data = fixture::synthetic_60x4(11);
  const Hyperparams h = fixture::resolved(data);
  Rng rng(404);
  int states = 0, nb = 0, nd = 0, nc = 0;
  double worst = 0;
  while (states < 100) {
    const SamplerState st = fixture::random_state(data, h, rng);
    try {
      const AdaptiveWeights w = weights_of(st.model, data, h);
      const BirthProposal bp = propose_birth(st.model, data, h, w, rng);
      worst = std::max(worst, std::abs(birth_log_ratio(st, data, h, w, bp) -
                                       oracle::birth_log_alpha(st.model, data, h, bp.ridge, bp.slot)));
      ++nb;
    } catch (const NumericError&) {
    }
    if (st.model.M() > 0) {
      const int m = static_cast<int>(rng.index(static_cast<std::size_t>(st.model.M())));
      try {
        worst = std::max(worst, std::abs(death_log_ratio(st, data, h, m) -
                                         oracle::death_log_alpha(st.model, data, h, m)));
        ++nd;
      } catch (const NumericError&) {
      }
      try {
        const RidgeComponent rep = propose_change(st.model.components[m], data, h, rng);
        worst = std::max(worst, std::abs(change_log_ratio(st, data, m, rep) -
                                         oracle::change_log_alpha(st.model, data, m, rep)));
        ++nc;
      } catch (const NumericError&) {
      }
    }
    ++states;
  }
  return {worst < 1e-8 && nb > 0 && nd > 0 && nc > 0,
          " states=100 birth=" + std::to_string(nb) + " death=" + std::to_string(nd) + " change=" +
              std::to_string(nc) + " max_abs_diff=" + f3(worst)};
}

Outcome criterion5() {
  const Dataset data = fixture::synthetic_60x4(12);
  const Hyperparams h = fixture::resolved(data);
  Rng rng(505);
  int pairs = 0;
  double worst = 0;
  while (pairs < 100) {
    const SamplerState st = fixture::random_state(data, h, rng);
    if (st.model.M() == 0) continue;
    const int m = static_cast<int>(rng.index(static_cast<std::size_t>(st.model.M())));
    ModelState reduced = st.model;
    reduced.components.erase(reduced.components.begin() + m);
    const SamplerState small = make_state(data, reduced);
    const double b = birth_log_ratio(small, data, h, weights_of(reduced, data, h), {st.model.components[m], m});
    worst = std::max(worst, std::abs(b + death_log_ratio(st, data, h, m)));
    ++pairs;
  }
  return {worst < 1e-10, " pairs=100 max_abs_sum=" + f3(worst)};
}

Outcome criterion6() {
  const Dataset data = fixture::synthetic_60x4(13);
  const Hyperparams h = fixture::resolved(data, 2.0);
  Rng rng(606);
  SamplerState st = initial_state(data);
  const int N = 100000, thin = 10, top = 6;
  std::vector<int> count(top + 1, 0);
  for (int s = 0; s < N; ++s) {
    testing::mcmc_step(st, data, h, rng, {true});
    if (s % thin == thin - 1) ++count[std::min(st.model.M(), top)];
  }
  const int draws = N / thin;
  double chi2 = 0, tail = 1.0;
  std::ostringstream d;
  for (int m = 0; m <= top; ++m) {
    double pm = m == top ? tail : std::exp(-2.0) * std::pow(2.0, m) / std::tgamma(m + 1.0);
    tail -= pm;
    const double e = draws * pm;
    chi2 += (count[m] - e) * (count[m] - e) / e;
    d << (m ? "," : "") << count[m];
  }
  const double p = oracle::chi_square_pvalue(chi2, top);
  return {p > 0.001, " steps=100000 thin=10 counts(0..5,6+)=" + d.str() + " chi2=" + f3(chi2) + " p=" + f3(p)};
}

// ---- proposals

Outcome criterion7() {
  Rng rng(707);
  double worst_sum = 0;
  for (int p = 1; p <= 6; ++p)
    for (int a = 1; a <= std::min(3, p); ++a)
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> u(p);
        for (auto& v : u) v = 0.1 + 5 * rng.uniform();
        double total = 0;
        for (const auto& J : oracle::subsets(p, a)) total += std::exp(wallenius_log_pmf(J, u));
        worst_sum = std::max(worst_sum, std::abs(total - 1.0));
      }

  const int N = 1000000;
  int checks = 0, misses = 0;
  double worst_z = 0;
  for (int v = 0; v < 5; ++v) {
    std::vector<double> u(6);
    for (auto& x : u) x = 1.0 + rng.uniform() * 4.0 + v;
    for (int a : {2, 3}) {
      std::map<std::vector<int>, int> count;
      for (int i = 0; i < N; ++i) ++count[sample_feature_set(u, a, rng)];
      for (const auto& J : oracle::subsets(6, a)) {
        const double pr = oracle::wallenius_pmf(J, u);
        const double z = std::abs(count[J] / double(N) - pr) / std::sqrt(pr * (1 - pr) / N);
        worst_z = std::max(worst_z, z);
        ++checks;
        misses += z >= 4.0;
      }
    }
  }
  return {worst_sum < 1e-12 && misses == 0, " max|sum-1|=" + f3(worst_sum) + " cells=" + std::to_string(checks) +
                                                " max_z=" + f3(worst_z) + " beyond_4se=" + std::to_string(misses)};
}

// ---- spline contract

Outcome criterion8() {
  Rng rng(808);
  bool zero_left = true;
  double worst_affine = 0, worst_c2 = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int K = 2 + static_cast<int>(rng.index(6));
    std::vector<double> knots(K + 1);
    for (auto& k : knots) k = rng.normal();
    std::sort(knots.begin(), knots.end());
    const double t0 = knots.front() - 0.1 - rng.uniform();
    const double range = knots.back() - t0;
    const double h = 1e-4 * range;
    auto f = [&](double u, int l) { return eval_spline_basis(u, t0, knots)[l]; };

    for (int s = 1; s <= 20; ++s) {
      const double u = t0 - s * range / 10.0;
      for (double b : eval_spline_basis(u, t0, knots)) zero_left = zero_left && b == 0.0;
    }
    for (double b : eval_spline_basis(t0, t0, knots)) zero_left = zero_left && b == 0.0;

    double min_gap = range;
    for (int k = 0; k < K; ++k) min_gap = std::min(min_gap, knots[k + 1] - knots[k]);
    for (int l = 0; l < K; ++l) {
      for (int s = 1; s <= 10; ++s) {
        const double u = knots.back() + s * range / 10.0;
        const double d2 = (f(u + h, l) - 2 * f(u, l) + f(u - h, l));
        const double scaled = std::abs(d2) / std::max(1.0, std::abs(f(u, l)));
        worst_affine = std::max(worst_affine, scaled);
      }
      // |f'''| <= 6 * 2 / min_gap bounds the one-sided discrepancy by O(h)
      const double bound = 4.0 * (12.0 / min_gap) * h;
      for (int k = 1; k < K; ++k) {
        const double t = knots[k];
        const double left = (f(t, l) - 2 * f(t - h, l) + f(t - 2 * h, l)) / (h * h);
        const double right = (f(t + 2 * h, l) - 2 * f(t + h, l) + f(t, l)) / (h * h);
        worst_c2 = std::max(worst_c2, std::abs(left - right) / (bound + 1e-4));
      }
    }
  }
  const bool ok = zero_left && worst_affine < 1e-8 && worst_c2 < 1.0;
  return {ok, " trials=50 zero_left_exact=" + std::string(zero_left ? "yes" : "no") +
                  " max_scaled_second_diff=" + f3(worst_affine) + " max_c2_gap/bound=" + f3(worst_c2)};
}

// ---- conjugate core

Outcome criterion9() {
  Rng rng(909);
  const int n = 40, c = 4;
  Eigen::MatrixXd B(n, c);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    B(i, 0) = 1.0;
    for (int j = 1; j < c; ++j) B(i, j) = rng.normal();
    y(i) = rng.normal() + 0.5 * B(i, 1);
  }
  const GramCache gc = gram_cache(B, y);
  const double tau = 7.0, sigma2 = 0.6;
  const Eigen::MatrixXd Lambda = tau / (1 + tau) * (B.transpose() * B).inverse();
  const Eigen::VectorXd mu = Lambda * B.transpose() * y;
  const Eigen::MatrixXd Sigma = sigma2 * Lambda;
  const int N = 100000;
  Eigen::MatrixXd draws(N, c);
  for (int s = 0; s < N; ++s) draws.row(s) = gibbs_beta(gc, sigma2, tau, rng).transpose();
  const Eigen::VectorXd m = draws.colwise().mean();
  const Eigen::MatrixXd cen = draws.rowwise() - m.transpose();
  const Eigen::MatrixXd cov = cen.transpose() * cen / (N - 1);
  double worst = 0;
  for (int j = 0; j < c; ++j) {
    worst = std::max(worst, std::abs(m(j) - mu(j)) / std::sqrt(Sigma(j, j) / N));
    for (int k = 0; k < c; ++k) {
      const double se = std::sqrt((Sigma(j, j) * Sigma(k, k) + Sigma(j, k) * Sigma(j, k)) / N);
      worst = std::max(worst, std::abs(cov(j, k) - Sigma(j, k)) / se);
    }
  }

  std::vector<double> s2(N);
  const double rss = 31.0;
  for (auto& v : s2) v = gibbs_sigma2(rss, n, rng);
  const double D = oracle::ks_statistic(s2, [&](double x) { return oracle::inv_gamma_cdf(x, n / 2.0, rss / 2.0); });
  return {worst < 4.0 && D < 0.01, " beta max_z=" + f3(worst) + " sigma2 KS D=" + f3(D)};
}

// ---- power spherical

Outcome criterion10() {
  Rng rng(1010);
  const int N = 100000;
  bool ok = true;
  std::ostringstream d;
  for (int a : {2, 3, 5}) {
    const Eigen::VectorXd mu = sample_uniform_subsphere(a, rng);
    std::vector<double> t(N);
    for (auto& v : t) v = mu.dot(sample_power_spherical(mu, 0.0, rng));
    const double D = oracle::ks_statistic(t, [a](double x) { return oracle::uniform_cosine_cdf(x, a); });
    const double p = oracle::ks_pvalue(D, N);
    ok = ok && p > 0.001;
    d << " k0[a=" << a << "] p=" << f3(p);
  }
  for (int a : {2, 3, 5}) {
    const Eigen::VectorXd mu = sample_uniform_subsphere(a, rng);
    double sum = 0;
    for (int i = 0; i < N; ++i) sum += mu.dot(sample_power_spherical(mu, 1000.0, rng));
    const auto [mean, sd] = oracle::power_spherical_cosine_moments(1000.0, a);
    const double z = std::abs(sum / N - mean) / (sd / std::sqrt(N));
    ok = ok && z < 4.0;
    d << " k1000[a=" << a << "] z=" << f3(z);
  }
  return {ok, d.str()};
}

// ---- multivariate

Outcome criterion11() {
  Rng rng(1111);
  Eigen::MatrixXd Y(30, 8);
  for (int i = 0; i < Y.rows(); ++i)
    for (int j = 0; j < Y.cols(); ++j) Y(i, j) = rng.normal() * (j + 1) + j;
  BasisConfig square;
  square.components = 8;
  const ResponseBasis b = fit_response_basis(Y, square);
  const double round_trip = (reconstruct(transform(Y, b), b) - Y).cwiseAbs().maxCoeff();

  const FunctionalSplit fs = simulate_friedman_functional(200, 500, 5, 50, 1.0, 1111);
  const Dataset data = prepare_dataset(fs.train.X, fs.train.Y);
  Hyperparams h;
  h.n_mcmc = 20000;
  h.n_burn = 18000;
  h.seed = 11;
  BasisConfig cfg;
  cfg.components = 15;
  const auto t0 = std::chrono::steady_clock::now();
  const MultivariateFit fit = fit_multivariate(data, h, cfg, 0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Eigen::MatrixXd pred = predict_mean(fit, encode_inputs(fit.chains[0].standardization, fs.test.X));
  double avg = 0;
  for (int d = 0; d < 50; ++d) avg += std::sqrt((pred.col(d) - fs.test.F.col(d)).squaredNorm() / pred.rows());
  avg /= 50;
  return {round_trip < 1e-10 && avg <= 0.30, " round_trip_max=" + f3(round_trip) + " p=9 D=50 D-=15 holdout_rmse_f=" +
                                                  f3(avg) + " secs=" + f3(secs)};
}

// ---- noise scenario

Outcome criterion12() {
  const SimulatedSplit split = simulate(*make_scenario("noise"), 500, 6, 1.0, 1212, 2000);
  const Dataset data = prepare_dataset(split.train.X, split.train.y);
  Hyperparams h;
  h.n_mcmc = 20000;
  h.n_burn = 18000;
  h.seed = 12;
  const PosteriorChain chain = run_chain(data, h);
  const PosteriorDraws draws = posterior_draws(chain, encode_inputs(chain.standardization, split.test.X));
  const PredictionSummary pred = summarize(draws, IntervalKind::kPredictive, 0.95, 1212);
  const double r = rmse(vec(pred.mean), vec(split.test.y));
  const double m = pred.mean.mean();
  return {std::abs(r - 1.0) <= 0.10 && std::abs(m) < 0.15, " n=500 p=6 test_rmse=" + f3(r) + " mean_prediction=" + f3(m)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s criterion %d (%s):%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& f) -> Outcome {
    try {
      return f();
    } catch (const std::exception& e) {
      return {false, std::string(" exception: ") + e.what()};
    }
  };

  std::vector<FriedmanRun> runs;
  std::string run_error;
  try {
    runs = friedman_runs();
  } catch (const std::exception& e) {
    run_error = e.what();
  }
  auto with_runs = [&](Outcome (*f)(const std::vector<FriedmanRun>&)) {
    return runs.size() == 5 ? f(runs) : Outcome{false, " exception: " + run_error};
  };
  report(1, "friedman end-to-end", with_runs(criterion1));
  report(2, "convergence diagnostics", with_runs(criterion2));
  report(3, "posterior structure", with_runs(criterion3));
  report(4, "MH ratio oracle", guarded(criterion4));
  report(5, "birth/death reciprocity", guarded(criterion5));
  report(6, "prior recovery", guarded(criterion6));
  report(7, "wallenius", guarded(criterion7));
  report(8, "spline contract", guarded(criterion8));
  report(9, "conjugate core", guarded(criterion9));
  report(10, "power spherical", guarded(criterion10));
  report(11, "multivariate", guarded(criterion11));
  report(12, "noise scenario", guarded(criterion12));
  std::printf("%d of 12 criteria failed\n", failures);
  return std::min(failures, 255);
}
