#include "bppr/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bppr/basis.hpp"
#include "bppr/error.hpp"
#include "bppr/simd/kernels.hpp"
#include "bppr/testing/hooks.hpp"

namespace bppr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_choose(int p, int a) {
  return std::lgamma(p + 1.0) - std::lgamma(a + 1.0) - std::lgamma(p - a + 1.0);
}

// log of the probability that the birth proposal picks J given a.
double log_feature_proposal(std::span<const int> J, const AdaptiveWeights& w) {
  if (J.size() == 1) return -std::log(static_cast<double>(w.upsilon.size()));
  return wallenius_log_pmf(J, w.upsilon);
}

// Prior-over-proposal terms of a birth that takes the model from M to M + 1
// ridges by adding `ridge`.
double birth_log_prior_proposal(const RidgeComponent& ridge, int M_new, int p,
                                const Hyperparams& hyper, const AdaptiveWeights& w) {
  const int a = ridge.a();
  return std::log(hyper.lambda) - std::log(static_cast<double>(M_new)) -
         std::log(static_cast<double>(hyper.A())) - log_choose(p, a) -
         std::log(w.omega_probability(a)) - log_feature_proposal(ridge.J, w);
}

Eigen::MatrixXd insert_block(const Eigen::MatrixXd& B, Eigen::Index at, const Eigen::MatrixXd& block) {
  Eigen::MatrixXd out(B.rows(), B.cols() + block.cols());
  out.leftCols(at) = B.leftCols(at);
  out.middleCols(at, block.cols()) = block;
  out.rightCols(B.cols() - at) = B.rightCols(B.cols() - at);
  return out;
}

Eigen::MatrixXd remove_block(const Eigen::MatrixXd& B, Eigen::Index at, Eigen::Index width) {
  Eigen::MatrixXd out(B.rows(), B.cols() - width);
  out.leftCols(at) = B.leftCols(at);
  out.rightCols(B.cols() - at - width) = B.rightCols(B.cols() - at - width);
  return out;
}

Eigen::VectorXd spline_direction(const Eigen::VectorXd& active, std::span<const int> J, int p) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < J.size(); ++k) theta[J[k]] = active[static_cast<Eigen::Index>(k)];
  return theta;
}

// Draws t0 from its prior given the projections and completes the ridge.
RidgeComponent complete_ridge(const Dataset& data, const Hyperparams& hyper, std::vector<int> J,
                              Eigen::VectorXd theta, Rng& rng) {
  const InputView in = data.inputs();
  if (all_dummies(in, J)) return make_component(in, std::move(J), std::move(theta), 0.0, hyper.K);
  const Eigen::VectorXd u = project(in, J, theta);
  const KnotBounds b = knot_bounds({u.data(), static_cast<std::size_t>(u.size())}, hyper.q(), hyper.p0);
  const double t0 = rng.uniform(b.lower, b.upper);
  return make_component(in, std::move(J), std::move(theta), t0, hyper.K);
}

double likelihood_log_ratio(const GramCache& current, const GramCache& candidate, double tau,
                            int column_change) {
  return log_marginal_quadform(candidate, tau) - log_marginal_quadform(current, tau) -
         0.5 * column_change * std::log1p(tau);
}

double birth_log_ratio_impl(const SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                            const AdaptiveWeights& weights, const BirthProposal& proposal,
                            Candidate* out, bool unit_likelihood) {
  const ModelState& model = state.model;
  const Eigen::MatrixXd block = build_component_basis(data.inputs(), proposal.ridge);
  Candidate cand;
  cand.design = insert_block(state.design, column_offset(model, proposal.slot), block);
  double log_alpha = birth_log_prior_proposal(proposal.ridge, model.M() + 1, data.p(), hyper, weights);
  if (!unit_likelihood) {
    cand.cache = gram_cache(cand.design, data.y);
    log_alpha += likelihood_log_ratio(state.cache, cand.cache, model.tau, proposal.ridge.columns());
  }
  if (out) *out = std::move(cand);
  return log_alpha;
}

double death_log_ratio_impl(const SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                            int victim, Candidate* out, bool unit_likelihood) {
  const ModelState& model = state.model;
  const RidgeComponent& ridge = model.components[static_cast<std::size_t>(victim)];
  std::vector<RidgeComponent> remaining = model.components;
  remaining.erase(remaining.begin() + victim);
  const AdaptiveWeights reverse =
      adaptive_weights(remaining, hyper.A(), data.p(), hyper.omega0, hyper.upsilon0);
  Candidate cand;
  cand.design = remove_block(state.design, column_offset(model, victim), ridge.columns());
  double log_alpha = -birth_log_prior_proposal(ridge, model.M(), data.p(), hyper, reverse);
  if (!unit_likelihood) {
    cand.cache = gram_cache(cand.design, data.y);
    log_alpha += likelihood_log_ratio(state.cache, cand.cache, model.tau, -ridge.columns());
  }
  if (out) *out = std::move(cand);
  return log_alpha;
}

double change_log_ratio_impl(const SamplerState& state, const Dataset& data, int index,
                             const RidgeComponent& replacement, Candidate* out, bool unit_likelihood) {
  const ModelState& model = state.model;
  const RidgeComponent& ridge = model.components[static_cast<std::size_t>(index)];
  if (replacement.columns() != ridge.columns()) throw InputError("change must preserve the column count");
  Candidate cand;
  cand.design = state.design;
  cand.design.middleCols(column_offset(model, index), ridge.columns()) =
      build_component_basis(data.inputs(), replacement);
  double log_alpha = 0.0;
  if (!unit_likelihood) {
    cand.cache = gram_cache(cand.design, data.y);
    log_alpha = likelihood_log_ratio(state.cache, cand.cache, model.tau, 0);
  }
  if (out) *out = std::move(cand);
  return log_alpha;
}

bool metropolis_accept(double log_alpha, Rng& rng) {
  const double v = rng.uniform();
  return log_alpha >= 0.0 || std::log(v) < log_alpha;
}

StepOutcome birth_step_impl(SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                            Rng& rng, bool unit_likelihood) {
  StepOutcome outcome;
  outcome.kind = MoveKind::kBirth;
  const AdaptiveWeights weights =
      adaptive_weights(state.model.components, hyper.A(), data.p(), hyper.omega0, hyper.upsilon0);
  try {
    BirthProposal proposal = propose_birth(state.model, data, hyper, weights, rng);
    outcome.m_star = proposal.slot;
    Candidate cand;
    outcome.log_alpha =
        birth_log_ratio_impl(state, data, hyper, weights, proposal, &cand, unit_likelihood);
    outcome.accepted = metropolis_accept(outcome.log_alpha, rng);
    if (outcome.accepted) {
      auto& comps = state.model.components;
      comps.insert(comps.begin() + proposal.slot, std::move(proposal.ridge));
      state.design = std::move(cand.design);
      if (!unit_likelihood) state.cache = std::move(cand.cache);
    }
  } catch (const NumericError&) {
    outcome.accepted = false;
    outcome.log_alpha = kNegInf;
  }
  return outcome;
}

StepOutcome death_step_impl(SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                            Rng& rng, bool unit_likelihood) {
  StepOutcome outcome;
  if (state.model.M() == 0) return outcome;  // skipped
  outcome.kind = MoveKind::kDeath;
  const int victim = static_cast<int>(rng.index(static_cast<std::size_t>(state.model.M())));
  outcome.m_star = victim;
  try {
    Candidate cand;
    outcome.log_alpha = death_log_ratio_impl(state, data, hyper, victim, &cand, unit_likelihood);
    outcome.accepted = metropolis_accept(outcome.log_alpha, rng);
    if (outcome.accepted) {
      state.model.components.erase(state.model.components.begin() + victim);
      state.design = std::move(cand.design);
      if (!unit_likelihood) state.cache = std::move(cand.cache);
    }
  } catch (const NumericError&) {
    outcome.accepted = false;
    outcome.log_alpha = kNegInf;
  }
  return outcome;
}

StepOutcome change_step_impl(SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                             Rng& rng, bool unit_likelihood) {
  StepOutcome outcome;
  if (state.model.M() == 0) return outcome;  // skipped
  outcome.kind = MoveKind::kChange;
  const int index = static_cast<int>(rng.index(static_cast<std::size_t>(state.model.M())));
  outcome.m_star = index;
  try {
    RidgeComponent replacement =
        propose_change(state.model.components[static_cast<std::size_t>(index)], data, hyper, rng);
    Candidate cand;
    outcome.log_alpha = change_log_ratio_impl(state, data, index, replacement, &cand, unit_likelihood);
    outcome.accepted = metropolis_accept(outcome.log_alpha, rng);
    if (outcome.accepted) {
      state.model.components[static_cast<std::size_t>(index)] = std::move(replacement);
      state.design = std::move(cand.design);
      if (!unit_likelihood) state.cache = std::move(cand.cache);
    }
  } catch (const NumericError&) {
    outcome.accepted = false;
    outcome.log_alpha = kNegInf;
  }
  return outcome;
}

StepOutcome mcmc_step_impl(SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                           Rng& rng, bool unit_likelihood) {
  StepOutcome outcome;
  switch (rng.index(3)) {
    case 0:
      outcome = birth_step_impl(state, data, hyper, rng, unit_likelihood);
      break;
    case 1:
      outcome = death_step_impl(state, data, hyper, rng, unit_likelihood);
      break;
    default:
      outcome = change_step_impl(state, data, hyper, rng, unit_likelihood);
      break;
  }
  if (!unit_likelihood) gibbs_update(state, data, rng);
  return outcome;
}

}  // namespace

int column_offset(const ModelState& model, int m) {
  int at = 1;
  for (int k = 0; k < m; ++k) at += model.components[static_cast<std::size_t>(k)].columns();
  return at;
}

SamplerState initial_state(const Dataset& data) {
  SamplerState s;
  const double ybar = data.y.mean();
  s.model.beta = Eigen::VectorXd::Constant(1, ybar);
  s.model.tau = 1.0;
  s.model.sigma2 = sample_sd(data.y) * sample_sd(data.y);
  if (!(s.model.sigma2 > 0.0)) s.model.sigma2 = 1.0;
  s.design = Eigen::MatrixXd::Ones(data.n(), 1);
  s.cache = gram_cache(s.design, data.y);
  return s;
}

SamplerState make_state(const Dataset& data, ModelState model) {
  SamplerState s;
  s.design = build_design(data.inputs(), model.components);
  s.cache = gram_cache(s.design, data.y);
  if (model.beta.size() != s.design.cols()) model.beta = beta_mean(s.cache, model.tau);
  s.model = std::move(model);
  return s;
}

BirthProposal propose_birth(const ModelState& model, const Dataset& data, const Hyperparams& hyper,
                            const AdaptiveWeights& weights, Rng& rng) {
  const int a = static_cast<int>(rng.categorical(weights.omega)) + 1;
  std::vector<int> J = sample_feature_set(weights.upsilon, a, rng);
  Eigen::VectorXd theta = spline_direction(sample_uniform_subsphere(a, rng), J, data.p());
  BirthProposal proposal;
  proposal.ridge = complete_ridge(data, hyper, std::move(J), std::move(theta), rng);
  proposal.slot = static_cast<int>(rng.index(static_cast<std::size_t>(model.M()) + 1));
  return proposal;
}

RidgeComponent propose_change(const RidgeComponent& ridge, const Dataset& data, const Hyperparams& hyper,
                              Rng& rng) {
  const int a = ridge.a();
  if (ridge.kind == RidgeKind::kCategorical) {
    std::vector<int> pool = data.dummy_index;
    // Partial Fisher-Yates: a uniform a-subset of the dummy features.
    for (int k = 0; k < a; ++k) {
      const std::size_t pick = static_cast<std::size_t>(k) + rng.index(pool.size() - static_cast<std::size_t>(k));
      std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
    }
    std::vector<int> J(pool.begin(), pool.begin() + a);
    std::sort(J.begin(), J.end());
    Eigen::VectorXd theta = spline_direction(sample_uniform_subsphere(a, rng), J, data.p());
    return make_component(data.inputs(), std::move(J), std::move(theta), 0.0, hyper.K);
  }
  Eigen::VectorXd mu(a);
  for (int k = 0; k < a; ++k) mu[k] = ridge.theta[ridge.J[static_cast<std::size_t>(k)]];
  const Eigen::VectorXd active = sample_power_spherical(mu, hyper.kappa, rng);
  Eigen::VectorXd theta = spline_direction(active / active.norm(), ridge.J, data.p());
  return complete_ridge(data, hyper, ridge.J, std::move(theta), rng);
}

double birth_log_ratio(const SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                       const AdaptiveWeights& weights, const BirthProposal& proposal, Candidate* out) {
  return birth_log_ratio_impl(state, data, hyper, weights, proposal, out, false);
}

double death_log_ratio(const SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                       int victim, Candidate* out) {
  return death_log_ratio_impl(state, data, hyper, victim, out, false);
}

double change_log_ratio(const SamplerState& state, const Dataset& data, int index,
                        const RidgeComponent& replacement, Candidate* out) {
  return change_log_ratio_impl(state, data, index, replacement, out, false);
}

StepOutcome birth_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng) {
  return birth_step_impl(state, data, hyper, rng, false);
}

StepOutcome death_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng) {
  return death_step_impl(state, data, hyper, rng, false);
}

StepOutcome change_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng) {
  return change_step_impl(state, data, hyper, rng, false);
}

void gibbs_update(SamplerState& state, const Dataset& data, Rng& rng) {
  ModelState& m = state.model;
  const auto& k = simd::active_kernels();
  const auto n = static_cast<std::size_t>(data.n());
  m.beta = gibbs_beta(state.cache, m.sigma2, m.tau, rng);
  Eigen::VectorXd fitted(data.n());
  k.gemv(state.design.data(), n, static_cast<std::size_t>(state.design.cols()), m.beta.data(),
         fitted.data());
  const Eigen::VectorXd resid = data.y - fitted;
  m.sigma2 = gibbs_sigma2(k.dot(resid.data(), resid.data(), n), data.n(), rng);
  m.tau = gibbs_tau(k.dot(fitted.data(), fitted.data(), n), m.sigma2, m.ridge_columns(), data.n(), rng);
}

StepOutcome mcmc_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng) {
  return mcmc_step_impl(state, data, hyper, rng, false);
}

PosteriorChain run_chain(const Dataset& data, const Hyperparams& hyper_in) {
  const Hyperparams hyper = resolve(hyper_in, data.n(), data.p_real(), data.p_dummy());
  PosteriorChain chain;
  chain.hyper = hyper;
  chain.standardization = data.standardization;
  const auto iters = static_cast<std::size_t>(hyper.n_mcmc);
  chain.sigma_trace.reserve(iters);
  chain.M_trace.reserve(iters);
  chain.tau_trace.reserve(iters);
  chain.states.reserve(static_cast<std::size_t>(hyper.n_mcmc - hyper.n_burn));

  Rng rng(hyper.seed);
  SamplerState state = initial_state(data);
  for (int s = 1; s <= hyper.n_mcmc; ++s) {
    mcmc_step(state, data, hyper, rng);
    chain.sigma_trace.push_back(std::sqrt(state.model.sigma2));
    chain.M_trace.push_back(state.model.M());
    chain.tau_trace.push_back(state.model.tau);
    if (s > hyper.n_burn) chain.states.push_back(state.model);
  }
  return chain;
}

namespace testing {

StepOutcome mcmc_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng,
                      const StepOptions& options) {
  return mcmc_step_impl(state, data, hyper, rng, options.unit_likelihood);
}

}  // namespace testing
}  // namespace bppr
