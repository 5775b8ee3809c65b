#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bppr/conjugate.hpp"
#include "bppr/dataset.hpp"
#include "bppr/hyperparams.hpp"
#include "bppr/model.hpp"
#include "bppr/proposals.hpp"
#include "bppr/rng.hpp"

namespace bppr {

// Working state of one chain: the parameters plus the design and factored
// normal equations they imply on the training inputs.
struct SamplerState {
  ModelState model;
  Eigen::MatrixXd design;  // [1_n B_1 ... B_M]
  GramCache cache;
};

enum class MoveKind { kBirth, kDeath, kChange, kSkipped };

struct StepOutcome {
  MoveKind kind = MoveKind::kSkipped;
  bool accepted = false;
  double log_alpha = 0.0;
  std::optional<int> m_star;
};

// New ridge and the position it would occupy (0..M).
struct BirthProposal {
  RidgeComponent ridge;
  int slot = 0;
};

// Design and factorization of a proposed state.
struct Candidate {
  Eigen::MatrixXd design;
  GramCache cache;
};

// M = 0, tau = 1, sigma2 = sample variance of y, beta = (mean y).
SamplerState initial_state(const Dataset& data);

// Builds the design and cache for an arbitrary parameter set. Throws on a
// degenerate or singular design.
SamplerState make_state(const Dataset& data, ModelState model);

// Draws a birth proposal from the adaptive proposal distribution. Throws
// DegenerateProjection / DegenerateKnots.
BirthProposal propose_birth(const ModelState& model, const Dataset& data, const Hyperparams& hyper,
                            const AdaptiveWeights& weights, Rng& rng);

// Draws a replacement for `ridge`: power spherical direction and a fresh t0
// for spline ridges; a uniformly redrawn dummy set of equal size for
// categorical ridges.
RidgeComponent propose_change(const RidgeComponent& ridge, const Dataset& data,
                              const Hyperparams& hyper, Rng& rng);

// Log Metropolis-Hastings ratios. `weights` for a birth are those of the
// current state; a death recomputes them with the victim removed. The
// candidate design and cache are written to `out` when non-null.
double birth_log_ratio(const SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                       const AdaptiveWeights& weights, const BirthProposal& proposal,
                       Candidate* out = nullptr);
double death_log_ratio(const SamplerState& state, const Dataset& data, const Hyperparams& hyper,
                       int victim, Candidate* out = nullptr);
double change_log_ratio(const SamplerState& state, const Dataset& data, int index,
                        const RidgeComponent& replacement, Candidate* out = nullptr);

StepOutcome birth_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng);
StepOutcome death_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng);
StepOutcome change_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng);

// Gibbs draws of beta, then sigma2, then tau on the current design.
void gibbs_update(SamplerState& state, const Dataset& data, Rng& rng);

// One iteration: uniform move type, the move, then the Gibbs block.
StepOutcome mcmc_step(SamplerState& state, const Dataset& data, const Hyperparams& hyper, Rng& rng);

// Full chain from M = 0. `hyper` is resolved against the data first.
PosteriorChain run_chain(const Dataset& data, const Hyperparams& hyper);

// Column offset of ridge `m` inside the design (the intercept is column 0).
int column_offset(const ModelState& model, int m);

}  // namespace bppr
