#pragma once

#include <cstdint>

#include "bppr/dataset.hpp"
#include "bppr/hyperparams.hpp"
#include "bppr/rng.hpp"
#include "bppr/sampler.hpp"

namespace fixture {

// 60 rows: two real inputs and a three-level categorical (two dummies), p = 4.
bppr::Dataset synthetic_60x4(std::uint64_t seed);

// Hyperparameters resolved against `data`.
bppr::Hyperparams resolved(const bppr::Dataset& data, double lambda = 10.0);

// A valid state with 0..max_M ridges of random size, direction and t0, and
// random tau and sigma2. Retries until the design is well conditioned.
bppr::SamplerState random_state(const bppr::Dataset& data, const bppr::Hyperparams& h, bppr::Rng& rng,
                                int max_M = 3);

// One random ridge drawn from the prior (a uniform, J uniform, theta uniform, t0 uniform).
bppr::RidgeComponent random_ridge(const bppr::Dataset& data, const bppr::Hyperparams& h, bppr::Rng& rng);

}  // namespace fixture
