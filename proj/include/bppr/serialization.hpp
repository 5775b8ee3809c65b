#pragma once

#include <string>
#include <string_view>

#include "bppr/model.hpp"
#include "bppr/multivariate.hpp"

namespace bppr {

// Model files are JSON documents:
//
//   {
//     "schema_version": 1,
//     "kind": "univariate" | "multivariate",
//     "hyperparams": {lambda, K, A, p0, q, omega0, upsilon0, kappa, n_mcmc, n_burn, seed},
//     "standardization": {inputs[], features[], responses[]},
//     "states": [{sigma2, tau, beta[], components[{kind, J[], theta[], t0, knots[]}]}],
//     "traces": {sigma[], M[], tau[]}
//   }
//
// Multivariate files replace "states"/"traces" with
//   "basis": {H (row-major rows), y_mean[], D_minus, explained_variance[]},
//   "chains": [{seed, states[], traces{}}]
// and share one "hyperparams" block (the per-chain seed overrides "seed").
// Doubles are written in shortest round-trip form, so reading and writing
// back reproduces the document byte for byte.
inline constexpr int kSchemaVersion = 1;

std::string serialize_chain(const PosteriorChain& chain);
// Throws ParseError carrying the byte offset of the problem.
PosteriorChain deserialize_chain(std::string_view text);

std::string serialize_multivariate(const MultivariateFit& fit);
MultivariateFit deserialize_multivariate(std::string_view text);

// "univariate" or "multivariate"; throws ParseError.
std::string model_kind(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace bppr
