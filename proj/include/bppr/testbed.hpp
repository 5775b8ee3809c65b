#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "bppr/csv.hpp"
#include "bppr/dataset.hpp"

namespace bppr {

// 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5; further entries are inert.
double friedman(std::span<const double> x);

struct SimulatedData {
  Eigen::MatrixXd X;  // raw inputs, n x p
  Eigen::VectorXd y;  // noisy response
  Eigen::VectorXd f;  // noiseless mean
};

struct SimulatedSplit {
  SimulatedData train;
  SimulatedData test;
};

// A benchmark mean function on the unit hypercube. New scenarios plug in by
// implementing this interface.
class Scenario {
 public:
  virtual ~Scenario() = default;
  virtual std::string name() const = 0;
  // Smallest supported input dimension.
  virtual int min_inputs() const = 0;
  virtual double mean(std::span<const double> x) const = 0;
};

// "friedman" or "noise"; throws InputError otherwise.
std::unique_ptr<Scenario> make_scenario(const std::string& name);

// x ~ Unif([0,1]^p), y = f(x) + N(0, sigma^2). The test set uses an
// independent stream of the same seed.
SimulatedSplit simulate(const Scenario& scenario, int n, int p, double sigma, std::uint64_t seed,
                        int n_test = 2000);

// Header x1..xp, y, and f when `with_truth`.
RawTable to_table(const SimulatedData& data, bool with_truth);

// Functional-output Friedman: x1 is swept over a grid of D points in [0,1];
// inputs are (x2..x5) plus `n_inert` inert columns.
struct FunctionalData {
  Eigen::MatrixXd X;  // n x (4 + n_inert)
  Eigen::MatrixXd Y;  // noisy, n x D
  Eigen::MatrixXd F;  // noiseless, n x D
};

struct FunctionalSplit {
  FunctionalData train;
  FunctionalData test;
};

FunctionalSplit simulate_friedman_functional(int n, int n_test, int n_inert, int D, double sigma,
                                             std::uint64_t seed);

}  // namespace bppr
