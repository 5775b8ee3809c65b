#include "bppr/testbed.hpp"

#include <cmath>
#include <numbers>

#include "bppr/error.hpp"
#include "bppr/rng.hpp"

namespace bppr {

double friedman(std::span<const double> x) {
  if (x.size() < 5) throw InputError("the Friedman function needs at least 5 inputs");
  const double c = x[2] - 0.5;
  return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * c * c + 10.0 * x[3] + 5.0 * x[4];
}

namespace {

class FriedmanScenario final : public Scenario {
 public:
  std::string name() const override { return "friedman"; }
  int min_inputs() const override { return 5; }
  double mean(std::span<const double> x) const override { return friedman(x); }
};

class NoiseScenario final : public Scenario {
 public:
  std::string name() const override { return "noise"; }
  int min_inputs() const override { return 1; }
  double mean(std::span<const double>) const override { return 0.0; }
};

SimulatedData draw(const Scenario& scenario, int n, int p, double sigma, Rng& rng) {
  SimulatedData d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.f.resize(n);
  std::vector<double> row(static_cast<std::size_t>(p));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      row[static_cast<std::size_t>(j)] = rng.uniform();
      d.X(i, j) = row[static_cast<std::size_t>(j)];
    }
    d.f[i] = scenario.mean(row);
    d.y[i] = d.f[i] + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
  }
  return d;
}

}  // namespace

std::unique_ptr<Scenario> make_scenario(const std::string& name) {
  if (name == "friedman") return std::make_unique<FriedmanScenario>();
  if (name == "noise") return std::make_unique<NoiseScenario>();
  throw InputError("unknown scenario '" + name + "' (expected friedman or noise)");
}

SimulatedSplit simulate(const Scenario& scenario, int n, int p, double sigma, std::uint64_t seed,
                        int n_test) {
  if (p < scenario.min_inputs()) {
    throw InputError("scenario " + scenario.name() + " needs p >= " + std::to_string(scenario.min_inputs()));
  }
  if (n < 0 || n_test < 0) throw InputError("sample sizes must be nonnegative");
  if (sigma < 0.0) throw InputError("noise sd must be nonnegative");
  Rng train_rng(derive_seed(seed, 0));
  Rng test_rng(derive_seed(seed, 1));
  return {draw(scenario, n, p, sigma, train_rng), draw(scenario, n_test, p, sigma, test_rng)};
}

RawTable to_table(const SimulatedData& data, bool with_truth) {
  RawTable t;
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) t.header.push_back("x" + std::to_string(j + 1));
  t.header.push_back("y");
  if (with_truth) t.header.push_back("f");
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) row.push_back(format_double(data.X(i, j)));
    row.push_back(format_double(data.y[i]));
    if (with_truth) row.push_back(format_double(data.f[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

FunctionalData draw_functional(int n, int n_inert, int D, double sigma, Rng& rng) {
  FunctionalData d;
  const int p = 4 + n_inert;
  d.X.resize(n, p);
  d.Y.resize(n, D);
  d.F.resize(n, D);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.X(i, j) = rng.uniform();
    for (int k = 0; k < D; ++k) {
      const double grid = D > 1 ? static_cast<double>(k) / (D - 1) : 0.0;
      const double x[5] = {grid, d.X(i, 0), d.X(i, 1), d.X(i, 2), d.X(i, 3)};
      d.F(i, k) = friedman(x);
      d.Y(i, k) = d.F(i, k) + sigma * rng.normal();
    }
  }
  return d;
}

}  // namespace

FunctionalSplit simulate_friedman_functional(int n, int n_test, int n_inert, int D, double sigma,
                                             std::uint64_t seed) {
  if (D < 1 || n_inert < 0) throw InputError("invalid functional Friedman configuration");
  Rng train_rng(derive_seed(seed, 0));
  Rng test_rng(derive_seed(seed, 1));
  return {draw_functional(n, n_inert, D, sigma, train_rng), draw_functional(n_test, n_inert, D, sigma, test_rng)};
}

}  // namespace bppr
