#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bppr/dataset.hpp"
#include "bppr/model.hpp"

namespace bppr {

// N / (1 + 2 sum_t rho_t), with the autocorrelation sum truncated by Geyer's
// initial positive sequence. Capped at N. Throws on a constant trace or N < 10.
double effective_sample_size(std::span<const double> trace);

// Split R-hat over `n_splits` contiguous sub-chains (remainder dropped from
// the end).
double split_rhat(std::span<const double> trace, int n_splits = 5);

// Fraction of i with lower_i <= truth_i <= upper_i.
double coverage(std::span<const double> lower, std::span<const double> upper,
                std::span<const double> truth);

double rmse(std::span<const double> prediction, std::span<const double> truth);

struct AleCurve {
  std::vector<double> bin_center;  // raw feature scale
  std::vector<double> mean;        // posterior mean effect
  std::vector<double> lower;       // central credible band
  std::vector<double> upper;
  std::vector<int> bin_count;
  Eigen::MatrixXd draws;           // draws x bins, centered per draw
};

// One-way accumulated local effects of real feature `feature` over the rows
// of `data`, bins at empirical quantiles of the feature.
AleCurve ale_one_way(const std::vector<ModelState>& states, const Dataset& data, int feature,
                     int n_bins, double level = 0.95);

}  // namespace bppr
