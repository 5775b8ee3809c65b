#include "bppr/multivariate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "bppr/error.hpp"
#include "bppr/rng.hpp"
#include "bppr/sampler.hpp"

namespace bppr {

ResponseBasis fit_response_basis(const Eigen::MatrixXd& Y, const BasisConfig& config) {
  const Eigen::Index n = Y.rows();
  const Eigen::Index D = Y.cols();
  if (n < 2) throw InputError("at least 2 response rows are required");
  ResponseBasis basis;
  basis.y_mean = Y.colwise().mean().transpose();
  const Eigen::MatrixXd centered = Y.rowwise() - basis.y_mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double total = sv.squaredNorm();
  if (!(total > 0.0) || sv[0] <= 1e-12 * std::max(1.0, basis.y_mean.norm())) {
    throw InputError("degenerate response: centered responses are all zero");
  }
  const Eigen::Index max_rank = std::min(n, D);
  int d_minus = 0;
  if (config.components) {
    d_minus = *config.components;
    if (d_minus < 1 || d_minus > max_rank) {
      throw InputError("requested " + std::to_string(d_minus) + " components but at most " +
                       std::to_string(max_rank) + " exist");
    }
  } else if (config.variance_threshold) {
    const double target = *config.variance_threshold;
    if (!(target > 0.0 && target <= 1.0)) throw InputError("variance threshold must lie in (0, 1]");
    double acc = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
      acc += sv[k] * sv[k];
      d_minus = static_cast<int>(k) + 1;
      if (acc / total >= target - 1e-12) break;
    }
  } else {
    throw InputError("basis size or variance threshold required");
  }
  basis.D_minus = d_minus;
  basis.H = svd.matrixV().leftCols(d_minus);
  basis.explained_variance = sv.head(d_minus).array().square() / static_cast<double>(n - 1);
  return basis;
}

Eigen::MatrixXd transform(const Eigen::MatrixXd& Y, const ResponseBasis& basis) {
  if (Y.cols() != basis.H.rows()) throw InputError("response dimension does not match basis");
  return (Y.rowwise() - basis.y_mean.transpose()) * basis.H;
}

Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& Eta, const ResponseBasis& basis) {
  if (Eta.cols() != basis.H.cols()) throw InputError("coefficient dimension does not match basis");
  return (Eta * basis.H.transpose()).rowwise() + basis.y_mean.transpose();
}

std::uint64_t component_seed(std::uint64_t master, int component) {
  return derive_seed(master, static_cast<std::uint64_t>(component));
}

MultivariateFit fit_multivariate(const Dataset& data, const Hyperparams& hyper,
                                 const BasisConfig& config, int threads) {
  MultivariateFit fit;
  fit.basis = fit_response_basis(data.Y, config);
  const Eigen::MatrixXd eta = transform(data.Y, fit.basis);
  const int D_minus = fit.basis.D_minus;
  fit.chains.resize(static_cast<std::size_t>(D_minus));

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, D_minus);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int d = next++; d < D_minus; d = next++) {
      try {
        Hyperparams h = hyper;
        h.seed = component_seed(hyper.seed, d);
        fit.chains[static_cast<std::size_t>(d)] = run_chain(with_response(data, eta.col(d)), h);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return fit;
}

Eigen::MatrixXd predict_mean(const MultivariateFit& fit, const EncodedInputs& inputs) {
  Eigen::MatrixXd eta(inputs.n(), fit.basis.D_minus);
  for (int d = 0; d < fit.basis.D_minus; ++d) {
    const PosteriorDraws draws = posterior_draws(fit.chains[static_cast<std::size_t>(d)], inputs);
    eta.col(d) = draws.f.colwise().mean().transpose();
  }
  return reconstruct(eta, fit.basis);
}

std::vector<Eigen::MatrixXd> component_draws(const MultivariateFit& fit, const EncodedInputs& inputs,
                                             bool predictive, std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> out;
  for (int k = 0; k < fit.basis.D_minus; ++k) {
    const PosteriorDraws draws = posterior_draws(fit.chains[static_cast<std::size_t>(k)], inputs);
    out.push_back(predictive ? predictive_draws(draws, derive_seed(seed, static_cast<std::uint64_t>(k)))
                             : draws.f);
    if (out.back().rows() != out.front().rows()) {
      throw InputError("component chains retain different draw counts");
    }
  }
  return out;
}

Eigen::MatrixXd combine_draws(const std::vector<Eigen::MatrixXd>& eta_draws,
                              const ResponseBasis& basis, int d) {
  if (d < 0 || d >= basis.H.rows()) throw InputError("output dimension out of range");
  if (eta_draws.empty()) throw InputError("no component draws");
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Constant(eta_draws[0].rows(), eta_draws[0].cols(), basis.y_mean[d]);
  for (std::size_t k = 0; k < eta_draws.size(); ++k) {
    out += basis.H(d, static_cast<Eigen::Index>(k)) * eta_draws[k];
  }
  return out;
}

}  // namespace bppr
