#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bppr/csv.hpp"
#include "bppr/dataset.hpp"
#include "bppr/diagnostics.hpp"
#include "bppr/error.hpp"
#include "bppr/multivariate.hpp"
#include "bppr/predict.hpp"
#include "bppr/sampler.hpp"
#include "bppr/serialization.hpp"
#include "bppr/testbed.hpp"

namespace bppr::cli {
namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

void emit(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << '=' << value << '\n';
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  body(f);
  if (!f) throw InputError("cannot write '" + path + "'");
}

double safe_ess(const std::vector<double>& x) {
  try {
    return effective_sample_size(x);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double safe_rhat(const std::vector<double>& x) {
  try {
    return split_rhat(x);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Retained sigma draws: the tail of the trace matching the stored states.
std::vector<double> retained_sigma(const PosteriorChain& c) {
  const std::size_t s = std::min(c.states.size(), c.sigma_trace.size());
  return {c.sigma_trace.end() - static_cast<std::ptrdiff_t>(s), c.sigma_trace.end()};
}

void report_chain(std::ostream& out, const std::string& prefix, const PosteriorChain& c) {
  const std::vector<double> sig = retained_sigma(c);
  Eigen::Map<const Eigen::VectorXd> v(sig.data(), static_cast<Eigen::Index>(sig.size()));
  std::map<int, int> hist;
  for (const auto& st : c.states) ++hist[st.M()];
  int mode = 0, best = -1;
  std::string h;
  for (auto [m, k] : hist) {
    if (k > best) best = k, mode = m;
    if (!h.empty()) h += ';';
    h += std::to_string(m) + ':' + std::to_string(k);
  }
  emit(out, prefix + "retained", std::to_string(c.states.size()));
  if (!sig.empty()) {
    Eigen::MatrixXd col = v;
    emit(out, prefix + "sigma_mean", fmt(v.mean()));
    emit(out, prefix + "sigma_lower", fmt(column_quantiles(col, 0.025)(0)));
    emit(out, prefix + "sigma_upper", fmt(column_quantiles(col, 0.975)(0)));
  }
  emit(out, prefix + "M_histogram", h);
  emit(out, prefix + "M_mode", std::to_string(mode));
  emit(out, prefix + "sigma_ess", fmt(safe_ess(sig)));
  emit(out, prefix + "sigma_rhat", fmt(safe_rhat(sig)));
}

int resolve_threads(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BPPR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) throw InputError("BPPR_THREADS must be a nonnegative integer");
    return static_cast<int>(v);
  }
  return 0;
}

// Dataset view of new rows, for routines that need the training layout.
Dataset as_dataset(const Standardization& st, const EncodedInputs& enc) {
  Dataset d;
  d.X = enc.X;
  d.D_raw = enc.D_raw;
  d.standardization = st;
  for (std::size_t j = 0; j < st.features.size(); ++j)
    if (st.features[j].raw_dummy >= 0) d.dummy_index.push_back(static_cast<int>(j));
  d.y = Eigen::VectorXd::Zero(enc.n());
  d.Y = d.y;
  return d;
}

IntervalKind parse_kind(const std::string& k) {
  if (k == "mean") return IntervalKind::kMean;
  if (k == "credible") return IntervalKind::kCredible;
  if (k == "predictive") return IntervalKind::kPredictive;
  throw InputError("--kind must be mean, credible or predictive");
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("--level must lie in (0, 1)");
}

// ---- fit

struct FitArgs {
  std::string data, response, response_cols, categorical, exclude, out;
  int iters = 10000, burn = 9000;
  std::uint64_t seed = 0;
  Hyperparams hyper;
  std::optional<int> A;
  std::optional<double> q;
  bool multivariate = false;
  std::optional<int> components;
  std::optional<double> var_threshold;
  std::optional<int> threads;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.iters < 1) throw InputError("--iters must be at least 1");
  if (a.burn < 0 || a.burn >= a.iters) throw InputError("--burn must lie in [0, iters)");

  RawTable table = read_csv_file(a.data);
  ColumnRoles roles;
  if (a.multivariate) {
    roles.responses = split_list(a.response_cols);
    if (roles.responses.empty()) throw InputError("--multivariate needs --response-cols");
  } else {
    if (a.response.empty()) throw InputError("--response is required");
    roles.responses = {a.response};
  }
  roles.categorical = split_list(a.categorical);
  roles.exclude = split_list(a.exclude);
  const Dataset data = prepare_dataset(table, roles);

  Hyperparams h = a.hyper;
  h.n_mcmc = a.iters;
  h.n_burn = a.burn;
  h.seed = a.seed;
  h.max_active = a.A;
  h.knot_quantile = a.q;

  emit(out, "command", "fit");
  emit(out, "n", std::to_string(data.n()));
  emit(out, "p", std::to_string(data.p()));
  emit(out, "iters", std::to_string(a.iters));
  emit(out, "burn", std::to_string(a.burn));

  if (!a.multivariate) {
    const PosteriorChain chain = run_chain(data, h);
    write_file(a.out, serialize_chain(chain));
    emit(out, "kind", "univariate");
    report_chain(out, "", chain);
  } else {
    BasisConfig cfg;
    cfg.components = a.components;
    cfg.variance_threshold = a.var_threshold;
    if (!cfg.components && !cfg.variance_threshold) throw InputError("--multivariate needs --components or --var-threshold");
    const MultivariateFit fit = fit_multivariate(data, h, cfg, resolve_threads(a.threads));
    write_file(a.out, serialize_multivariate(fit));
    emit(out, "kind", "multivariate");
    emit(out, "components", std::to_string(fit.basis.D_minus));
    for (std::size_t k = 0; k < fit.chains.size(); ++k)
      report_chain(out, "component" + std::to_string(k) + ".", fit.chains[k]);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(out, "wall_seconds", fmt(secs));
  return 0;
}

// ---- predict

struct PredictArgs {
  std::string model, data, kind = "predictive", out;
  double level = 0.95;
  std::uint64_t seed = 0;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  check_level(a.level);
  const IntervalKind kind = parse_kind(a.kind);
  const std::string text = read_file(a.model);
  const RawTable table = read_csv_file(a.data);
  RawTable result;

  if (model_kind(text) == "univariate") {
    const PosteriorChain chain = deserialize_chain(text);
    const EncodedInputs enc = encode_inputs(chain.standardization, table);
    const PredictionSummary s = summarize(posterior_draws(chain, enc), kind, a.level, a.seed);
    result.header = {"row", "mean"};
    if (kind != IntervalKind::kMean) result.header.insert(result.header.end(), {"lower", "upper"});
    for (Eigen::Index i = 0; i < s.mean.size(); ++i) {
      std::vector<std::string> row{std::to_string(i), format_double(s.mean(i))};
      if (kind != IntervalKind::kMean) {
        row.push_back(format_double(s.lower(i)));
        row.push_back(format_double(s.upper(i)));
      }
      result.rows.push_back(std::move(row));
    }
  } else {
    const MultivariateFit fit = deserialize_multivariate(text);
    const Standardization& st = fit.chains.front().standardization;
    const EncodedInputs enc = encode_inputs(st, table);
    const auto eta = component_draws(fit, enc, kind == IntervalKind::kPredictive, a.seed);
    result.header = {"row", "output", "mean"};
    if (kind != IntervalKind::kMean) result.header.insert(result.header.end(), {"lower", "upper"});
    const int D = static_cast<int>(fit.basis.y_mean.size());
    for (int d = 0; d < D; ++d) {
      PosteriorDraws pd;
      pd.f = combine_draws(eta, fit.basis, d);
      pd.sigma = Eigen::VectorXd::Zero(pd.f.rows());
      const PredictionSummary s =
          summarize(pd, kind == IntervalKind::kMean ? kind : IntervalKind::kCredible, a.level);
      const std::string name = d < static_cast<int>(st.responses.size()) ? st.responses[d] : std::to_string(d);
      for (Eigen::Index i = 0; i < s.mean.size(); ++i) {
        std::vector<std::string> row{std::to_string(i), name, format_double(s.mean(i))};
        if (kind != IntervalKind::kMean) {
          row.push_back(format_double(s.lower(i)));
          row.push_back(format_double(s.upper(i)));
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  with_output(a.out, out, [&](std::ostream& o) { write_csv(o, result); });
  return 0;
}

// ---- diagnose

struct DiagnoseArgs {
  std::string model, trace_out;
};

void append_trace(RawTable& t, const PosteriorChain& c, const std::string& component) {
  for (std::size_t s = 0; s < c.sigma_trace.size(); ++s) {
    std::vector<std::string> row;
    if (!component.empty()) row.push_back(component);
    row.push_back(std::to_string(s + 1));
    row.push_back(format_double(c.sigma_trace[s]));
    row.push_back(std::to_string(c.M_trace[s]));
    row.push_back(format_double(c.tau_trace[s]));
    t.rows.push_back(std::move(row));
  }
}

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  const std::string text = read_file(a.model);
  RawTable trace;
  emit(out, "command", "diagnose");
  if (model_kind(text) == "univariate") {
    const PosteriorChain chain = deserialize_chain(text);
    emit(out, "kind", "univariate");
    report_chain(out, "", chain);
    trace.header = {"iteration", "sigma", "M", "tau"};
    append_trace(trace, chain, "");
  } else {
    const MultivariateFit fit = deserialize_multivariate(text);
    emit(out, "kind", "multivariate");
    emit(out, "components", std::to_string(fit.basis.D_minus));
    trace.header = {"component", "iteration", "sigma", "M", "tau"};
    for (std::size_t k = 0; k < fit.chains.size(); ++k) {
      report_chain(out, "component" + std::to_string(k) + ".", fit.chains[k]);
      append_trace(trace, fit.chains[k], std::to_string(k));
    }
  }
  if (!a.trace_out.empty()) write_csv_file(a.trace_out, trace);
  return 0;
}

// ---- ale

struct AleArgs {
  std::string model, data, feature, out;
  int bins = 10;
  int component = 0;
  double level = 0.95;
};

int cmd_ale(const AleArgs& a, std::ostream& out) {
  check_level(a.level);
  const std::string text = read_file(a.model);
  const RawTable table = read_csv_file(a.data);
  PosteriorChain chain;
  if (model_kind(text) == "univariate") {
    chain = deserialize_chain(text);
  } else {
    MultivariateFit fit = deserialize_multivariate(text);
    if (a.component < 0 || a.component >= static_cast<int>(fit.chains.size()))
      throw InputError("--component out of range");
    chain = std::move(fit.chains[a.component]);
  }
  const Standardization& st = chain.standardization;
  int feature = -1;
  for (std::size_t j = 0; j < st.features.size(); ++j)
    if (st.features[j].name == a.feature) feature = static_cast<int>(j);
  if (feature < 0) throw SchemaError("model has no feature '" + a.feature + "'");
  const Dataset data = as_dataset(st, encode_inputs(st, table));
  const AleCurve curve = ale_one_way(chain.states, data, feature, a.bins, a.level);

  RawTable result;
  result.header = {"bin_center", "mean", "lower", "upper", "count"};
  for (std::size_t k = 0; k < curve.bin_center.size(); ++k)
    result.rows.push_back({format_double(curve.bin_center[k]), format_double(curve.mean[k]),
                           format_double(curve.lower[k]), format_double(curve.upper[k]),
                           std::to_string(curve.bin_count[k])});
  with_output(a.out, out, [&](std::ostream& o) { write_csv(o, result); });
  return 0;
}

// ---- simulate

struct SimulateArgs {
  std::string scenario, out, test_out;
  int n = 300, p = 6, n_test = 2000;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto scenario = make_scenario(a.scenario);
  if (a.n < 2) throw InputError("--n must be at least 2");
  if (a.n_test < 0) throw InputError("--n-test must be nonnegative");
  if (!(a.sigma >= 0.0)) throw InputError("--sigma must be nonnegative");
  const SimulatedSplit split = simulate(*scenario, a.n, a.p, a.sigma, a.seed, a.n_test);
  with_output(a.out, out, [&](std::ostream& o) { write_csv(o, to_table(split.train, false)); });
  if (!a.test_out.empty()) write_csv_file(a.test_out, to_table(split.test, true));
  return 0;
}

// ---- score

struct ScoreArgs {
  std::string pred, truth, truth_col, pred_col = "mean";
};

std::vector<double> numeric_column(const RawTable& t, const std::string& name, const std::string& file) {
  const int c = t.require_column(name);
  std::vector<double> v;
  v.reserve(t.num_rows());
  for (const auto& row : t.rows) v.push_back(parse_double(row[c], file + " column '" + name + "'"));
  return v;
}

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const RawTable pred = read_csv_file(a.pred);
  const RawTable truth = read_csv_file(a.truth);
  std::string tcol = a.truth_col;
  if (tcol.empty()) tcol = truth.column_index("y") >= 0 ? "y" : "f";
  const auto mean = numeric_column(pred, a.pred_col, "predictions");
  const auto t = numeric_column(truth, tcol, "truth");
  if (mean.size() != t.size())
    throw SchemaError("predictions have " + std::to_string(mean.size()) + " rows, truth has " +
                      std::to_string(t.size()));
  emit(out, "command", "score");
  emit(out, "rows", std::to_string(t.size()));
  emit(out, "rmse", fmt(rmse(mean, t)));
  if (pred.column_index("lower") >= 0 && pred.column_index("upper") >= 0) {
    const auto lo = numeric_column(pred, "lower", "predictions");
    const auto hi = numeric_column(pred, "upper", "predictions");
    emit(out, "coverage", fmt(coverage(lo, hi, t)));
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian projection pursuit regression", "bppr"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit a model and write it to a JSON file");
  f->add_option("--data", fit.data, "training CSV")->required();
  f->add_option("--response", fit.response, "response column");
  f->add_option("--categorical", fit.categorical, "comma-separated categorical columns");
  f->add_option("--exclude", fit.exclude, "comma-separated columns to ignore");
  f->add_option("--out", fit.out, "model file")->required();
  f->add_option("--iters", fit.iters, "MCMC iterations")->capture_default_str();
  f->add_option("--burn", fit.burn, "burn-in iterations")->capture_default_str();
  f->add_option("--seed", fit.seed, "random seed")->capture_default_str();
  f->add_option("--lambda", fit.hyper.lambda, "Poisson mean of the ridge count")->capture_default_str();
  f->add_option("--K", fit.hyper.K, "spline basis functions per ridge")->capture_default_str();
  f->add_option("--A", fit.A, "maximum active features per ridge");
  f->add_option("--p0", fit.hyper.p0, "probability of a global ridge")->capture_default_str();
  f->add_option("--q", fit.q, "upper knot quantile");
  f->add_option("--omega0", fit.hyper.omega0, "size-weight prior mass")->capture_default_str();
  f->add_option("--upsilon0", fit.hyper.upsilon0, "feature-weight prior mass")->capture_default_str();
  f->add_option("--kappa", fit.hyper.kappa, "change-move concentration")->capture_default_str();
  f->add_flag("--multivariate", fit.multivariate, "fit a functional response");
  f->add_option("--response-cols", fit.response_cols, "comma-separated response columns");
  f->add_option("--components", fit.components, "number of basis components");
  f->add_option("--var-threshold", fit.var_threshold, "explained-variance fraction");
  f->add_option("--threads", fit.threads, "worker threads (default BPPR_THREADS or all cores)");

  PredictArgs pr;
  auto* p = app.add_subcommand("predict", "predict at new inputs");
  p->add_option("--model", pr.model, "model file")->required();
  p->add_option("--data", pr.data, "input CSV")->required();
  p->add_option("--level", pr.level, "interval level")->capture_default_str();
  p->add_option("--kind", pr.kind, "mean, credible or predictive")->capture_default_str();
  p->add_option("--out", pr.out, "output CSV (default stdout)");
  p->add_option("--seed", pr.seed, "seed for predictive noise")->capture_default_str();

  DiagnoseArgs dg;
  auto* d = app.add_subcommand("diagnose", "convergence summary of a fitted model");
  d->add_option("--model", dg.model, "model file")->required();
  d->add_option("--trace-out", dg.trace_out, "CSV of per-iteration traces");

  AleArgs al;
  auto* e = app.add_subcommand("ale", "accumulated local effects of one feature");
  e->add_option("--model", al.model, "model file")->required();
  e->add_option("--data", al.data, "input CSV")->required();
  e->add_option("--feature", al.feature, "feature name")->required();
  e->add_option("--bins", al.bins, "number of bins")->capture_default_str();
  e->add_option("--level", al.level, "band level")->capture_default_str();
  e->add_option("--component", al.component, "basis component (functional models)")->capture_default_str();
  e->add_option("--out", al.out, "output CSV (default stdout)");

  SimulateArgs sm;
  auto* s = app.add_subcommand("simulate", "generate a benchmark data set");
  s->add_option("scenario", sm.scenario, "friedman or noise")->required();
  s->add_option("--n", sm.n, "training rows")->capture_default_str();
  s->add_option("--p", sm.p, "inputs")->capture_default_str();
  s->add_option("--sigma", sm.sigma, "noise sd")->capture_default_str();
  s->add_option("--seed", sm.seed, "random seed")->capture_default_str();
  s->add_option("--n-test", sm.n_test, "test rows")->capture_default_str();
  s->add_option("--out", sm.out, "training CSV (default stdout)");
  s->add_option("--test-out", sm.test_out, "test CSV with the noiseless mean f");

  ScoreArgs sc;
  auto* r = app.add_subcommand("score", "RMSE and interval coverage of predictions");
  r->add_option("--pred", sc.pred, "predictions CSV")->required();
  r->add_option("--truth", sc.truth, "truth CSV")->required();
  r->add_option("--truth-col", sc.truth_col, "truth column (default y, else f)");
  r->add_option("--pred-col", sc.pred_col, "prediction column")->capture_default_str();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    err << "error: code=2 message=" << one_line(ex.what()) << '\n';
    return 2;
  }

  try {
    if (*f) return cmd_fit(fit, out);
    if (*p) return cmd_predict(pr, out);
    if (*d) return cmd_diagnose(dg, out);
    if (*e) return cmd_ale(al, out);
    if (*s) return cmd_simulate(sm, out);
    if (*r) return cmd_score(sc, out);
  } catch (const Error& ex) {
    err << "error: code=" << ex.exit_code() << " message=" << one_line(ex.what()) << '\n';
    return ex.exit_code();
  } catch (const std::exception& ex) {
    err << "error: code=1 message=" << one_line(ex.what()) << '\n';
    return 1;
  }
  return 1;
}

}  // namespace bppr::cli
