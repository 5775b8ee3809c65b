#include "bppr/serialization.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "bppr/error.hpp"

namespace bppr {
namespace {

using nlohmann::json;

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a.at(i).get<double>();
  return v;
}

json to_json(const Hyperparams& h) {
  return json{{"lambda", h.lambda}, {"K", h.K},           {"A", h.A()},
              {"p0", h.p0},         {"q", h.q()},         {"omega0", h.omega0},
              {"upsilon0", h.upsilon0}, {"kappa", h.kappa}, {"n_mcmc", h.n_mcmc},
              {"n_burn", h.n_burn}, {"seed", h.seed}};
}

Hyperparams hyper_from(const json& j) {
  Hyperparams h;
  h.lambda = j.at("lambda").get<double>();
  h.K = j.at("K").get<int>();
  h.max_active = j.at("A").get<int>();
  h.p0 = j.at("p0").get<double>();
  h.knot_quantile = j.at("q").get<double>();
  h.omega0 = j.at("omega0").get<double>();
  h.upsilon0 = j.at("upsilon0").get<double>();
  h.kappa = j.at("kappa").get<double>();
  h.n_mcmc = j.at("n_mcmc").get<int>();
  h.n_burn = j.at("n_burn").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

json to_json(const Standardization& st) {
  json inputs = json::array();
  for (const auto& in : st.inputs) {
    inputs.push_back({{"name", in.name},
                      {"kind", in.kind == ColumnKind::kCategorical ? "categorical" : "real"},
                      {"levels", in.levels}});
  }
  json features = json::array();
  for (const auto& f : st.features) {
    features.push_back({{"name", f.name},
                        {"source", f.source},
                        {"raw_dummy", f.raw_dummy},
                        {"level", f.level},
                        {"mean", f.mean},
                        {"sd", f.sd}});
  }
  return json{{"inputs", inputs}, {"features", features}, {"responses", st.responses}};
}

Standardization standardization_from(const json& j) {
  Standardization st;
  for (const auto& in : j.at("inputs")) {
    InputColumn c;
    c.name = in.at("name").get<std::string>();
    const auto kind = in.at("kind").get<std::string>();
    if (kind != "real" && kind != "categorical") throw std::invalid_argument("unknown input kind '" + kind + "'");
    c.kind = kind == "categorical" ? ColumnKind::kCategorical : ColumnKind::kReal;
    c.levels = in.at("levels").get<std::vector<std::string>>();
    st.inputs.push_back(std::move(c));
  }
  for (const auto& f : j.at("features")) {
    FeatureColumn c;
    c.name = f.at("name").get<std::string>();
    c.source = f.at("source").get<int>();
    c.raw_dummy = f.at("raw_dummy").get<int>();
    c.level = f.at("level").get<std::string>();
    c.mean = f.at("mean").get<double>();
    c.sd = f.at("sd").get<double>();
    if (c.source < 0 || c.source >= static_cast<int>(st.inputs.size())) {
      throw std::invalid_argument("feature source out of range");
    }
    st.features.push_back(std::move(c));
  }
  st.responses = j.at("responses").get<std::vector<std::string>>();
  return st;
}

json to_json(const RidgeComponent& r) {
  return json{{"kind", r.kind == RidgeKind::kCategorical ? "categorical" : "spline"},
              {"J", r.J},
              {"theta", to_json(r.theta)},
              {"t0", r.t0},
              {"knots", r.knots}};
}

RidgeComponent component_from(const json& j, std::size_t p) {
  RidgeComponent r;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "spline" && kind != "categorical") throw std::invalid_argument("unknown ridge kind '" + kind + "'");
  r.kind = kind == "categorical" ? RidgeKind::kCategorical : RidgeKind::kSpline;
  r.J = j.at("J").get<std::vector<int>>();
  r.theta = vector_from(j.at("theta"));
  r.t0 = j.at("t0").get<double>();
  r.knots = j.at("knots").get<std::vector<double>>();
  if (static_cast<std::size_t>(r.theta.size()) != p) throw std::invalid_argument("theta length mismatch");
  for (int idx : r.J) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= p) throw std::invalid_argument("feature index out of range");
  }
  if (r.J.empty()) throw std::invalid_argument("empty active set");
  if (r.kind == RidgeKind::kSpline && r.knots.size() < 2) throw std::invalid_argument("spline ridge without knots");
  return r;
}

json to_json(const ModelState& s) {
  json comps = json::array();
  for (const auto& r : s.components) comps.push_back(to_json(r));
  return json{{"sigma2", s.sigma2}, {"tau", s.tau}, {"beta", to_json(s.beta)}, {"components", comps}};
}

ModelState state_from(const json& j, std::size_t p) {
  ModelState s;
  s.sigma2 = j.at("sigma2").get<double>();
  s.tau = j.at("tau").get<double>();
  s.beta = vector_from(j.at("beta"));
  for (const auto& c : j.at("components")) s.components.push_back(component_from(c, p));
  if (s.beta.size() != 1 + s.ridge_columns()) throw std::invalid_argument("beta length mismatch");
  return s;
}

json chain_body(const PosteriorChain& c) {
  json states = json::array();
  for (const auto& s : c.states) states.push_back(to_json(s));
  return json{{"states", states},
              {"traces", {{"sigma", c.sigma_trace}, {"M", c.M_trace}, {"tau", c.tau_trace}}}};
}

void fill_chain_body(const json& j, PosteriorChain& c) {
  const std::size_t p = c.standardization.features.size();
  for (const auto& s : j.at("states")) c.states.push_back(state_from(s, p));
  const json& t = j.at("traces");
  c.sigma_trace = t.at("sigma").get<std::vector<double>>();
  c.M_trace = t.at("M").get<std::vector<int>>();
  c.tau_trace = t.at("tau").get<std::vector<double>>();
  if (c.states.empty()) throw std::invalid_argument("chain has no states");
  if (c.M_trace.size() != c.sigma_trace.size() || c.tau_trace.size() != c.sigma_trace.size()) {
    throw std::invalid_argument("trace lengths differ");
  }
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
}

template <class F>
auto with_schema_errors(std::string_view text, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    // Structurally valid JSON that violates the schema: report the end of
    // the document as the offset.
    throw ParseError(text.size(), std::string("schema violation: ") + e.what());
  }
}

void check_header(const json& doc, const std::string& expected_kind) {
  if (doc.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("unsupported schema_version");
  }
  if (doc.at("kind").get<std::string>() != expected_kind) {
    throw std::invalid_argument("expected a " + expected_kind + " model");
  }
}

}  // namespace

std::string serialize_chain(const PosteriorChain& chain) {
  if (chain.states.empty()) throw InputError("cannot serialize an empty chain");
  json doc = chain_body(chain);
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "univariate";
  doc["hyperparams"] = to_json(chain.hyper);
  doc["standardization"] = to_json(chain.standardization);
  return doc.dump() + "\n";
}

PosteriorChain deserialize_chain(std::string_view text) {
  const json doc = parse_document(text);
  return with_schema_errors(text, [&] {
    check_header(doc, "univariate");
    PosteriorChain c;
    c.hyper = hyper_from(doc.at("hyperparams"));
    c.standardization = standardization_from(doc.at("standardization"));
    fill_chain_body(doc, c);
    return c;
  });
}

std::string serialize_multivariate(const MultivariateFit& fit) {
  if (fit.chains.empty()) throw InputError("cannot serialize an empty multivariate fit");
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "multivariate";
  doc["hyperparams"] = to_json(fit.chains.front().hyper);
  doc["standardization"] = to_json(fit.chains.front().standardization);
  json H = json::array();
  for (Eigen::Index r = 0; r < fit.basis.H.rows(); ++r) H.push_back(to_json(Eigen::VectorXd(fit.basis.H.row(r).transpose())));
  doc["basis"] = {{"H", H},
                  {"y_mean", to_json(fit.basis.y_mean)},
                  {"D_minus", fit.basis.D_minus},
                  {"explained_variance", to_json(fit.basis.explained_variance)}};
  json chains = json::array();
  for (const auto& c : fit.chains) {
    if (c.states.empty()) throw InputError("cannot serialize an empty chain");
    json body = chain_body(c);
    body["seed"] = c.hyper.seed;
    chains.push_back(std::move(body));
  }
  doc["chains"] = std::move(chains);
  return doc.dump() + "\n";
}

MultivariateFit deserialize_multivariate(std::string_view text) {
  const json doc = parse_document(text);
  return with_schema_errors(text, [&] {
    check_header(doc, "multivariate");
    MultivariateFit fit;
    const Hyperparams hyper = hyper_from(doc.at("hyperparams"));
    const Standardization st = standardization_from(doc.at("standardization"));
    const json& b = doc.at("basis");
    fit.basis.D_minus = b.at("D_minus").get<int>();
    fit.basis.y_mean = vector_from(b.at("y_mean"));
    fit.basis.explained_variance = vector_from(b.at("explained_variance"));
    const json& H = b.at("H");
    fit.basis.H.resize(static_cast<Eigen::Index>(H.size()), fit.basis.D_minus);
    for (std::size_t r = 0; r < H.size(); ++r) {
      const Eigen::VectorXd row = vector_from(H.at(r));
      if (row.size() != fit.basis.D_minus) throw std::invalid_argument("basis row length mismatch");
      fit.basis.H.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    if (fit.basis.y_mean.size() != fit.basis.H.rows()) throw std::invalid_argument("y_mean length mismatch");
    for (const auto& cj : doc.at("chains")) {
      PosteriorChain c;
      c.hyper = hyper;
      c.hyper.seed = cj.at("seed").get<std::uint64_t>();
      c.standardization = st;
      fill_chain_body(cj, c);
      fit.chains.push_back(std::move(c));
    }
    if (static_cast<int>(fit.chains.size()) != fit.basis.D_minus) {
      throw std::invalid_argument("chain count does not match D_minus");
    }
    return fit;
  });
}

std::string model_kind(std::string_view text) {
  const json doc = parse_document(text);
  return with_schema_errors(text, [&] { return doc.at("kind").get<std::string>(); });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace bppr
