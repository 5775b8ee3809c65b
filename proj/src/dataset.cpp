#include "bppr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bppr/error.hpp"

namespace bppr {

double sample_mean(const Eigen::Ref<const Eigen::VectorXd>& v) { return v.mean(); }

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() < 2) return 0.0;
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size() - 1));
}

namespace {

bool is_missing(const std::string& s) {
  std::string t;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::tolower(c)));
  }
  return t.empty() || t == "na" || t == "nan" || t == "null";
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Standardizes columns of X in place, filling feature means/sds.
void standardize(Eigen::MatrixXd& X, std::vector<FeatureColumn>& features) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = sample_mean(X.col(j));
    const double sd = sample_sd(X.col(j));
    if (!(sd > 0.0) || sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      throw InputError("constant column '" + features[j].name + "'");
    }
    X.col(j) = (X.col(j).array() - mean) / sd;
    features[j].mean = mean;
    features[j].sd = sd;
  }
}

}  // namespace

Dataset prepare_dataset(const RawTable& table, const ColumnRoles& roles) {
  const std::size_t n = table.num_rows();
  if (n < 2) throw InputError("at least 2 data rows are required");
  for (const auto* names : {&roles.responses, &roles.categorical, &roles.exclude})
    for (const auto& c : *names)
      if (table.column_index(c) < 0) throw InputError("missing column '" + c + "'");
  if (roles.responses.empty()) throw InputError("no response column given");

  Dataset data;
  Standardization& st = data.standardization;
  st.responses = roles.responses;

  // Responses.
  data.Y.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(roles.responses.size()));
  for (std::size_t r = 0; r < roles.responses.size(); ++r) {
    const int col = table.require_column(roles.responses[r]);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& cell = table.rows[i][col];
      if (is_missing(cell)) throw InputError("missing value in column '" + roles.responses[r] + "'");
      data.Y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
          parse_double(cell, "response column '" + roles.responses[r] + "'");
    }
  }
  data.y = data.Y.col(0);

  // Inputs, in table order; categoricals expand in place.
  std::vector<std::vector<double>> feature_values;
  std::vector<std::vector<double>> dummy_values;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    if (contains(roles.responses, name) || contains(roles.exclude, name)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_missing(table.rows[i][c])) throw InputError("missing value in column '" + name + "'");
    }
    InputColumn input;
    input.name = name;
    const int source = static_cast<int>(st.inputs.size());
    if (contains(roles.categorical, name)) {
      input.kind = ColumnKind::kCategorical;
      std::unordered_map<std::string, int> seen;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string& v = table.rows[i][c];
        if (seen.emplace(v, static_cast<int>(input.levels.size())).second) input.levels.push_back(v);
      }
      if (input.levels.size() < 2) {
        throw InputError("categorical column '" + name + "' has fewer than 2 levels");
      }
      for (std::size_t l = 0; l + 1 < input.levels.size(); ++l) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = table.rows[i][c] == input.levels[l] ? 1.0 : 0.0;
        FeatureColumn f;
        f.name = name + "=" + input.levels[l];
        f.source = source;
        f.raw_dummy = static_cast<int>(dummy_values.size());
        f.level = input.levels[l];
        data.dummy_index.push_back(static_cast<int>(feature_values.size()));
        st.features.push_back(f);
        dummy_values.push_back(col);
        feature_values.push_back(std::move(col));
      }
    } else {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) {
        col[i] = parse_double(table.rows[i][c], "column '" + name + "' (declare it categorical?)");
      }
      FeatureColumn f;
      f.name = name;
      f.source = source;
      st.features.push_back(f);
      feature_values.push_back(std::move(col));
    }
    st.inputs.push_back(std::move(input));
  }
  if (feature_values.empty()) throw InputError("no input columns");

  const auto rows = static_cast<Eigen::Index>(n);
  data.X.resize(rows, static_cast<Eigen::Index>(feature_values.size()));
  for (std::size_t j = 0; j < feature_values.size(); ++j) {
    data.X.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(feature_values[j].data(), rows);
  }
  data.D_raw.resize(rows, static_cast<Eigen::Index>(dummy_values.size()));
  for (std::size_t j = 0; j < dummy_values.size(); ++j) {
    data.D_raw.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(dummy_values[j].data(), rows);
  }
  standardize(data.X, st.features);
  return data;
}

Dataset prepare_dataset(const Eigen::MatrixXd& X_raw, const Eigen::MatrixXd& Y,
                        const std::vector<std::string>& feature_names,
                        const std::vector<std::string>& response_names) {
  if (X_raw.rows() < 2) throw InputError("at least 2 data rows are required");
  if (Y.rows() != X_raw.rows() || Y.cols() < 1) throw InputError("response rows do not match inputs");
  Dataset data;
  Standardization& st = data.standardization;
  for (Eigen::Index j = 0; j < X_raw.cols(); ++j) {
    InputColumn input;
    input.name = j < static_cast<Eigen::Index>(feature_names.size()) ? feature_names[j]
                                                                      : "x" + std::to_string(j + 1);
    FeatureColumn f;
    f.name = input.name;
    f.source = static_cast<int>(j);
    st.inputs.push_back(input);
    st.features.push_back(f);
  }
  for (Eigen::Index r = 0; r < Y.cols(); ++r) {
    st.responses.push_back(r < static_cast<Eigen::Index>(response_names.size())
                               ? response_names[r]
                               : (Y.cols() == 1 ? std::string("y") : "y" + std::to_string(r + 1)));
  }
  data.X = X_raw;
  data.D_raw.resize(X_raw.rows(), 0);
  data.Y = Y;
  data.y = Y.col(0);
  standardize(data.X, st.features);
  return data;
}

EncodedInputs encode_inputs(const Standardization& st, const RawTable& table) {
  const auto n = static_cast<Eigen::Index>(table.num_rows());
  std::vector<int> source_col(st.inputs.size());
  for (std::size_t s = 0; s < st.inputs.size(); ++s) source_col[s] = table.require_column(st.inputs[s].name);

  std::size_t p_dummy = 0;
  for (const auto& f : st.features) p_dummy += f.raw_dummy >= 0 ? 1 : 0;

  EncodedInputs out;
  out.features = &st.features;
  out.X.resize(n, static_cast<Eigen::Index>(st.features.size()));
  out.D_raw.resize(n, static_cast<Eigen::Index>(p_dummy));
  for (std::size_t s = 0; s < st.inputs.size(); ++s) {
    const InputColumn& input = st.inputs[s];
    if (input.kind != ColumnKind::kCategorical) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string& v = table.rows[static_cast<std::size_t>(i)][source_col[s]];
      if (std::find(input.levels.begin(), input.levels.end(), v) == input.levels.end()) {
        throw SchemaError("column '" + input.name + "' has unseen level '" + v + "'");
      }
    }
  }
  for (std::size_t j = 0; j < st.features.size(); ++j) {
    const FeatureColumn& f = st.features[j];
    const InputColumn& input = st.inputs[static_cast<std::size_t>(f.source)];
    const int col = source_col[static_cast<std::size_t>(f.source)];
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string& cell = table.rows[static_cast<std::size_t>(i)][col];
      double raw;
      if (input.kind == ColumnKind::kCategorical) {
        raw = cell == f.level ? 1.0 : 0.0;
        out.D_raw(i, f.raw_dummy) = raw;
      } else {
        if (is_missing(cell)) throw InputError("missing value in column '" + input.name + "'");
        raw = parse_double(cell, "column '" + input.name + "'");
      }
      out.X(i, static_cast<Eigen::Index>(j)) = (raw - f.mean) / f.sd;
    }
  }
  return out;
}

EncodedInputs encode_inputs(const Standardization& st, const Eigen::MatrixXd& X_raw) {
  if (X_raw.cols() != static_cast<Eigen::Index>(st.features.size())) {
    throw SchemaError("expected " + std::to_string(st.features.size()) + " input columns, got " +
                      std::to_string(X_raw.cols()));
  }
  EncodedInputs out;
  out.features = &st.features;
  out.X.resize(X_raw.rows(), X_raw.cols());
  std::size_t p_dummy = 0;
  for (const auto& f : st.features) p_dummy += f.raw_dummy >= 0 ? 1 : 0;
  out.D_raw.resize(X_raw.rows(), static_cast<Eigen::Index>(p_dummy));
  for (Eigen::Index j = 0; j < X_raw.cols(); ++j) {
    const FeatureColumn& f = st.features[static_cast<std::size_t>(j)];
    out.X.col(j) = (X_raw.col(j).array() - f.mean) / f.sd;
    if (f.raw_dummy >= 0) out.D_raw.col(f.raw_dummy) = X_raw.col(j);
  }
  return out;
}

Dataset with_response(const Dataset& data, const Eigen::VectorXd& y) {
  if (y.size() != data.X.rows()) throw InputError("response length does not match inputs");
  Dataset out = data;
  out.y = y;
  return out;
}

}  // namespace bppr
