#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bppr/csv.hpp"

namespace bppr {

enum class ColumnKind { kReal, kCategorical };

// One column of the raw input table.
struct InputColumn {
  std::string name;
  ColumnKind kind = ColumnKind::kReal;
  // Categorical levels in first-appearance order; the last one is the
  // reference level and gets no dummy.
  std::vector<std::string> levels;
};

// One column of the standardized feature matrix.
struct FeatureColumn {
  std::string name;
  int source = 0;      // index into Standardization::inputs
  int raw_dummy = -1;  // column of Dataset::D_raw, or -1 for real features
  std::string level;   // dummies only
  double mean = 0.0;
  double sd = 1.0;
};

// Everything needed to map raw rows onto the training feature space.
struct Standardization {
  std::vector<InputColumn> inputs;
  std::vector<FeatureColumn> features;
  std::vector<std::string> responses;
};

struct ColumnRoles {
  std::vector<std::string> responses;
  std::vector<std::string> categorical;
  std::vector<std::string> exclude;
};

// Read-only view of the inputs a ridge basis is evaluated on.
struct InputView {
  const Eigen::MatrixXd& X;      // standardized, n x p
  const Eigen::MatrixXd& D_raw;  // raw 0/1 dummies, n x p_dummy
  const std::vector<FeatureColumn>& features;
};

struct Dataset {
  Eigen::MatrixXd X;      // n x p, every column mean 0 and sd 1
  Eigen::MatrixXd D_raw;  // n x p_dummy
  Eigen::VectorXd y;      // response used by the sampler
  Eigen::MatrixXd Y;      // all responses, n x D
  std::vector<int> dummy_index;  // feature columns that are dummies
  Standardization standardization;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  int p_dummy() const { return static_cast<int>(dummy_index.size()); }
  int p_real() const { return p() - p_dummy(); }
  bool is_dummy(int j) const { return standardization.features[j].raw_dummy >= 0; }
  InputView inputs() const { return {X, D_raw, standardization.features}; }
};

struct EncodedInputs {
  Eigen::MatrixXd X;
  Eigen::MatrixXd D_raw;
  const std::vector<FeatureColumn>* features = nullptr;

  int n() const { return static_cast<int>(X.rows()); }
  InputView inputs() const { return {X, D_raw, *features}; }
};

// Expands categoricals into dummies and standardizes every feature column
// (sample sd with denominator n - 1). Columns not named as response, categorical
// or excluded are real inputs.
Dataset prepare_dataset(const RawTable& table, const ColumnRoles& roles);

// All-real convenience path used by generators and tests.
Dataset prepare_dataset(const Eigen::MatrixXd& X_raw, const Eigen::MatrixXd& Y,
                        const std::vector<std::string>& feature_names = {},
                        const std::vector<std::string>& response_names = {});

// Applies stored standardization to new raw rows. Throws SchemaError naming
// the first missing column or unseen level.
EncodedInputs encode_inputs(const Standardization& standardization, const RawTable& table);
EncodedInputs encode_inputs(const Standardization& standardization, const Eigen::MatrixXd& X_raw);

// Copy of `data` with the sampler response replaced.
Dataset with_response(const Dataset& data, const Eigen::VectorXd& y);

double sample_mean(const Eigen::Ref<const Eigen::VectorXd>& v);
double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace bppr
