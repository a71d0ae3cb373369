#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "myofuse/gesture.hpp"
#include "myofuse/synth.hpp"

namespace myofuse::ml {

inline constexpr int kClassCount = kGestureCount;

enum class ModelKind {
  KNN,
  GaussianNB,
  DecisionTree,
  LDA,
  LogisticRegression,
  LinearSVM,
};

std::string_view model_kind_name(ModelKind kind);

struct Hyperparams {
  int knn_k = 5;
  int tree_max_depth = 8;  // <= 0 means unlimited
  int tree_min_split = 2;
  double logreg_learning_rate = 0.1;
  int logreg_epochs = 500;
  double logreg_l2 = 1e-4;
  double svm_lambda = 1e-4;
  double svm_learning_rate = 0.1;
  int svm_epochs = 200;
  std::uint64_t seed = 0;  // sample ordering for LinearSVM
};

/// Per-feature affine map fit on training rows: z = (x - mean) / scale.
/// Near-constant features get scale 1 so they standardize to ~0.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& features);
  static Standardizer identity(Eigen::Index n_features);
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;
};

// ---- learned state per model kind ----

struct KnnState {
  Eigen::MatrixXd train;  // standardized, n x d
  std::vector<int> labels;
  int k = 5;
};

struct GaussianNbState {
  // Raw-feature class-conditional Gaussians; sample variance (n-1) plus floor.
  Eigen::Matrix<double, kClassCount, Eigen::Dynamic> mean;
  Eigen::Matrix<double, kClassCount, Eigen::Dynamic> variance;
  std::array<double, kClassCount> log_prior;  // -inf for absent classes
  std::array<bool, kClassCount> present;
};

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // left branch takes x[feature] <= threshold
  int left = -1;
  int right = -1;
  Eigen::Matrix<double, kClassCount, 1> class_fraction;
};

struct DecisionTreeState {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct LdaState {
  // Linear discriminant per class: score_c(x) = w_c . x + b_c with
  // w_c = Sigma^-1 mu_c and b_c = -mu_c . w_c / 2 + log prior_c.
  Eigen::MatrixXd weights;  // kClassCount x d
  Eigen::Matrix<double, kClassCount, 1> bias;
  std::array<bool, kClassCount> present;
};

struct LogRegState {
  Eigen::MatrixXd weights;  // kClassCount x d
  Eigen::Matrix<double, kClassCount, 1> bias;
};

struct LinearSvmState {
  Eigen::MatrixXd weights;  // one-vs-rest margins, kClassCount x d
  Eigen::Matrix<double, kClassCount, 1> bias;
};

struct TrainedModel {
  ModelKind kind;
  Standardizer standardizer;  // identity for GaussianNB and DecisionTree
  Eigen::Index n_features = 0;
  std::variant<KnnState, GaussianNbState, DecisionTreeState, LdaState,
               LogRegState, LinearSvmState>
      state;
};

using ProbaVector = Eigen::Matrix<double, kClassCount, 1>;

/// Trains a model of the given kind.  Labels are gesture codes 0..4; classes
/// absent from the training set get zero probability from the
/// class-conditional kinds.  Deterministic for (data, hyperparams, seed).
TrainedModel fit(ModelKind kind, const Eigen::MatrixXd& features,
                 const std::vector<int>& labels, const Hyperparams& hp = {});
TrainedModel fit(ModelKind kind, const synth::LabeledDataset& data,
                 const Hyperparams& hp = {});

GestureLabel predict(const TrainedModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

/// Nonnegative, sums to 1; argmax agrees with predict under the same
/// tie-break path (KNN: smaller mean neighbor distance then lower class code;
/// all other kinds: lower class code).
ProbaVector predict_proba(const TrainedModel& model,
                          const Eigen::Ref<const Eigen::VectorXd>& x);

// ---- multinomial logistic objective (full-batch path used by fit) ----

/// Mean cross-entropy over rows plus (l2/2)*||W||^2; bias unregularized.
double logreg_objective(const Eigen::MatrixXd& weights,
                        const Eigen::Matrix<double, kClassCount, 1>& bias,
                        const Eigen::MatrixXd& features,
                        const std::vector<int>& labels, double l2);

void logreg_gradient(const Eigen::MatrixXd& weights,
                     const Eigen::Matrix<double, kClassCount, 1>& bias,
                     const Eigen::MatrixXd& features,
                     const std::vector<int>& labels, double l2,
                     Eigen::MatrixXd& grad_weights,
                     Eigen::Matrix<double, kClassCount, 1>& grad_bias);

// ---- evaluation ----

using ConfusionMatrix = Eigen::Matrix<long, kClassCount, kClassCount>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct EvalReport {
  ModelKind kind;
  double accuracy = 0.0;
  std::array<ClassMetrics, kClassCount> per_class;
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
};

/// Harmonic mean 2PR/(P+R); 0 when the denominator is 0.
double f1_score(double precision, double recall);

/// Rows are true classes, columns predictions; zero denominators yield 0.
EvalReport report_from_confusion(ModelKind kind, const ConfusionMatrix& confusion);

/// Stratified tenfold cross-validation: each class is shuffled with a seeded
/// stream and dealt round-robin across the 10 folds; the report pools the
/// confusion matrix over all folds.  Throws StratificationError when any
/// class has fewer than 10 rows.
EvalReport cross_validate_10fold(ModelKind kind,
                                 const synth::LabeledDataset& data,
                                 std::uint64_t seed,
                                 const Hyperparams& hp = {});

/// {"kind", "accuracy", "per_class": [...], "confusion": [[...]]} with fixed
/// key order; metric fields rounded to 4 decimals.
std::string report_to_json(const EvalReport& report);

}  // namespace myofuse::ml
