#include "myofuse/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "myofuse/errors.hpp"

namespace myofuse::ml {

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::KNN: return "KNN";
    case ModelKind::GaussianNB: return "GaussianNB";
    case ModelKind::DecisionTree: return "DecisionTree";
    case ModelKind::LDA: return "LDA";
    case ModelKind::LogisticRegression: return "LogisticRegression";
    case ModelKind::LinearSVM: return "LinearSVM";
  }
  return "?";
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& features) {
  Standardizer s;
  const double n = static_cast<double>(features.rows());
  s.mean = features.colwise().mean();
  Eigen::VectorXd var =
      (features.rowwise() - s.mean.transpose()).array().square().colwise().sum() /
      n;
  s.scale = var.array().sqrt();
  for (Eigen::Index f = 0; f < s.scale.size(); ++f) {
    if (s.scale(f) < 1e-12) s.scale(f) = 1.0;
  }
  return s;
}

Standardizer Standardizer::identity(Eigen::Index n_features) {
  Standardizer s;
  s.mean = Eigen::VectorXd::Zero(n_features);
  s.scale = Eigen::VectorXd::Ones(n_features);
  return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
  return (x - mean).cwiseQuotient(scale);
}

Eigen::MatrixXd Standardizer::apply_rows(const Eigen::MatrixXd& rows) const {
  return (rows.rowwise() - mean.transpose()).array().rowwise() /
         scale.transpose().array();
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ProbaVector softmax_scores(const Eigen::Matrix<double, kClassCount, 1>& scores) {
  ProbaVector proba = ProbaVector::Zero();
  double best = kNegInf;
  for (int c = 0; c < kClassCount; ++c) best = std::max(best, scores(c));
  if (best == kNegInf) {
    // No supported class: fall back to uniform.
    proba.setConstant(1.0 / kClassCount);
    return proba;
  }
  double total = 0.0;
  for (int c = 0; c < kClassCount; ++c) {
    if (scores(c) == kNegInf) continue;
    proba(c) = std::exp(scores(c) - best);
    total += proba(c);
  }
  proba /= total;
  return proba;
}

int argmax_lowest(const Eigen::Matrix<double, kClassCount, 1>& values) {
  int winner = 0;
  for (int c = 1; c < kClassCount; ++c) {
    if (values(c) > values(winner)) winner = c;
  }
  return winner;
}

struct Decision {
  ProbaVector proba;
  int winner;
};

Decision decide_knn(const KnnState& s, const Eigen::VectorXd& z) {
  const Eigen::Index n = s.train.rows();
  const int k = std::min<int>(s.k, static_cast<int>(n));

  std::vector<std::pair<double, Eigen::Index>> by_distance(
      static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    by_distance[static_cast<std::size_t>(i)] = {
        (s.train.row(i).transpose() - z).norm(), i};
  }
  std::partial_sort(by_distance.begin(), by_distance.begin() + k,
                    by_distance.end());

  Eigen::Matrix<double, kClassCount, 1> votes =
      Eigen::Matrix<double, kClassCount, 1>::Zero();
  Eigen::Matrix<double, kClassCount, 1> distance_sum =
      Eigen::Matrix<double, kClassCount, 1>::Zero();
  for (int i = 0; i < k; ++i) {
    const int label = s.labels[static_cast<std::size_t>(by_distance[i].second)];
    votes(label) += 1.0;
    distance_sum(label) += by_distance[i].first;
  }

  // Most votes; ties by smaller mean distance among the tied classes, then
  // lower class code.
  int winner = 0;
  double winner_mean = std::numeric_limits<double>::infinity();
  double best_votes = -1.0;
  for (int c = 0; c < kClassCount; ++c) {
    if (votes(c) == 0.0) continue;
    const double mean_distance = distance_sum(c) / votes(c);
    if (votes(c) > best_votes ||
        (votes(c) == best_votes && mean_distance < winner_mean)) {
      best_votes = votes(c);
      winner = c;
      winner_mean = mean_distance;
    }
  }

  return {votes / static_cast<double>(k), winner};
}

Eigen::Matrix<double, kClassCount, 1> nb_log_scores(const GaussianNbState& s,
                                                    const Eigen::VectorXd& x) {
  Eigen::Matrix<double, kClassCount, 1> scores;
  constexpr double kLog2Pi = 1.8378770664093453;
  for (int c = 0; c < kClassCount; ++c) {
    if (!s.present[static_cast<std::size_t>(c)]) {
      scores(c) = kNegInf;
      continue;
    }
    double ll = s.log_prior[static_cast<std::size_t>(c)];
    for (Eigen::Index f = 0; f < x.size(); ++f) {
      const double var = s.variance(c, f);
      const double diff = x(f) - s.mean(c, f);
      ll -= 0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
    }
    scores(c) = ll;
  }
  return scores;
}

int tree_leaf_for(const DecisionTreeState& s, const Eigen::VectorXd& x) {
  int node = 0;
  while (s.nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& n = s.nodes[static_cast<std::size_t>(node)];
    node = x(n.feature) <= n.threshold ? n.left : n.right;
  }
  return node;
}

Decision decide(const TrainedModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd z = model.standardizer.apply(x);

  if (const auto* knn = std::get_if<KnnState>(&model.state)) {
    return decide_knn(*knn, z);
  }
  if (const auto* nb = std::get_if<GaussianNbState>(&model.state)) {
    const auto scores = nb_log_scores(*nb, z);
    const ProbaVector proba = softmax_scores(scores);
    return {proba, argmax_lowest(scores)};
  }
  if (const auto* tree = std::get_if<DecisionTreeState>(&model.state)) {
    const int leaf = tree_leaf_for(*tree, z);
    const ProbaVector proba =
        tree->nodes[static_cast<std::size_t>(leaf)].class_fraction;
    return {proba, argmax_lowest(proba)};
  }
  if (const auto* lda = std::get_if<LdaState>(&model.state)) {
    Eigen::Matrix<double, kClassCount, 1> scores = lda->weights * z + lda->bias;
    for (int c = 0; c < kClassCount; ++c) {
      if (!lda->present[static_cast<std::size_t>(c)]) scores(c) = kNegInf;
    }
    return {softmax_scores(scores), argmax_lowest(scores)};
  }
  if (const auto* lr = std::get_if<LogRegState>(&model.state)) {
    const Eigen::Matrix<double, kClassCount, 1> logits =
        lr->weights * z + lr->bias;
    return {softmax_scores(logits), argmax_lowest(logits)};
  }
  const auto& svm = std::get<LinearSvmState>(model.state);
  const Eigen::Matrix<double, kClassCount, 1> margins =
      svm.weights * z + svm.bias;
  return {softmax_scores(margins), argmax_lowest(margins)};
}

void check_input(const TrainedModel& model,
                 const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.n_features) {
    throw DimensionError("feature vector length " + std::to_string(x.size()) +
                         " does not match model with " +
                         std::to_string(model.n_features) + " features");
  }
  if (!x.allFinite()) {
    throw InvalidSignal("feature vector contains non-finite values");
  }
}

}  // namespace

GestureLabel predict(const TrainedModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_input(model, x);
  return gesture_from_code(decide(model, x).winner);
}

ProbaVector predict_proba(const TrainedModel& model,
                          const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_input(model, x);
  return decide(model, x).proba;
}

double logreg_objective(const Eigen::MatrixXd& weights,
                        const Eigen::Matrix<double, kClassCount, 1>& bias,
                        const Eigen::MatrixXd& features,
                        const std::vector<int>& labels, double l2) {
  const Eigen::Index n = features.rows();
  Eigen::MatrixXd logits =
      (features * weights.transpose()).rowwise() + bias.transpose();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_max = logits.row(i).maxCoeff();
    const double log_sum =
        row_max + std::log((logits.row(i).array() - row_max).exp().sum());
    loss += log_sum - logits(i, labels[static_cast<std::size_t>(i)]);
  }
  return loss / static_cast<double>(n) + 0.5 * l2 * weights.squaredNorm();
}

void logreg_gradient(const Eigen::MatrixXd& weights,
                     const Eigen::Matrix<double, kClassCount, 1>& bias,
                     const Eigen::MatrixXd& features,
                     const std::vector<int>& labels, double l2,
                     Eigen::MatrixXd& grad_weights,
                     Eigen::Matrix<double, kClassCount, 1>& grad_bias) {
  const Eigen::Index n = features.rows();
  Eigen::MatrixXd proba =
      (features * weights.transpose()).rowwise() + bias.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_max = proba.row(i).maxCoeff();
    proba.row(i) = (proba.row(i).array() - row_max).exp();
    proba.row(i) /= proba.row(i).sum();
    proba(i, labels[static_cast<std::size_t>(i)]) -= 1.0;  // P - Y
  }
  grad_weights =
      proba.transpose() * features / static_cast<double>(n) + l2 * weights;
  grad_bias = proba.colwise().sum().transpose() / static_cast<double>(n);
}

}  // namespace myofuse::ml
