#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "myofuse/classify.hpp"
#include "myofuse/errors.hpp"
#include "myofuse/rng.hpp"

namespace myofuse::ml {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kVarianceFloor = 1e-9;

std::array<Eigen::Index, kClassCount> class_counts(
    const std::vector<int>& labels) {
  std::array<Eigen::Index, kClassCount> counts{};
  for (int label : labels) {
    if (label < 0 || label >= kClassCount) {
      throw UnknownLabel("label code out of range: " + std::to_string(label));
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  return counts;
}

KnnState fit_knn(const Eigen::MatrixXd& z, const std::vector<int>& labels,
                 const Hyperparams& hp) {
  if (hp.knn_k < 1) throw Error("knn_k must be at least 1");
  return KnnState{z, labels, hp.knn_k};
}

GaussianNbState fit_nb(const Eigen::MatrixXd& x,
                       const std::vector<int>& labels) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const auto counts = class_counts(labels);

  GaussianNbState s;
  s.mean.setZero(kClassCount, d);
  s.variance.setConstant(kClassCount, d, kVarianceFloor);
  for (int c = 0; c < kClassCount; ++c) {
    const Eigen::Index nc = counts[static_cast<std::size_t>(c)];
    s.present[static_cast<std::size_t>(c)] = nc > 0;
    s.log_prior[static_cast<std::size_t>(c)] =
        nc > 0 ? std::log(static_cast<double>(nc) / static_cast<double>(n))
               : kNegInf;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    s.mean.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
  }
  for (int c = 0; c < kClassCount; ++c) {
    const Eigen::Index nc = counts[static_cast<std::size_t>(c)];
    if (nc > 0) s.mean.row(c) /= static_cast<double>(nc);
  }
  // Sample variance (n-1); single-row classes keep the bare floor.
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    s.variance.row(c) +=
        (x.row(i) - s.mean.row(c)).array().square().matrix() /
        std::max<double>(
            static_cast<double>(counts[static_cast<std::size_t>(c)]) - 1.0,
            1.0);
  }
  return s;
}

// ---- CART with Gini impurity ----

struct SplitCandidate {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double gini(const std::array<Eigen::Index, kClassCount>& counts,
            Eigen::Index total) {
  double sum_sq = 0.0;
  for (Eigen::Index c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

SplitCandidate best_split(const Eigen::MatrixXd& x,
                          const std::vector<int>& labels,
                          const std::vector<Eigen::Index>& rows) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  std::array<Eigen::Index, kClassCount> total_counts{};
  for (Eigen::Index r : rows) ++total_counts[static_cast<std::size_t>(
      labels[static_cast<std::size_t>(r)])];
  const double parent_gini = gini(total_counts, n);

  SplitCandidate best;
  std::vector<std::pair<double, int>> column(static_cast<std::size_t>(n));
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = rows[static_cast<std::size_t>(i)];
      column[static_cast<std::size_t>(i)] = {
          x(r, f), labels[static_cast<std::size_t>(r)]};
    }
    std::sort(column.begin(), column.end());

    std::array<Eigen::Index, kClassCount> left_counts{};
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      ++left_counts[static_cast<std::size_t>(
          column[static_cast<std::size_t>(i)].second)];
      const double v = column[static_cast<std::size_t>(i)].first;
      const double next = column[static_cast<std::size_t>(i + 1)].first;
      if (v >= next) continue;  // threshold only between distinct values

      std::array<Eigen::Index, kClassCount> right_counts{};
      for (int c = 0; c < kClassCount; ++c) {
        right_counts[static_cast<std::size_t>(c)] =
            total_counts[static_cast<std::size_t>(c)] -
            left_counts[static_cast<std::size_t>(c)];
      }
      const Eigen::Index n_left = i + 1;
      const Eigen::Index n_right = n - n_left;
      const double weighted =
          (static_cast<double>(n_left) * gini(left_counts, n_left) +
           static_cast<double>(n_right) * gini(right_counts, n_right)) /
          static_cast<double>(n);
      const double gain = parent_gini - weighted;
      // Strict improvement; equal gains keep the earlier (lower feature index,
      // lower threshold) candidate.
      if (gain > best.gain) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (v + next);
        best.gain = gain;
      }
    }
  }
  return best;
}

int build_tree(const Eigen::MatrixXd& x, const std::vector<int>& labels,
               std::vector<Eigen::Index>&& rows, int depth,
               const Hyperparams& hp, std::vector<TreeNode>& nodes) {
  std::array<Eigen::Index, kClassCount> counts{};
  for (Eigen::Index r : rows) ++counts[static_cast<std::size_t>(
      labels[static_cast<std::size_t>(r)])];

  TreeNode node;
  for (int c = 0; c < kClassCount; ++c) {
    node.class_fraction(c) =
        static_cast<double>(counts[static_cast<std::size_t>(c)]) /
        static_cast<double>(rows.size());
  }
  const int index = static_cast<int>(nodes.size());
  nodes.push_back(node);

  const bool pure =
      *std::max_element(counts.begin(), counts.end()) ==
      static_cast<Eigen::Index>(rows.size());
  const bool depth_capped = hp.tree_max_depth > 0 && depth >= hp.tree_max_depth;
  if (pure || depth_capped ||
      rows.size() < static_cast<std::size_t>(hp.tree_min_split)) {
    return index;
  }

  const SplitCandidate split = best_split(x, labels, rows);
  if (!split.found) return index;

  std::vector<Eigen::Index> left_rows, right_rows;
  for (Eigen::Index r : rows) {
    (x(r, split.feature) <= split.threshold ? left_rows : right_rows)
        .push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  const int left = build_tree(x, labels, std::move(left_rows), depth + 1, hp, nodes);
  const int right = build_tree(x, labels, std::move(right_rows), depth + 1, hp, nodes);
  nodes[static_cast<std::size_t>(index)].feature = split.feature;
  nodes[static_cast<std::size_t>(index)].threshold = split.threshold;
  nodes[static_cast<std::size_t>(index)].left = left;
  nodes[static_cast<std::size_t>(index)].right = right;
  return index;
}

DecisionTreeState fit_tree(const Eigen::MatrixXd& x,
                           const std::vector<int>& labels,
                           const Hyperparams& hp) {
  DecisionTreeState s;
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  build_tree(x, labels, std::move(rows), 0, hp, s.nodes);
  return s;
}

LdaState fit_lda(const Eigen::MatrixXd& z, const std::vector<int>& labels) {
  const Eigen::Index n = z.rows();
  const Eigen::Index d = z.cols();
  const auto counts = class_counts(labels);

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(kClassCount, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    means.row(labels[static_cast<std::size_t>(i)]) += z.row(i);
  }
  int present_classes = 0;
  for (int c = 0; c < kClassCount; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      ++present_classes;
    }
  }

  // Pooled within-class covariance with an n - k denominator.
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd dev =
        (z.row(i) - means.row(labels[static_cast<std::size_t>(i)])).transpose();
    scatter.noalias() += dev * dev.transpose();
  }
  const double denom = std::max<double>(
      static_cast<double>(n) - static_cast<double>(present_classes), 1.0);
  Eigen::MatrixXd sigma = scatter / denom;
  const double ridge =
      std::max(1e-6 * sigma.trace() / static_cast<double>(d), 1e-12);
  sigma.diagonal().array() += ridge;

  const Eigen::LDLT<Eigen::MatrixXd> solver(sigma);

  LdaState s;
  s.weights.setZero(kClassCount, d);
  s.bias.setZero();
  for (int c = 0; c < kClassCount; ++c) {
    const Eigen::Index nc = counts[static_cast<std::size_t>(c)];
    s.present[static_cast<std::size_t>(c)] = nc > 0;
    if (nc == 0) continue;
    const Eigen::VectorXd w = solver.solve(means.row(c).transpose());
    s.weights.row(c) = w.transpose();
    s.bias(c) = -0.5 * means.row(c).dot(w) +
                std::log(static_cast<double>(nc) / static_cast<double>(n));
  }
  return s;
}

LogRegState fit_logreg(const Eigen::MatrixXd& z, const std::vector<int>& labels,
                       const Hyperparams& hp) {
  LogRegState s;
  s.weights.setZero(kClassCount, z.cols());
  s.bias.setZero();

  Eigen::MatrixXd grad_w(kClassCount, z.cols());
  Eigen::Matrix<double, kClassCount, 1> grad_b;
  for (int epoch = 0; epoch < hp.logreg_epochs; ++epoch) {
    logreg_gradient(s.weights, s.bias, z, labels, hp.logreg_l2, grad_w, grad_b);
    s.weights -= hp.logreg_learning_rate * grad_w;
    s.bias -= hp.logreg_learning_rate * grad_b;
  }
  return s;
}

LinearSvmState fit_svm(const Eigen::MatrixXd& z, const std::vector<int>& labels,
                       const Hyperparams& hp) {
  const Eigen::Index n = z.rows();

  // One sample order, shuffled once from the seed and reused every epoch.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(derive_seed(hp.seed, 0x5A11, 0));
  seeded_shuffle(order, rng);

  LinearSvmState s;
  s.weights.setZero(kClassCount, z.cols());
  s.bias.setZero();

  for (int c = 0; c < kClassCount; ++c) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(z.cols());
    double b = 0.0;
    for (int epoch = 0; epoch < hp.svm_epochs; ++epoch) {
      const double eta = hp.svm_learning_rate / (1.0 + epoch);
      for (Eigen::Index i : order) {
        const double target =
            labels[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
        const bool violates = target * (z.row(i).dot(w) + b) < 1.0;
        w *= 1.0 - eta * hp.svm_lambda;
        if (violates) {
          w.noalias() += eta * target * z.row(i).transpose();
          b += eta * target;
        }
      }
    }
    s.weights.row(c) = w.transpose();
    s.bias(c) = b;
  }
  return s;
}

}  // namespace

TrainedModel fit(ModelKind kind, const Eigen::MatrixXd& features,
                 const std::vector<int>& labels, const Hyperparams& hp) {
  const Eigen::Index n = features.rows();
  if (n == 0 || labels.size() != static_cast<std::size_t>(n)) {
    throw InsufficientClassData("training set is empty or mislabeled");
  }
  if (!features.allFinite()) {
    throw InvalidSignal("training features contain non-finite values");
  }
  class_counts(labels);  // validates label range

  TrainedModel model;
  model.kind = kind;
  model.n_features = features.cols();

  // GaussianNB and DecisionTree work in raw feature units (their predictions
  // are scale-equivariant and the learned parameters stay interpretable);
  // the distance- and margin-based kinds standardize.
  switch (kind) {
    case ModelKind::GaussianNB:
    case ModelKind::DecisionTree:
      model.standardizer = Standardizer::identity(features.cols());
      break;
    default:
      model.standardizer = Standardizer::fit(features);
      break;
  }
  const Eigen::MatrixXd z = model.standardizer.apply_rows(features);

  switch (kind) {
    case ModelKind::KNN:
      model.state = fit_knn(z, labels, hp);
      break;
    case ModelKind::GaussianNB:
      model.state = fit_nb(z, labels);
      break;
    case ModelKind::DecisionTree:
      model.state = fit_tree(z, labels, hp);
      break;
    case ModelKind::LDA:
      model.state = fit_lda(z, labels);
      break;
    case ModelKind::LogisticRegression:
      model.state = fit_logreg(z, labels, hp);
      break;
    case ModelKind::LinearSVM:
      model.state = fit_svm(z, labels, hp);
      break;
  }
  return model;
}

TrainedModel fit(ModelKind kind, const synth::LabeledDataset& data,
                 const Hyperparams& hp) {
  std::vector<int> labels;
  labels.reserve(data.labels.size());
  for (GestureLabel g : data.labels) labels.push_back(gesture_code(g));
  return fit(kind, data.features, labels, hp);
}

}  // namespace myofuse::ml
