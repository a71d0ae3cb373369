#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "myofuse/classify.hpp"
#include "myofuse/errors.hpp"
#include "myofuse/rng.hpp"

using namespace myofuse;
using namespace myofuse::ml;

namespace {

constexpr ModelKind kAllKinds[] = {
    ModelKind::KNN,          ModelKind::GaussianNB, ModelKind::DecisionTree,
    ModelKind::LDA,          ModelKind::LogisticRegression,
    ModelKind::LinearSVM,
};

Eigen::MatrixXd random_features(SplitMix64& rng, int rows, int cols,
                                double spread = 1.0) {
  Eigen::MatrixXd x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      x(i, j) = spread * rng.next_gaussian();
    }
  }
  return x;
}

// Five well-separated Gaussian blobs in `cols` dimensions; class centers are
// distinct cyclic shifts of a staircase pattern.
void make_blobs(SplitMix64& rng, int per_class, int cols, Eigen::MatrixXd& x,
                std::vector<int>& y) {
  const int rows = per_class * kClassCount;
  x.resize(rows, cols);
  y.clear();
  int row = 0;
  for (int c = 0; c < kClassCount; ++c) {
    for (int i = 0; i < per_class; ++i, ++row) {
      for (int j = 0; j < cols; ++j) {
        const double center = 4.0 * static_cast<double>((c + j) % kClassCount);
        x(row, j) = center + 0.4 * rng.next_gaussian();
      }
      y.push_back(c);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- KNN

TEST_CASE("knn votes by neighborhood (hand-worked example)") {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 1, 0, 10, 0;
  const std::vector<int> y = {0, 0, 1};
  Hyperparams hp;
  hp.knn_k = 3;
  const TrainedModel m = fit(ModelKind::KNN, x, y, hp);

  Eigen::VectorXd query(2);
  query << 0.5, 0.0;  // neighbors vote 0, 0, 1
  CHECK(predict(m, query) == GestureLabel::Fist);

  const ProbaVector p = predict_proba(m, query);
  CHECK(p(0) == doctest::Approx(2.0 / 3.0));
  CHECK(p(1) == doctest::Approx(1.0 / 3.0));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("knn probabilities are vote fractions") {
  Eigen::MatrixXd x(5, 1);
  x << 1, 2, 3, 4, 5;
  const std::vector<int> y = {0, 0, 0, 0, 1};
  Hyperparams hp;
  hp.knn_k = 5;
  const TrainedModel m = fit(ModelKind::KNN, x, y, hp);

  Eigen::VectorXd query(1);
  query << 0.0;
  const ProbaVector p = predict_proba(m, query);
  CHECK(p(0) == doctest::Approx(0.8));
  CHECK(p(1) == doctest::Approx(0.2));
  CHECK(p(2) == 0.0);
  CHECK(p(3) == 0.0);
  CHECK(p(4) == 0.0);
}

TEST_CASE("knn at k=1 memorizes the training set") {
  SplitMix64 rng(11);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 6, 4, x, y);
  Hyperparams hp;
  hp.knn_k = 1;
  const TrainedModel m = fit(ModelKind::KNN, x, y, hp);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    CHECK(gesture_code(predict(m, x.row(i).transpose())) ==
          y[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("knn agrees with a brute-force distance scan") {
  SplitMix64 rng(29);
  const int rows = 50, cols = 8;
  Eigen::MatrixXd x = random_features(rng, rows, cols, 3.0);
  std::vector<int> y;
  for (int i = 0; i < rows; ++i) y.push_back(static_cast<int>(rng.next_below(5)));

  Hyperparams hp;
  hp.knn_k = 5;
  const TrainedModel m = fit(ModelKind::KNN, x, y, hp);

  // Independent path: own standardization, full sort, same published
  // tie-break rule (most votes, then mean distance, then class code).
  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::RowVectorXd sd = ((x.rowwise() - mean).array().square().colwise().sum() /
                           static_cast<double>(rows))
                              .sqrt();
  for (Eigen::Index f = 0; f < sd.size(); ++f) {
    if (sd(f) < 1e-12) sd(f) = 1.0;
  }
  const Eigen::MatrixXd z = (x.rowwise() - mean).array().rowwise() / sd.array();

  for (int q = 0; q < 100; ++q) {
    Eigen::VectorXd raw(cols);
    for (int j = 0; j < cols; ++j) raw(j) = 3.0 * rng.next_gaussian();
    const Eigen::VectorXd zq = (raw.transpose() - mean).array() / sd.array();

    std::vector<std::pair<double, int>> ranked;
    for (int i = 0; i < rows; ++i) {
      ranked.push_back({(z.row(i).transpose() - zq).norm(), i});
    }
    std::sort(ranked.begin(), ranked.end());

    double votes[kClassCount] = {0};
    double dist_sum[kClassCount] = {0};
    for (int i = 0; i < hp.knn_k; ++i) {
      const int c = y[static_cast<std::size_t>(ranked[static_cast<std::size_t>(i)].second)];
      votes[c] += 1;
      dist_sum[c] += ranked[static_cast<std::size_t>(i)].first;
    }
    int expected = -1;
    double best_votes = -1, best_mean = 0;
    for (int c = 0; c < kClassCount; ++c) {
      if (votes[c] == 0) continue;
      const double mean_d = dist_sum[c] / votes[c];
      if (votes[c] > best_votes ||
          (votes[c] == best_votes && mean_d < best_mean)) {
        best_votes = votes[c];
        best_mean = mean_d;
        expected = c;
      }
    }
    CHECK(gesture_code(predict(m, raw)) == expected);
  }
}

// ---------------------------------------------------------------- GaussianNB

TEST_CASE("gaussian nb learns closed-form class statistics") {
  Eigen::MatrixXd x(4, 1);
  x << 0.0, 2.0, 10.0, 12.0;
  const std::vector<int> y = {0, 0, 1, 1};
  const TrainedModel m = fit(ModelKind::GaussianNB, x, y);

  const auto& nb = std::get<GaussianNbState>(m.state);
  CHECK(nb.mean(0, 0) == doctest::Approx(1.0));
  CHECK(nb.mean(1, 0) == doctest::Approx(11.0));
  CHECK(nb.variance(0, 0) == doctest::Approx(2.0 + 1e-9));  // sample variance
  CHECK(nb.variance(1, 0) == doctest::Approx(2.0 + 1e-9));
  CHECK(nb.log_prior[0] == doctest::Approx(std::log(0.5)));
  CHECK(nb.present[0]);
  CHECK(nb.present[1]);
  CHECK(!nb.present[2]);

  Eigen::VectorXd query(1);
  query << 1.0;
  CHECK(predict(m, query) == GestureLabel::Fist);
  CHECK(predict_proba(m, query)(0) > 0.99);
}

TEST_CASE("gaussian nb equals direct density evaluation") {
  SplitMix64 rng(57);
  const int per_class = 10, cols = 4;
  // Mild separation keeps all five class probabilities inside double range,
  // so the log-score comparison stays exact.
  Eigen::MatrixXd x(per_class * kClassCount, cols);
  std::vector<int> y;
  int row = 0;
  for (int c = 0; c < kClassCount; ++c) {
    for (int i = 0; i < per_class; ++i, ++row) {
      for (int j = 0; j < cols; ++j) {
        x(row, j) = 1.5 * c + rng.next_gaussian();
      }
      y.push_back(c);
    }
  }
  const TrainedModel m = fit(ModelKind::GaussianNB, x, y);

  // Oracle: recompute class stats from the raw data and evaluate the
  // Gaussian product directly, then compare score gaps through the
  // normalized probabilities.
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(kClassCount, cols);
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(kClassCount, cols);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(kClassCount);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    mean.row(y[static_cast<std::size_t>(i)]) += x.row(i);
    count(y[static_cast<std::size_t>(i)]) += 1.0;
  }
  for (int c = 0; c < kClassCount; ++c) mean.row(c) /= count(c);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    var.row(c) += (x.row(i) - mean.row(c)).array().square().matrix() /
                  (count(c) - 1.0);
  }
  var.array() += 1e-9;

  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::VectorXd log_score(kClassCount);
    for (int c = 0; c < kClassCount; ++c) {
      double ll = std::log(count(c) / static_cast<double>(x.rows()));
      for (int f = 0; f < cols; ++f) {
        const double diff = x(i, f) - mean(c, f);
        ll += -0.5 * std::log(2.0 * std::numbers::pi * var(c, f)) -
              diff * diff / (2.0 * var(c, f));
      }
      log_score(c) = ll;
    }
    const ProbaVector p = predict_proba(m, x.row(i).transpose());
    for (int c = 1; c < kClassCount; ++c) {
      const double oracle_gap = log_score(c) - log_score(0);
      const double model_gap = std::log(p(c)) - std::log(p(0));
      CHECK(std::abs(oracle_gap - model_gap) < 1e-9);
    }
    int oracle_argmax = 0;
    log_score.maxCoeff(&oracle_argmax);
    CHECK(gesture_code(predict(m, x.row(i).transpose())) == oracle_argmax);
  }
}

// ---------------------------------------------------------------- tree

TEST_CASE("decision tree on one class is a single leaf") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  const std::vector<int> y = {2, 2, 2, 2};
  const TrainedModel m = fit(ModelKind::DecisionTree, x, y);
  CHECK(std::get<DecisionTreeState>(m.state).nodes.size() == 1);

  Eigen::VectorXd anywhere(2);
  anywhere << -100, 100;
  CHECK(predict(m, anywhere) == GestureLabel::WaveOut);
}

TEST_CASE("unlimited-depth tree reaches zero training error") {
  SplitMix64 rng(91);
  const int rows = 120, cols = 3;
  Eigen::MatrixXd x = random_features(rng, rows, cols, 2.0);
  std::vector<int> y;
  for (int i = 0; i < rows; ++i) y.push_back(static_cast<int>(rng.next_below(5)));

  Hyperparams hp;
  hp.tree_max_depth = 0;  // unlimited
  const TrainedModel m = fit(ModelKind::DecisionTree, x, y, hp);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    CHECK(gesture_code(predict(m, x.row(i).transpose())) ==
          y[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("tree depth cap limits the node count") {
  SplitMix64 rng(92);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 8, 3, x, y);
  Hyperparams hp;
  hp.tree_max_depth = 1;
  const TrainedModel m = fit(ModelKind::DecisionTree, x, y, hp);
  CHECK(std::get<DecisionTreeState>(m.state).nodes.size() <= 3);
}

// ---------------------------------------------------------------- LDA

TEST_CASE("lda separates two 1-d classes at the midpoint") {
  Eigen::MatrixXd x(4, 1);
  x << -1.0, 1.0, 9.0, 11.0;  // class means 0 and 10, equal spread
  const std::vector<int> y = {0, 0, 1, 1};
  const TrainedModel m = fit(ModelKind::LDA, x, y);

  Eigen::VectorXd query(1);
  query << 4.9;
  CHECK(predict(m, query) == GestureLabel::Fist);
  query << 5.1;
  CHECK(predict(m, query) == GestureLabel::WaveIn);
}

// ----------------------------------------------------- logistic regression

TEST_CASE("zero-epoch logistic regression is uniform") {
  SplitMix64 rng(3);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 4, 3, x, y);
  Hyperparams hp;
  hp.logreg_epochs = 0;  // zero initialization survives untouched
  const TrainedModel m = fit(ModelKind::LogisticRegression, x, y, hp);

  const ProbaVector p = predict_proba(m, x.row(0).transpose());
  for (int c = 0; c < kClassCount; ++c) {
    CHECK(p(c) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("logreg gradient matches central finite differences") {
  SplitMix64 rng(41);
  const int rows = 10, cols = 3;
  Eigen::MatrixXd x = random_features(rng, rows, cols, 2.0);
  std::vector<int> y;
  for (int i = 0; i < rows; ++i) y.push_back(static_cast<int>(rng.next_below(5)));

  Eigen::MatrixXd w = random_features(rng, kClassCount, cols, 0.5);
  Eigen::Matrix<double, kClassCount, 1> b;
  for (int c = 0; c < kClassCount; ++c) b(c) = 0.3 * rng.next_gaussian();
  const double l2 = 1e-4;

  Eigen::MatrixXd grad_w(kClassCount, cols);
  Eigen::Matrix<double, kClassCount, 1> grad_b;
  logreg_gradient(w, b, x, y, l2, grad_w, grad_b);

  const double h = 1e-6;
  double fd_norm_sq = 0.0, diff_norm_sq = 0.0;
  for (int c = 0; c < kClassCount; ++c) {
    for (int f = 0; f < cols; ++f) {
      Eigen::MatrixXd wp = w, wm = w;
      wp(c, f) += h;
      wm(c, f) -= h;
      const double fd = (logreg_objective(wp, b, x, y, l2) -
                         logreg_objective(wm, b, x, y, l2)) /
                        (2.0 * h);
      fd_norm_sq += fd * fd;
      diff_norm_sq += (fd - grad_w(c, f)) * (fd - grad_w(c, f));
    }
    Eigen::Matrix<double, kClassCount, 1> bp = b, bm = b;
    bp(c) += h;
    bm(c) -= h;
    const double fd = (logreg_objective(w, bp, x, y, l2) -
                       logreg_objective(w, bm, x, y, l2)) /
                      (2.0 * h);
    fd_norm_sq += fd * fd;
    diff_norm_sq += (fd - grad_b(c)) * (fd - grad_b(c));
  }
  CHECK(std::sqrt(diff_norm_sq) <= 1e-4 * std::sqrt(fd_norm_sq));
}

TEST_CASE("logreg training descends to a separating model") {
  SplitMix64 rng(43);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 10, 4, x, y);
  const TrainedModel m = fit(ModelKind::LogisticRegression, x, y);
  int correct = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (gesture_code(predict(m, x.row(i).transpose())) ==
        y[static_cast<std::size_t>(i)]) {
      ++correct;
    }
  }
  CHECK(correct == x.rows());
}

// ---------------------------------------------------------------- linear svm

TEST_CASE("linear svm separates blob classes and is seed-deterministic") {
  SplitMix64 rng(44);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 10, 4, x, y);

  Hyperparams hp;
  hp.seed = 17;
  const TrainedModel a = fit(ModelKind::LinearSVM, x, y, hp);
  const TrainedModel b = fit(ModelKind::LinearSVM, x, y, hp);
  CHECK(std::get<LinearSvmState>(a.state).weights ==
        std::get<LinearSvmState>(b.state).weights);

  int correct = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (gesture_code(predict(a, x.row(i).transpose())) ==
        y[static_cast<std::size_t>(i)]) {
      ++correct;
    }
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(x.rows()) >= 0.95);
}

// ---------------------------------------------------------------- shared laws

TEST_CASE("predict agrees with the probability argmax for every kind") {
  SplitMix64 rng(60);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 8, 4, x, y);

  for (ModelKind kind : kAllKinds) {
    const TrainedModel m = fit(kind, x, y);
    for (int q = 0; q < 40; ++q) {
      Eigen::VectorXd probe(4);
      for (int j = 0; j < 4; ++j) probe(j) = 8.0 * (rng.next_uniform() - 0.5);
      const ProbaVector p = predict_proba(m, probe);
      const int chosen = gesture_code(predict(m, probe));
      CHECK(p(chosen) == doctest::Approx(p.maxCoeff()).epsilon(1e-12));
      CHECK(p.minCoeff() >= 0.0);
      CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-column affine rescaling leaves predictions unchanged") {
  constexpr ModelKind kInvariantKinds[] = {
      ModelKind::KNN, ModelKind::LDA, ModelKind::LogisticRegression,
      ModelKind::LinearSVM};
  SplitMix64 rng(71);
  for (int round = 0; round < 20; ++round) {
    Eigen::MatrixXd x;
    std::vector<int> y;
    make_blobs(rng, 6, 3, x, y);

    Eigen::VectorXd scale(3), offset(3);
    for (int j = 0; j < 3; ++j) {
      scale(j) = 0.05 + 20.0 * rng.next_uniform();
      offset(j) = 50.0 * (rng.next_uniform() - 0.5);
    }
    Eigen::MatrixXd rescaled = x;
    for (int j = 0; j < 3; ++j) {
      rescaled.col(j) = scale(j) * x.col(j).array() + offset(j);
    }

    Eigen::MatrixXd probes = random_features(rng, 10, 3, 5.0);
    for (ModelKind kind : kInvariantKinds) {
      Hyperparams hp;
      hp.seed = static_cast<std::uint64_t>(round);
      const TrainedModel plain = fit(kind, x, y, hp);
      const TrainedModel scaled = fit(kind, rescaled, y, hp);
      for (Eigen::Index q = 0; q < probes.rows(); ++q) {
        const Eigen::VectorXd probe = probes.row(q).transpose();
        const Eigen::VectorXd probe_scaled =
            (probe.array() * scale.array() + offset.array()).matrix();
        CHECK(predict(plain, probe) == predict(scaled, probe_scaled));
      }
    }
  }
}

TEST_CASE("fit rejects empty and malformed input") {
  Eigen::MatrixXd empty(0, 4);
  CHECK_THROWS_AS(fit(ModelKind::KNN, empty, {}), InsufficientClassData);

  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 4;
  CHECK_THROWS_AS(fit(ModelKind::KNN, x, {0, 9}), UnknownLabel);

  const TrainedModel m = fit(ModelKind::KNN, x, {0, 1});
  Eigen::VectorXd wrong(3);
  wrong << 1, 2, 3;
  CHECK_THROWS_AS(predict(m, wrong), DimensionError);
}

// ---------------------------------------------------------------- metrics

TEST_CASE("f1 reproduces the published score rows") {
  CHECK(f1_score(0.82, 1.00) == doctest::Approx(0.9011).epsilon(1e-3));
  CHECK(f1_score(0.67, 0.50) == doctest::Approx(0.5726).epsilon(1e-3));
  CHECK(f1_score(1.00, 0.75) == doctest::Approx(0.8571).epsilon(1e-3));
  CHECK(f1_score(0.0, 0.0) == 0.0);
}

TEST_CASE("report_from_confusion computes per-class metrics") {
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  confusion(0, 0) = 8;
  confusion(0, 1) = 2;  // two Fists predicted WaveIn
  confusion(1, 1) = 9;
  confusion(1, 0) = 1;
  confusion(2, 2) = 10;
  confusion(3, 3) = 10;
  confusion(4, 4) = 10;

  const EvalReport report = report_from_confusion(ModelKind::KNN, confusion);
  CHECK(report.accuracy == doctest::Approx(47.0 / 50.0));
  CHECK(report.per_class[0].precision == doctest::Approx(8.0 / 9.0));
  CHECK(report.per_class[0].recall == doctest::Approx(0.8));
  CHECK(report.per_class[0].support == 10);
  CHECK(report.per_class[1].precision == doctest::Approx(9.0 / 11.0));

  long support_total = 0;
  for (const auto& m : report.per_class) support_total += m.support;
  CHECK(support_total == 50);

  // A class that never occurs and is never predicted scores 0 across the board.
  ConfusionMatrix sparse = ConfusionMatrix::Zero();
  sparse(0, 0) = 5;
  const EvalReport degenerate = report_from_confusion(ModelKind::KNN, sparse);
  CHECK(degenerate.per_class[4].precision == 0.0);
  CHECK(degenerate.per_class[4].recall == 0.0);
  CHECK(degenerate.per_class[4].f1 == 0.0);
}

TEST_CASE("tenfold cross-validation is stratified and deterministic") {
  SplitMix64 rng(85);
  Eigen::MatrixXd x;
  std::vector<int> y;
  make_blobs(rng, 12, 4, x, y);

  synth::LabeledDataset data;
  data.features = x;
  for (int label : y) data.labels.push_back(gesture_from_code(label));

  Hyperparams hp;
  hp.knn_k = 1;
  const EvalReport a = cross_validate_10fold(ModelKind::KNN, data, 7, hp);
  const EvalReport b = cross_validate_10fold(ModelKind::KNN, data, 7, hp);
  CHECK(a.accuracy == 1.0);  // blobs are cleanly separable
  CHECK(a.confusion == b.confusion);
  CHECK(report_to_json(a) == report_to_json(b));

  long total = 0;
  for (int t = 0; t < kClassCount; ++t) {
    CHECK(a.confusion.row(t).sum() == 12);  // every row tested exactly once
    total += a.confusion.row(t).sum();
  }
  CHECK(total == data.size());

  // 9 rows in one class cannot be stratified across 10 folds.
  synth::LabeledDataset short_data = data;
  short_data.features.conservativeResize(57, 4);
  short_data.labels.resize(57);
  CHECK_THROWS_AS(cross_validate_10fold(ModelKind::KNN, short_data, 7, hp),
                  StratificationError);
}

TEST_CASE("report json carries fixed keys in order") {
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  confusion(0, 0) = 1;
  const std::string json = report_to_json(
      report_from_confusion(ModelKind::GaussianNB, confusion));
  CHECK(json.find("\"kind\": \"GaussianNB\"") != std::string::npos);
  const std::size_t kind_at = json.find("\"kind\"");
  const std::size_t accuracy_at = json.find("\"accuracy\"");
  const std::size_t per_class_at = json.find("\"per_class\"");
  const std::size_t confusion_at = json.find("\"confusion\"");
  CHECK(kind_at < accuracy_at);
  CHECK(accuracy_at < per_class_at);
  CHECK(per_class_at < confusion_at);
}
