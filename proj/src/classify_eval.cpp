#include <cmath>

#include <json.hpp>

#include "myofuse/classify.hpp"
#include "myofuse/errors.hpp"
#include "myofuse/rng.hpp"

namespace myofuse::ml {

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

EvalReport report_from_confusion(ModelKind kind,
                                 const ConfusionMatrix& confusion) {
  EvalReport report;
  report.kind = kind;
  report.confusion = confusion;

  long total = 0;
  long correct = 0;
  for (int t = 0; t < kClassCount; ++t) {
    for (int p = 0; p < kClassCount; ++p) {
      total += confusion(t, p);
      if (t == p) correct += confusion(t, p);
    }
  }
  report.accuracy =
      total > 0 ? static_cast<double>(correct) / static_cast<double>(total)
                : 0.0;

  for (int c = 0; c < kClassCount; ++c) {
    const long tp = confusion(c, c);
    const long predicted = confusion.col(c).sum();
    const long actual = confusion.row(c).sum();
    ClassMetrics& m = report.per_class[static_cast<std::size_t>(c)];
    m.precision = predicted > 0
                      ? static_cast<double>(tp) / static_cast<double>(predicted)
                      : 0.0;
    m.recall =
        actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    m.support = actual;
  }
  return report;
}

EvalReport cross_validate_10fold(ModelKind kind,
                                 const synth::LabeledDataset& data,
                                 std::uint64_t seed, const Hyperparams& hp) {
  constexpr int kFolds = 10;
  const Eigen::Index n = data.size();

  std::array<std::vector<Eigen::Index>, kClassCount> by_class;
  for (Eigen::Index i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(
                 gesture_code(data.labels[static_cast<std::size_t>(i)]))]
        .push_back(i);
  }
  for (int c = 0; c < kClassCount; ++c) {
    if (by_class[static_cast<std::size_t>(c)].size() <
        static_cast<std::size_t>(kFolds)) {
      throw StratificationError(
          "class " + std::string(gesture_name(gesture_from_code(c))) +
          " has fewer than 10 rows");
    }
  }

  // Shuffle each class with its own derived stream, then deal round-robin.
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (int c = 0; c < kClassCount; ++c) {
    auto& rows = by_class[static_cast<std::size_t>(c)];
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(c), 1));
    seeded_shuffle(rows, rng);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      fold_of[static_cast<std::size_t>(rows[i])] = static_cast<int>(i % kFolds);
    }
  }

  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  for (int fold = 0; fold < kFolds; ++fold) {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      (fold_of[static_cast<std::size_t>(i)] == fold ? test_rows : train_rows)
          .push_back(i);
    }

    Eigen::MatrixXd train_x(static_cast<Eigen::Index>(train_rows.size()),
                            data.features.cols());
    std::vector<int> train_y(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      train_x.row(static_cast<Eigen::Index>(i)) =
          data.features.row(train_rows[i]);
      train_y[i] =
          gesture_code(data.labels[static_cast<std::size_t>(train_rows[i])]);
    }

    Hyperparams fold_hp = hp;
    fold_hp.seed = derive_seed(seed, static_cast<std::uint64_t>(fold), 2);
    const TrainedModel model = fit(kind, train_x, train_y, fold_hp);

    for (Eigen::Index i : test_rows) {
      const GestureLabel truth = data.labels[static_cast<std::size_t>(i)];
      const GestureLabel predicted =
          predict(model, data.features.row(i).transpose());
      ++confusion(gesture_code(truth), gesture_code(predicted));
    }
  }
  return report_from_confusion(kind, confusion);
}

namespace {
double round4(double v) { return std::round(v * 10000.0) / 10000.0; }
}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(model_kind_name(report.kind));
  j["accuracy"] = round4(report.accuracy);
  j["per_class"] = nlohmann::ordered_json::array();
  for (int c = 0; c < kClassCount; ++c) {
    const ClassMetrics& m = report.per_class[static_cast<std::size_t>(c)];
    nlohmann::ordered_json entry;
    entry["label"] = std::string(gesture_name(gesture_from_code(c)));
    entry["precision"] = round4(m.precision);
    entry["recall"] = round4(m.recall);
    entry["f1"] = round4(m.f1);
    entry["support"] = m.support;
    j["per_class"].push_back(entry);
  }
  j["confusion"] = nlohmann::ordered_json::array();
  for (int t = 0; t < kClassCount; ++t) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int p = 0; p < kClassCount; ++p) {
      row.push_back(report.confusion(t, p));
    }
    j["confusion"].push_back(row);
  }
  return j.dump(2);
}

}  // namespace myofuse::ml
