#include "myofuse/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "myofuse/errors.hpp"

namespace myofuse::synth {

GeneratorConfig GeneratorConfig::defaults() {
  GeneratorConfig config;
  for (int g = 0; g < kGestureCount; ++g) {
    for (int c = 0; c < emg::kChannelCount; ++c) {
      config.amplitude(g, c) = 1.0 + 0.5 * static_cast<double>((g + c) % 5);
    }
  }
  config.carrier_hz << 30.0, 40.0, 50.0, 35.0, 45.0;
  return config;
}

emg::EmgWindow generate_window(GestureLabel label, std::uint64_t seed,
                               const GeneratorConfig& config) {
  const int n = config.window_samples;
  const int g = gesture_code(label);
  const double fs = config.sample_rate_hz;

  SplitMix64 rng(seed);
  Eigen::VectorXd noise(n);
  for (int i = 0; i < n; ++i) {
    noise(i) = rng.next_gaussian();
  }

  emg::EmgWindow window;
  window.sample_rate_hz = fs;
  window.samples.resize(emg::kChannelCount, n);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (int c = 0; c < emg::kChannelCount; ++c) {
    const double amp = config.amplitude(g, c);
    const double phase = static_cast<double>(c) * std::numbers::pi / 8.0;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      window.samples(c, i) = amp * std::sin(kTwoPi * config.carrier_hz(g) * t + phase) +
                             config.noise_coeff * amp * noise(i) +
                             config.powerline_coeff * std::sin(kTwoPi * 60.0 * t);
    }
  }
  return window;
}

LabeledDataset generate_dataset(int n_per_class, std::uint64_t seed,
                                const GeneratorConfig& config) {
  if (n_per_class < 1) {
    throw Error("n_per_class must be at least 1");
  }
  LabeledDataset data;
  data.provenance_seed = seed;
  data.features.resize(static_cast<Eigen::Index>(kGestureCount) * n_per_class,
                       emg::kFeatureCount);
  data.labels.reserve(static_cast<std::size_t>(kGestureCount) * n_per_class);

  Eigen::Index row = 0;
  for (GestureLabel label : kAllGestures) {
    for (int r = 0; r < n_per_class; ++r) {
      const std::uint64_t window_seed =
          derive_seed(seed, static_cast<std::uint64_t>(gesture_code(label)),
                      static_cast<std::uint64_t>(r));
      emg::EmgWindow window = generate_window(label, window_seed, config);
      window = emg::remove_dc_offset(window);
      window = emg::notch_filter_60hz(window);
      data.features.row(row++) = emg::extract_features(window).transpose();
      data.labels.push_back(label);
    }
  }
  return data;
}

void save_csv(const LabeledDataset& data, const std::string& path) {
  if (data.features.cols() != emg::kFeatureCount) {
    throw Error("dataset rows must have exactly 40 features");
  }
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) {
    throw Error("cannot open for writing: " + path);
  }
  for (int f = 0; f < emg::kFeatureCount; ++f) {
    out << 'f' << f << ',';
  }
  out << "label\n";

  char buffer[40];
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (int f = 0; f < emg::kFeatureCount; ++f) {
      std::snprintf(buffer, sizeof(buffer), "%.12g", data.features(i, f));
      out << buffer << ',';
    }
    out << gesture_name(data.labels[static_cast<std::size_t>(i)]) << '\n';
  }
  if (!out) {
    throw Error("write failed: " + path);
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

LabeledDataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open for reading: " + path);
  }

  std::string line;
  long line_number = 0;

  if (!std::getline(in, line)) {
    throw ParseError("empty file", 1);
  }
  ++line_number;
  {
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() != emg::kFeatureCount + 1 || header.back() != "label") {
      throw ParseError("bad header, expected f0..f39,label", line_number);
    }
    for (int f = 0; f < emg::kFeatureCount; ++f) {
      if (header[static_cast<std::size_t>(f)] != "f" + std::to_string(f)) {
        throw ParseError("bad header, expected f0..f39,label", line_number);
      }
    }
  }

  std::vector<Eigen::Matrix<double, emg::kFeatureCount, 1>> rows;
  std::vector<GestureLabel> labels;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != emg::kFeatureCount + 1) {
      throw ParseError("expected 40 feature columns and a label", line_number);
    }
    Eigen::Matrix<double, emg::kFeatureCount, 1> row;
    for (int f = 0; f < emg::kFeatureCount; ++f) {
      const std::string& cell = cells[static_cast<std::size_t>(f)];
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &consumed);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cell + "'", line_number);
      }
      if (consumed != cell.size() || !std::isfinite(value)) {
        throw ParseError("bad number '" + cell + "'", line_number);
      }
      row(f) = value;
    }
    const std::optional<GestureLabel> label = parse_gesture(cells.back());
    if (!label) {
      throw UnknownLabel("unknown label '" + cells.back() + "' on line " +
                         std::to_string(line_number));
    }
    rows.push_back(row);
    labels.push_back(*label);
  }

  if (rows.empty()) {
    throw ParseError("file has no data rows", line_number);
  }

  LabeledDataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()),
                       emg::kFeatureCount);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.features.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  data.labels = std::move(labels);
  return data;
}

ModalityOutcome sample_modality_outcome(double p_error, SplitMix64& stream) {
  if (!(p_error >= 0.0 && p_error <= 1.0)) {
    throw InvalidProbability("error probability must lie in [0, 1]");
  }
  return stream.next_uniform() < p_error ? ModalityOutcome::Error
                                         : ModalityOutcome::Correct;
}

ErrorRateTable ErrorRateTable::defaults() {
  ErrorRateTable table;
  table.gesture_error = {
      {GestureLabel::Fist, 0.136},          {GestureLabel::WaveIn, 0.091},
      {GestureLabel::WaveOut, 0.095},       {GestureLabel::FingersSpread, 0.145},
      {GestureLabel::DoubleTap, 0.206},
  };
  table.speech_error = {
      {speech::SpeechCommand::MoveRight, 0.100},
      {speech::SpeechCommand::MoveLeft, 0.342},
      {speech::SpeechCommand::MoveUp, 0.089},
      {speech::SpeechCommand::MoveDown, 0.225},
      {speech::SpeechCommand::MoveGripper, 0.141},
  };
  return table;
}

void ErrorRateTable::validate() const {
  for (GestureLabel g : kAllGestures) {
    const auto it = gesture_error.find(g);
    if (it == gesture_error.end()) {
      throw Error("missing gesture error rate for " +
                  std::string(gesture_name(g)));
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      throw InvalidProbability("gesture error rate out of [0, 1]");
    }
  }
  for (speech::SpeechCommand c : speech::kAllCommands) {
    const auto it = speech_error.find(c);
    if (it == speech_error.end()) {
      throw Error("missing speech error rate for " +
                  std::string(speech::command_name(c)));
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      throw InvalidProbability("speech error rate out of [0, 1]");
    }
  }
}

}  // namespace myofuse::synth
