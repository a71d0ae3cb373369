#include "myofuse/trials.hpp"

#include <cmath>

#include <json.hpp>

#include "myofuse/errors.hpp"
#include "myofuse/rng.hpp"

namespace myofuse::trials {

double error_percent(const std::vector<long>& counts, long block_size) {
  if (counts.empty()) throw EmptyInput("no block counts");
  if (block_size < 1) throw Error("block_size must be at least 1");
  long total = 0;
  for (long c : counts) {
    if (c < 0 || c > block_size) {
      throw Error("block count outside [0, block_size]");
    }
    total += c;
  }
  return 100.0 * static_cast<double>(total) /
         (static_cast<double>(counts.size()) * static_cast<double>(block_size));
}

double sample_variance(const std::vector<long>& counts) {
  if (counts.size() < 2) {
    throw InsufficientData("sample variance needs at least two counts");
  }
  double mean = 0.0;
  for (long c : counts) mean += static_cast<double>(c);
  mean /= static_cast<double>(counts.size());
  double sum_sq = 0.0;
  for (long c : counts) {
    const double dev = static_cast<double>(c) - mean;
    sum_sq += dev * dev;
  }
  return sum_sq / (static_cast<double>(counts.size()) - 1.0);
}

double mean_error(const std::vector<double>& errors) {
  if (errors.empty()) throw EmptyInput("no error values");
  double sum = 0.0;
  for (double e : errors) sum += e;
  return sum / static_cast<double>(errors.size());
}

double expected_fused_error(double p_gesture, double p_speech) {
  if (!(p_gesture >= 0.0 && p_gesture <= 1.0) ||
      !(p_speech >= 0.0 && p_speech <= 1.0)) {
    throw InvalidProbability("stage error probabilities must lie in [0, 1]");
  }
  return p_gesture * p_speech;
}

namespace {

TrialReport finish_report(std::string subject, std::vector<long> counts,
                          long block_size, std::uint64_t seed) {
  TrialReport report;
  report.subject = std::move(subject);
  report.per_block_error_counts = std::move(counts);
  report.block_size = block_size;
  report.seed = seed;
  report.error_percent = error_percent(report.per_block_error_counts, block_size);
  report.sample_variance = report.per_block_error_counts.size() >= 2
                               ? sample_variance(report.per_block_error_counts)
                               : 0.0;
  return report;
}

std::vector<long> run_blocks(double p_error, int n_blocks, long block_size,
                             std::uint64_t seed, std::uint64_t stream_tag) {
  if (n_blocks < 1 || block_size < 1) {
    throw Error("n_blocks and block_size must be at least 1");
  }
  std::vector<long> counts;
  counts.reserve(static_cast<std::size_t>(n_blocks));
  for (int b = 0; b < n_blocks; ++b) {
    SplitMix64 stream(derive_seed(seed, stream_tag, static_cast<std::uint64_t>(b)));
    long errors = 0;
    for (long i = 0; i < block_size; ++i) {
      if (synth::sample_modality_outcome(p_error, stream) ==
          synth::ModalityOutcome::Error) {
        ++errors;
      }
    }
    counts.push_back(errors);
  }
  return counts;
}

}  // namespace

TrialReport run_unimodal_trial(GestureLabel label,
                               const synth::ErrorRateTable& rates,
                               int n_blocks, long block_size,
                               std::uint64_t seed) {
  rates.validate();
  const double p = rates.gesture_error.at(label);
  auto counts = run_blocks(p, n_blocks, block_size, seed,
                           0x100 + static_cast<std::uint64_t>(gesture_code(label)));
  TrialReport report = finish_report("gesture:" + std::string(gesture_name(label)),
                                     std::move(counts), block_size, seed);
  report.config_echo = {{"p_error", p}};
  return report;
}

TrialReport run_unimodal_trial(speech::SpeechCommand command,
                               const synth::ErrorRateTable& rates,
                               int n_blocks, long block_size,
                               std::uint64_t seed) {
  rates.validate();
  const double p = rates.speech_error.at(command);
  auto counts = run_blocks(p, n_blocks, block_size, seed,
                           0x200 + static_cast<std::uint64_t>(command));
  TrialReport report = finish_report(
      "speech:" + std::string(speech::command_name(command)),
      std::move(counts), block_size, seed);
  report.config_echo = {{"p_error", p}};
  return report;
}

TrialReport run_fusion_trial(GestureLabel gesture_label,
                             const synth::ErrorRateTable& rates,
                             int n_blocks, long block_size, std::uint64_t seed,
                             const fusion::CorrespondenceTable& table) {
  if (n_blocks < 1 || block_size < 1) {
    throw Error("n_blocks and block_size must be at least 1");
  }
  rates.validate();
  const speech::SpeechCommand command = table.command_for(gesture_label);
  const double p_gesture = rates.gesture_error.at(gesture_label);
  const double p_speech = rates.speech_error.at(command);

  std::vector<long> counts;
  counts.reserve(static_cast<std::size_t>(n_blocks));
  for (int b = 0; b < n_blocks; ++b) {
    SplitMix64 stream(derive_seed(
        seed, 0x300 + static_cast<std::uint64_t>(gesture_code(gesture_label)),
        static_cast<std::uint64_t>(b)));
    long errors = 0;
    for (long i = 0; i < block_size; ++i) {
      // Speech only runs as the fallback, so its draw happens only on a
      // gesture miss.
      if (synth::sample_modality_outcome(p_gesture, stream) ==
              synth::ModalityOutcome::Error &&
          synth::sample_modality_outcome(p_speech, stream) ==
              synth::ModalityOutcome::Error) {
        ++errors;
      }
    }
    counts.push_back(errors);
  }
  TrialReport report =
      finish_report("fusion:" + std::string(speech::command_name(command)) +
                        "&" + std::string(gesture_name(gesture_label)),
                    std::move(counts), block_size, seed);
  report.config_echo = {{"p_gesture", p_gesture}, {"p_speech", p_speech}};
  return report;
}

namespace {
double round4(double v) { return std::round(v * 10000.0) / 10000.0; }
}  // namespace

std::string TrialReport::to_json() const {
  nlohmann::ordered_json j;
  j["subject"] = subject;
  j["n_blocks"] = per_block_error_counts.size();
  j["block_size"] = block_size;
  j["per_block_error_counts"] = per_block_error_counts;
  j["error_percent"] = round4(error_percent);
  j["sample_variance"] = round4(sample_variance);
  j["seed"] = seed;
  j["config"] = config_echo;  // std::map keeps the key order stable
  return j.dump(2);
}

}  // namespace myofuse::trials
