#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "myofuse/fusion.hpp"
#include "myofuse/gesture.hpp"
#include "myofuse/speech.hpp"
#include "myofuse/synth.hpp"

namespace myofuse::trials {

/// Monte-Carlo result over blocks of repeated attempts.  error_percent and
/// sample_variance are always recomputable from the counts.
struct TrialReport {
  std::string subject;  // what was simulated, for the report only
  std::vector<long> per_block_error_counts;
  long block_size = 0;
  double error_percent = 0.0;
  double sample_variance = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, double> config_echo;  // stage rates actually used

  std::string to_json() const;  // fixed key order, 4-decimal display rounding
};

/// 100 * (sum of counts) / (blocks * block_size).
/// Throws EmptyInput on no counts; counts must lie in [0, block_size].
double error_percent(const std::vector<long>& counts, long block_size);

/// Unbiased sample variance (n - 1 denominator); needs at least two counts.
double sample_variance(const std::vector<long>& counts);

/// Arithmetic mean; throws EmptyInput when empty.
double mean_error(const std::vector<double>& errors);

/// Probability both stages fail: p_gesture * p_speech.
double expected_fused_error(double p_gesture, double p_speech);

/// Repeated single-modality attempts at the configured error rate,
/// n_blocks x block_size Bernoulli draws with per-block derived seeds.
TrialReport run_unimodal_trial(GestureLabel label,
                               const synth::ErrorRateTable& rates,
                               int n_blocks = 10, long block_size = 100,
                               std::uint64_t seed = 0);
TrialReport run_unimodal_trial(speech::SpeechCommand command,
                               const synth::ErrorRateTable& rates,
                               int n_blocks = 10, long block_size = 100,
                               std::uint64_t seed = 0);

/// Priority-fusion attempts for one gesture/command pair: the gesture errs
/// with its table rate; only then does the speech fallback run, erring with
/// its own rate; a fused error is counted iff both fail.
TrialReport run_fusion_trial(GestureLabel gesture_label,
                             const synth::ErrorRateTable& rates,
                             int n_blocks = 4, long block_size = 50,
                             std::uint64_t seed = 0,
                             const fusion::CorrespondenceTable& table =
                                 fusion::CorrespondenceTable::defaults());

}  // namespace myofuse::trials
