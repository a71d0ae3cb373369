#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "myofuse/emg.hpp"
#include "myofuse/gesture.hpp"
#include "myofuse/rng.hpp"
#include "myofuse/speech.hpp"

namespace myofuse::synth {

/// Shape of the synthetic EMG classes.  Each gesture gets a distinct
/// amplitude profile across the 8 channels and a distinct carrier frequency,
/// plus seeded Gaussian noise shared across channels and a 60 Hz powerline
/// component for the notch to remove.
struct GeneratorConfig {
  Eigen::Matrix<double, kGestureCount, emg::kChannelCount> amplitude;
  Eigen::Matrix<double, kGestureCount, 1> carrier_hz;
  double noise_coeff = 0.2;      // scales the per-sample Gaussian term
  double powerline_coeff = 0.3;  // scales the 60 Hz interference term
  int window_samples = emg::kDefaultWindowSamples;
  double sample_rate_hz = emg::kDefaultSampleRateHz;

  /// amplitude[g][c] = 1 + 0.5 * ((g + c) mod 5); carriers 30/40/50/35/45 Hz
  /// (all clear of the 60 Hz notch).
  static GeneratorConfig defaults();
};

/// Feature rows with labels; `features` is n x 40, row i labeled labels[i].
struct LabeledDataset {
  Eigen::MatrixXd features;
  std::vector<GestureLabel> labels;
  std::uint64_t provenance_seed = 0;

  Eigen::Index size() const { return features.rows(); }
};

/// Deterministic raw window for (label, seed):
///   x_c[i] = A[g][c] sin(2 pi F[g] t_i + c pi/8)
///          + noise_coeff * A[g][c] * g_i
///          + powerline_coeff * sin(2 pi 60 t_i)
/// with g_i a Box-Muller Gaussian sequence from SplitMix64(seed), shared
/// across channels.
emg::EmgWindow generate_window(GestureLabel label, std::uint64_t seed,
                               const GeneratorConfig& config =
                                   GeneratorConfig::defaults());

/// 5 * n_per_class rows in class-major order; each window runs through DC
/// removal and the 60 Hz notch before feature extraction.  Row r of class g
/// uses derive_seed(seed, g, r), so any subset is reproducible independently.
LabeledDataset generate_dataset(int n_per_class, std::uint64_t seed,
                                const GeneratorConfig& config =
                                    GeneratorConfig::defaults());

/// CSV with header "f0,...,f39,label"; 12 significant digits, labels by
/// canonical name, UTF-8, LF line endings.
void save_csv(const LabeledDataset& data, const std::string& path);
LabeledDataset load_csv(const std::string& path);

enum class ModalityOutcome { Correct, Error };

/// One Bernoulli draw from the supplied stream: Error with probability
/// p_error.  Throws InvalidProbability outside [0, 1].
ModalityOutcome sample_modality_outcome(double p_error, SplitMix64& stream);

/// Per-gesture and per-command single-attempt error probabilities.
struct ErrorRateTable {
  std::map<GestureLabel, double> gesture_error;
  std::map<speech::SpeechCommand, double> speech_error;

  /// Measured single-modality rates: gestures Fist 13.6%, WaveIn 9.1%,
  /// WaveOut 9.5%, FingersSpread 14.5%, DoubleTap 20.6%; commands
  /// MoveRight 10%, MoveLeft 34.2%, MoveUp 8.9%, MoveDown 22.5%,
  /// MoveGripper 14.1%.
  static ErrorRateTable defaults();

  void validate() const;  // all ten keys present, probabilities in [0, 1]
};

}  // namespace myofuse::synth
