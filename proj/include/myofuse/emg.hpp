#pragma once

#include <Eigen/Dense>

#include "myofuse/errors.hpp"

namespace myofuse::emg {

inline constexpr int kChannelCount = 8;
inline constexpr int kFeaturesPerChannel = 5;
inline constexpr int kFeatureCount = kChannelCount * kFeaturesPerChannel;  // 40
inline constexpr double kDefaultSampleRateHz = 200.0;
inline constexpr int kDefaultWindowSamples = 52;  // 260 ms at 200 Hz

/// One raw capture window: 8 channels (rows) by N time points (columns).
struct EmgWindow {
  Eigen::Matrix<double, kChannelCount, Eigen::Dynamic> samples;
  double sample_rate_hz = kDefaultSampleRateHz;

  Eigen::Index length() const { return samples.cols(); }
};

/// One-sided periodogram of a single channel.
struct PowerSpectrum {
  Eigen::VectorXd frequency_hz;  // k * fs / N, strictly increasing 0..Nyquist
  Eigen::VectorXd power;         // |X[k]|^2 / N, nonnegative
};

/// Per-channel features in channel-major order:
/// (ssi, max, min, mean_frequency_hz, mean_power) for channels 0..7.
using FeatureVector = Eigen::Matrix<double, kFeatureCount, 1>;

/// Subtracts each channel's arithmetic mean.  Throws InvalidSignal on
/// non-finite samples.
EmgWindow remove_dc_offset(const EmgWindow& w);

/// Second-order recursive notch centered on 60 Hz, run per channel from zero
/// initial state.  Zeros sit on the unit circle at +-w0, poles at 0.95 e^{+-jw0},
/// and the gain is normalized to 1 at DC.  Throws NyquistViolation when the
/// sample rate is at or below 120 Hz.
EmgWindow notch_filter_60hz(const EmgWindow& w);

/// One-sided periodogram of a channel: P[k] = |X[k]|^2 / N for
/// k = 0..floor(N/2), with X the plain (unnormalized) DFT.
/// Throws WindowTooShort for N < 4 and InvalidSignal on non-finite input.
PowerSpectrum power_spectrum(const Eigen::Ref<const Eigen::VectorXd>& channel,
                             double sample_rate_hz);

/// Five features per channel, assembled channel-major.  Mean frequency is the
/// power-weighted average of the one-sided spectrum (0 when total power is 0);
/// mean power is the average one-sided bin.
FeatureVector extract_features(const EmgWindow& w);

namespace detail {
void check_window(const EmgWindow& w);  // shape / finiteness / rate invariants
}

}  // namespace myofuse::emg
