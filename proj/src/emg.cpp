#include "myofuse/emg.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace myofuse::emg {

namespace detail {

void check_window(const EmgWindow& w) {
  if (w.samples.cols() < 4) {
    throw WindowTooShort("window has fewer than 4 samples");
  }
  if (!w.samples.allFinite()) {
    throw InvalidSignal("window contains non-finite samples");
  }
  if (!(w.sample_rate_hz > 0.0)) {
    throw InvalidSignal("sample rate must be positive");
  }
}

}  // namespace detail

EmgWindow remove_dc_offset(const EmgWindow& w) {
  detail::check_window(w);
  EmgWindow out = w;
  out.samples.colwise() -= w.samples.rowwise().mean();
  return out;
}

EmgWindow notch_filter_60hz(const EmgWindow& w) {
  detail::check_window(w);
  if (w.sample_rate_hz <= 120.0) {
    throw NyquistViolation("60 Hz notch requires a sample rate above 120 Hz");
  }

  constexpr double kNotchHz = 60.0;
  constexpr double kPoleRadius = 0.95;
  const double w0 = 2.0 * std::numbers::pi * kNotchHz / w.sample_rate_hz;
  const double c = std::cos(w0);
  // H(z) = b0 (1 - 2c z^-1 + z^-2) / (1 - 2rc z^-1 + r^2 z^-2), H(1) = 1.
  const double b0 = (1.0 - 2.0 * kPoleRadius * c + kPoleRadius * kPoleRadius) /
                    (2.0 - 2.0 * c);
  const double b1 = -2.0 * c * b0;
  const double b2 = b0;
  const double a1 = -2.0 * kPoleRadius * c;
  const double a2 = kPoleRadius * kPoleRadius;

  EmgWindow out = w;
  const Eigen::Index n = w.length();
  for (int ch = 0; ch < kChannelCount; ++ch) {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;  // zero initial state
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = w.samples(ch, i);
      const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      out.samples(ch, i) = y;
      x2 = x1;
      x1 = x;
      y2 = y1;
      y1 = y;
    }
  }
  return out;
}

PowerSpectrum power_spectrum(const Eigen::Ref<const Eigen::VectorXd>& channel,
                             double sample_rate_hz) {
  const Eigen::Index n = channel.size();
  if (n < 4) {
    throw WindowTooShort("spectrum needs at least 4 samples");
  }
  if (!channel.allFinite()) {
    throw InvalidSignal("channel contains non-finite samples");
  }
  if (!(sample_rate_hz > 0.0)) {
    throw InvalidSignal("sample rate must be positive");
  }

  const Eigen::Index bins = n / 2 + 1;
  PowerSpectrum spectrum;
  spectrum.frequency_hz.resize(bins);
  spectrum.power.resize(bins);

  // Direct DFT; windows are short (tens to hundreds of samples).
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (Eigen::Index k = 0; k < bins; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
      const double angle = step * static_cast<double>(k) * static_cast<double>(i);
      acc += channel(i) * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    spectrum.frequency_hz(k) =
        static_cast<double>(k) * sample_rate_hz / static_cast<double>(n);
    spectrum.power(k) = std::norm(acc) / static_cast<double>(n);
  }
  return spectrum;
}

FeatureVector extract_features(const EmgWindow& w) {
  detail::check_window(w);
  FeatureVector features;
  for (int ch = 0; ch < kChannelCount; ++ch) {
    const Eigen::VectorXd channel = w.samples.row(ch).transpose();
    const PowerSpectrum spectrum = power_spectrum(channel, w.sample_rate_hz);

    const double ssi = channel.squaredNorm();
    const double total_power = spectrum.power.sum();
    const double mean_frequency =
        total_power > 0.0 ? spectrum.frequency_hz.dot(spectrum.power) / total_power : 0.0;
    const double mean_power =
        total_power / static_cast<double>(spectrum.power.size());

    const int base = ch * kFeaturesPerChannel;
    features(base + 0) = ssi;
    features(base + 1) = channel.maxCoeff();
    features(base + 2) = channel.minCoeff();
    features(base + 3) = mean_frequency;
    features(base + 4) = mean_power;
  }
  return features;
}

}  // namespace myofuse::emg
