#include "myofuse/gesture.hpp"

#include "myofuse/errors.hpp"

namespace myofuse {

namespace {
constexpr std::string_view kNames[kGestureCount] = {
    "Fist", "WaveIn", "WaveOut", "FingersSpread", "DoubleTap"};
constexpr std::string_view kWireNames[kGestureCount] = {
    "FIST", "WAVE_IN", "WAVE_OUT", "FINGERS_SPREAD", "DOUBLE_TAP"};
}  // namespace

std::string_view gesture_name(GestureLabel g) {
  return kNames[static_cast<int>(g)];
}

std::string_view gesture_wire_name(GestureLabel g) {
  return kWireNames[static_cast<int>(g)];
}

std::optional<GestureLabel> parse_gesture(std::string_view name) {
  for (int i = 0; i < kGestureCount; ++i) {
    if (name == kNames[i] || name == kWireNames[i]) {
      return static_cast<GestureLabel>(i);
    }
  }
  return std::nullopt;
}

GestureLabel gesture_from_code(int code) {
  if (code < 0 || code >= kGestureCount) {
    throw UnknownLabel("gesture code out of range: " + std::to_string(code));
  }
  return static_cast<GestureLabel>(code);
}

}  // namespace myofuse
