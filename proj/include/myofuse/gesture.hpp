#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace myofuse {

/// The five hand gestures the armband distinguishes.
/// Integer codes 0..4 in declaration order are part of the file and wire formats.
enum class GestureLabel : int {
  Fist = 0,
  WaveIn = 1,
  WaveOut = 2,
  FingersSpread = 3,
  DoubleTap = 4,
};

inline constexpr int kGestureCount = 5;

inline constexpr std::array<GestureLabel, kGestureCount> kAllGestures = {
    GestureLabel::Fist,          GestureLabel::WaveIn,    GestureLabel::WaveOut,
    GestureLabel::FingersSpread, GestureLabel::DoubleTap,
};

/// Canonical name, used in CSV files and JSON reports ("Fist", "WaveIn", ...).
std::string_view gesture_name(GestureLabel g);

/// Wire-protocol name, used in EVT GESTURE lines ("FIST", "WAVE_IN", ...).
std::string_view gesture_wire_name(GestureLabel g);

/// Accepts either the canonical or the wire form; nullopt if neither matches.
std::optional<GestureLabel> parse_gesture(std::string_view name);

inline int gesture_code(GestureLabel g) { return static_cast<int>(g); }

GestureLabel gesture_from_code(int code);  // throws UnknownLabel outside 0..4

}  // namespace myofuse
