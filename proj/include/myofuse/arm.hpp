#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "myofuse/gesture.hpp"

namespace myofuse::arm {

inline constexpr int kServoCount = 5;
inline constexpr int kGripperServo = 4;
inline constexpr std::array<int, 5> kPins = {3, 4, 5, 9, 10};

/// Fixed gesture-to-pin wiring: Fist->3, WaveIn->4, WaveOut->5,
/// FingersSpread->9, DoubleTap->10.
int pin_for(GestureLabel g);

/// One actuation step: pulse a pin and move the mapped servo.  The gripper
/// servo (index 4) toggles between 10 and 170 degrees; delta is ignored there.
struct ArmAction {
  int pin = 3;
  int servo_index = 0;
  double delta_degrees = 0.0;
};

bool operator==(const ArmAction& a, const ArmAction& b);

/// Pin-to-joint assignment.  Defaults: pins 4/5 swing the base servo 0 left
/// and right, pins 3/9 swing the shoulder servo 1 down and up, pin 10 toggles
/// the gripper; step size configurable.
struct ArmConfig {
  double step_degrees = 10.0;

  struct PinBinding {
    int servo_index;
    double direction;  // multiplies step_degrees; unused for the gripper
  };
  std::map<int, PinBinding> bindings = {
      {3, {1, -1.0}}, {4, {0, -1.0}}, {5, {0, +1.0}},
      {9, {1, +1.0}}, {10, {kGripperServo, 0.0}},
  };

  /// Action triggered by a pin pulse.  Throws UnknownPin for unmapped pins.
  ArmAction action_for_pin(int pin) const;
};

struct HistoryEntry {
  std::uint64_t timestamp_ms;
  ArmAction action;
};

struct ArmState {
  std::array<double, kServoCount> servo_angles;  // clamped to [0, 180]
  std::map<int, int> pin_levels;                 // pins from kPins -> 0/1
  std::vector<HistoryEntry> history;
};

/// All servos at 90 degrees, all pins low, empty history.
ArmState new_arm();

/// Pulses the action's pin (high then low within the step, recorded in
/// history) and moves the servo: clamp(angle + delta, 0, 180), or for the
/// gripper a toggle to 10 unless already there, in which case 170.
/// Throws UnknownPin when the pin is not one of the five mapped pins.
ArmState apply(const ArmState& s, const ArmAction& a,
               std::uint64_t timestamp_ms = 0);

/// "STATE a0 a1 a2 a3 a4" with one decimal per angle.
std::string state_line(const ArmState& s);

}  // namespace myofuse::arm
