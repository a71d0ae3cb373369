#include "myofuse/arm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "myofuse/errors.hpp"

namespace myofuse::arm {

int pin_for(GestureLabel g) {
  switch (g) {
    case GestureLabel::Fist: return 3;
    case GestureLabel::WaveIn: return 4;
    case GestureLabel::WaveOut: return 5;
    case GestureLabel::FingersSpread: return 9;
    case GestureLabel::DoubleTap: return 10;
  }
  throw UnknownPin("unmapped gesture");
}

bool operator==(const ArmAction& a, const ArmAction& b) {
  return a.pin == b.pin && a.servo_index == b.servo_index &&
         a.delta_degrees == b.delta_degrees;
}

ArmAction ArmConfig::action_for_pin(int pin) const {
  const auto it = bindings.find(pin);
  if (it == bindings.end()) {
    throw UnknownPin("pin " + std::to_string(pin) + " is not mapped");
  }
  ArmAction action;
  action.pin = pin;
  action.servo_index = it->second.servo_index;
  action.delta_degrees = it->second.servo_index == kGripperServo
                             ? 0.0
                             : it->second.direction * step_degrees;
  return action;
}

ArmState new_arm() {
  ArmState s;
  s.servo_angles.fill(90.0);
  for (int pin : kPins) s.pin_levels[pin] = 0;
  return s;
}

ArmState apply(const ArmState& s, const ArmAction& a,
               std::uint64_t timestamp_ms) {
  if (s.pin_levels.find(a.pin) == s.pin_levels.end()) {
    throw UnknownPin("pin " + std::to_string(a.pin) + " is not mapped");
  }
  if (a.servo_index < 0 || a.servo_index >= kServoCount) {
    throw Error("servo index out of range");
  }

  ArmState next = s;
  // The pulse is instantaneous: high during the step, low again afterwards.
  next.pin_levels[a.pin] = 1;
  next.history.push_back({timestamp_ms, a});
  next.pin_levels[a.pin] = 0;

  double& angle = next.servo_angles[static_cast<std::size_t>(a.servo_index)];
  if (a.servo_index == kGripperServo) {
    angle = std::abs(angle - 10.0) < 1e-9 ? 170.0 : 10.0;
  } else {
    angle = std::clamp(angle + a.delta_degrees, 0.0, 180.0);
  }
  return next;
}

std::string state_line(const ArmState& s) {
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "STATE %.1f %.1f %.1f %.1f %.1f",
                s.servo_angles[0], s.servo_angles[1], s.servo_angles[2],
                s.servo_angles[3], s.servo_angles[4]);
  return buffer;
}

}  // namespace myofuse::arm
