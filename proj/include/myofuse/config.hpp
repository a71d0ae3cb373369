#pragma once

#include <cstdint>
#include <string>

#include "myofuse/arm.hpp"
#include "myofuse/fusion.hpp"
#include "myofuse/speech.hpp"
#include "myofuse/synth.hpp"

namespace myofuse {

struct FusionSettings {
  double threshold = 0.6;        // gesture confidence acceptance bar
  std::uint64_t window_ms = 500;  // speech suppression window after a gesture
  fusion::CorrespondenceTable correspondence =
      fusion::CorrespondenceTable::defaults();
};

/// Runtime configuration shared by the CLI, the server and the trial
/// simulators.  JSON sections: {"fusion": {"threshold", "window_ms",
/// "correspondence"}, "rates": {"gesture": {...}, "speech": {...}},
/// "arm": {"step_degrees"}, "aliases_path": "..."}; all optional, defaults
/// fill the rest.
struct HarnessConfig {
  FusionSettings fusion;
  synth::ErrorRateTable rates = synth::ErrorRateTable::defaults();
  arm::ArmConfig arm_config;
  std::string aliases_path;  // empty selects the built-in table

  static HarnessConfig load(const std::string& path);
  static HarnessConfig from_json_text(const std::string& text);

  speech::AliasTable aliases() const;
  std::string to_json_text() const;
};

}  // namespace myofuse
