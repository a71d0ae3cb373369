#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "myofuse/arm.hpp"
#include "myofuse/gesture.hpp"
#include "myofuse/speech.hpp"

namespace myofuse::fusion {

/// A timestamped observation from one modality.
struct ModalityEvent {
  enum class Source { Gesture, Speech };

  Source source;
  std::uint64_t timestamp_ms = 0;
  GestureLabel label = GestureLabel::Fist;  // gesture payload
  double confidence = 0.0;                  // gesture payload, in [0, 1]
  speech::SpeechCommand command = speech::SpeechCommand::MoveRight;  // speech

  static ModalityEvent gesture(std::uint64_t ts_ms, GestureLabel label,
                               double confidence);
  static ModalityEvent speech_cmd(std::uint64_t ts_ms,
                                  speech::SpeechCommand command);
};

enum class Provenance { GesturePrimary, SpeechFallback, NoCommand };

struct FusedDecision {
  std::optional<arm::ArmAction> action;  // empty iff provenance == NoCommand
  Provenance provenance = Provenance::NoCommand;
  bool conflict_flag = false;  // both present, gesture accepted, actions differ
  std::uint64_t timestamp_ms = 0;
};

/// Bijection pairing each gesture with its equivalent voice command.
/// Defaults: DoubleTap<->MoveGripper, Fist<->MoveDown, FingersSpread<->MoveUp,
/// WaveIn<->MoveLeft, WaveOut<->MoveRight.
class CorrespondenceTable {
 public:
  static CorrespondenceTable defaults();

  /// Builds from explicit pairs; throws Error unless the mapping is a
  /// bijection over all five gestures and all five commands.
  static CorrespondenceTable from_pairs(
      const std::map<GestureLabel, speech::SpeechCommand>& pairs);

  speech::SpeechCommand command_for(GestureLabel g) const;
  GestureLabel gesture_for(speech::SpeechCommand c) const;

 private:
  std::array<speech::SpeechCommand, kGestureCount> by_gesture_;
  std::array<GestureLabel, speech::kCommandCount> by_command_;
};

arm::ArmAction action_for(GestureLabel g, const arm::ArmConfig& arm_config);
arm::ArmAction action_for(speech::SpeechCommand c,
                          const CorrespondenceTable& table,
                          const arm::ArmConfig& arm_config);

/// Priority arbitration: a gesture at or above the confidence threshold wins
/// outright; otherwise speech, when present, acts as the fallback; with
/// neither usable the decision is empty.  Total and deterministic.
FusedDecision fuse_priority(const std::optional<ModalityEvent>& gesture,
                            const std::optional<ModalityEvent>& speech,
                            double threshold,
                            const CorrespondenceTable& table =
                                CorrespondenceTable::defaults(),
                            const arm::ArmConfig& arm_config = {});

struct ScoreFusion {
  Eigen::VectorXd fused;  // normalized weighted mean, sums to 1
  int decision = 0;       // argmax, ties to the lowest index
};

/// Weighted arithmetic mean of per-classifier score vectors (sum rule).
/// Throws DimensionError on mismatched lengths and InvalidWeights when the
/// weights are all zero (or negative).
ScoreFusion fuse_scores(const std::vector<Eigen::VectorXd>& score_vectors,
                        const std::vector<double>& weights);

/// Equal-weight sum rule.
ScoreFusion fuse_scores(const std::vector<Eigen::VectorXd>& score_vectors);

/// Feature-level fusion: plain concatenation, a then b.
Eigen::VectorXd fuse_features(const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b);

}  // namespace myofuse::fusion
