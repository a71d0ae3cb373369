#include "myofuse/fusion.hpp"

#include "myofuse/errors.hpp"

namespace myofuse::fusion {

ModalityEvent ModalityEvent::gesture(std::uint64_t ts_ms, GestureLabel label,
                                     double confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw InvalidProbability("gesture confidence must lie in [0, 1]");
  }
  ModalityEvent e;
  e.source = Source::Gesture;
  e.timestamp_ms = ts_ms;
  e.label = label;
  e.confidence = confidence;
  return e;
}

ModalityEvent ModalityEvent::speech_cmd(std::uint64_t ts_ms,
                                        speech::SpeechCommand command) {
  ModalityEvent e;
  e.source = Source::Speech;
  e.timestamp_ms = ts_ms;
  e.command = command;
  return e;
}

CorrespondenceTable CorrespondenceTable::defaults() {
  CorrespondenceTable t;
  auto pair = [&t](GestureLabel g, speech::SpeechCommand c) {
    t.by_gesture_[static_cast<std::size_t>(gesture_code(g))] = c;
    t.by_command_[static_cast<std::size_t>(c)] = g;
  };
  pair(GestureLabel::DoubleTap, speech::SpeechCommand::MoveGripper);
  pair(GestureLabel::Fist, speech::SpeechCommand::MoveDown);
  pair(GestureLabel::FingersSpread, speech::SpeechCommand::MoveUp);
  pair(GestureLabel::WaveIn, speech::SpeechCommand::MoveLeft);
  pair(GestureLabel::WaveOut, speech::SpeechCommand::MoveRight);
  return t;
}

CorrespondenceTable CorrespondenceTable::from_pairs(
    const std::map<GestureLabel, speech::SpeechCommand>& pairs) {
  if (pairs.size() != kGestureCount) {
    throw Error("correspondence must pair all five gestures");
  }
  std::array<bool, speech::kCommandCount> command_used{};
  CorrespondenceTable t;
  for (const auto& [g, c] : pairs) {
    if (command_used[static_cast<std::size_t>(c)]) {
      throw Error("correspondence maps two gestures to '" +
                  std::string(speech::command_name(c)) + "'");
    }
    command_used[static_cast<std::size_t>(c)] = true;
    t.by_gesture_[static_cast<std::size_t>(gesture_code(g))] = c;
    t.by_command_[static_cast<std::size_t>(c)] = g;
  }
  return t;
}

speech::SpeechCommand CorrespondenceTable::command_for(GestureLabel g) const {
  return by_gesture_[static_cast<std::size_t>(gesture_code(g))];
}

GestureLabel CorrespondenceTable::gesture_for(speech::SpeechCommand c) const {
  return by_command_[static_cast<std::size_t>(c)];
}

arm::ArmAction action_for(GestureLabel g, const arm::ArmConfig& arm_config) {
  return arm_config.action_for_pin(arm::pin_for(g));
}

arm::ArmAction action_for(speech::SpeechCommand c,
                          const CorrespondenceTable& table,
                          const arm::ArmConfig& arm_config) {
  return action_for(table.gesture_for(c), arm_config);
}

FusedDecision fuse_priority(const std::optional<ModalityEvent>& gesture,
                            const std::optional<ModalityEvent>& speech,
                            double threshold,
                            const CorrespondenceTable& table,
                            const arm::ArmConfig& arm_config) {
  FusedDecision decision;

  const bool gesture_accepted =
      gesture && gesture->source == ModalityEvent::Source::Gesture &&
      gesture->confidence >= threshold;

  if (gesture_accepted) {
    decision.action = action_for(gesture->label, arm_config);
    decision.provenance = Provenance::GesturePrimary;
    decision.timestamp_ms = gesture->timestamp_ms;
    if (speech) {
      const arm::ArmAction speech_action =
          action_for(speech->command, table, arm_config);
      decision.conflict_flag = !(*decision.action == speech_action);
    }
    return decision;
  }

  if (speech) {
    decision.action = action_for(speech->command, table, arm_config);
    decision.provenance = Provenance::SpeechFallback;
    decision.timestamp_ms = speech->timestamp_ms;
    return decision;
  }

  if (gesture) decision.timestamp_ms = gesture->timestamp_ms;
  return decision;  // NoCommand
}

ScoreFusion fuse_scores(const std::vector<Eigen::VectorXd>& score_vectors,
                        const std::vector<double>& weights) {
  if (score_vectors.empty()) {
    throw DimensionError("fuse_scores needs at least one score vector");
  }
  if (weights.size() != score_vectors.size()) {
    throw DimensionError("one weight per score vector required");
  }
  const Eigen::Index dim = score_vectors.front().size();

  double weight_total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InvalidWeights("weights must be nonnegative");
    weight_total += w;
  }
  if (weight_total <= 0.0) {
    throw InvalidWeights("weights must not all be zero");
  }

  Eigen::VectorXd fused = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < score_vectors.size(); ++i) {
    if (score_vectors[i].size() != dim) {
      throw DimensionError("score vectors differ in length");
    }
    fused += weights[i] * score_vectors[i];
  }
  fused /= weight_total;
  const double mass = fused.sum();
  if (mass > 0.0) fused /= mass;

  ScoreFusion result;
  result.fused = fused;
  result.decision = 0;
  for (Eigen::Index c = 1; c < dim; ++c) {
    if (fused(c) > fused(result.decision)) {
      result.decision = static_cast<int>(c);
    }
  }
  return result;
}

ScoreFusion fuse_scores(const std::vector<Eigen::VectorXd>& score_vectors) {
  return fuse_scores(score_vectors,
                     std::vector<double>(score_vectors.size(), 1.0));
}

Eigen::VectorXd fuse_features(const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out.head(a.size()) = a;
  out.tail(b.size()) = b;
  return out;
}

}  // namespace myofuse::fusion
