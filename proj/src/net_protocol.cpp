#include <cmath>
#include <sstream>

#include "myofuse/errors.hpp"
#include "myofuse/net.hpp"

namespace myofuse::net {

namespace {

bool parse_u64(const std::string& text, std::uint64_t& out) {
  if (text.empty()) return false;
  out = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    const std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (out > (UINT64_MAX - digit) / 10) return false;
    out = out * 10 + digit;
  }
  return true;
}

bool parse_confidence(const std::string& text, double& out) {
  try {
    std::size_t consumed = 0;
    out = std::stod(text, &consumed);
    if (consumed != text.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return std::isfinite(out) && out >= 0.0 && out <= 1.0;
}

}  // namespace

std::variant<Request, RequestError> parse_request(const std::string& line) {
  std::istringstream in(line);
  std::string verb;
  in >> verb;

  if (verb == "STATE") {
    std::string extra;
    if (in >> extra) return RequestError{400, "unexpected-token"};
    return Request{StateQuery{}};
  }
  if (verb == "QUIT") {
    std::string extra;
    if (in >> extra) return RequestError{400, "unexpected-token"};
    return Request{Quit{}};
  }
  if (verb != "EVT") {
    return RequestError{400, "unknown-verb"};
  }

  std::string kind, ts_text;
  if (!(in >> kind >> ts_text)) {
    return RequestError{400, "missing-fields"};
  }
  std::uint64_t ts = 0;
  if (!parse_u64(ts_text, ts)) {
    return RequestError{400, "bad-timestamp"};
  }

  if (kind == "GESTURE") {
    std::string label_text, conf_text, extra;
    if (!(in >> label_text >> conf_text)) {
      return RequestError{400, "missing-fields"};
    }
    if (in >> extra) return RequestError{400, "unexpected-token"};
    const std::optional<GestureLabel> label = parse_gesture(label_text);
    if (!label) return RequestError{404, "unknown-label"};
    double confidence = 0.0;
    if (!parse_confidence(conf_text, confidence)) {
      return RequestError{400, "bad-confidence"};
    }
    return Request{EvtGesture{ts, *label, confidence}};
  }

  if (kind == "SPEECH") {
    std::string text;
    std::getline(in, text);
    const std::size_t start = text.find_first_not_of(' ');
    if (start == std::string::npos) return RequestError{400, "missing-text"};
    return Request{EvtSpeech{ts, text.substr(start)}};
  }

  return RequestError{400, "unknown-event-kind"};
}

std::string format_decision(const fusion::FusedDecision& decision) {
  std::string line = "DEC " + std::to_string(decision.timestamp_ms) + " ";
  line += decision.action ? "PIN" + std::to_string(decision.action->pin)
                          : "NONE";
  switch (decision.provenance) {
    case fusion::Provenance::GesturePrimary: line += " GESTURE"; break;
    case fusion::Provenance::SpeechFallback: line += " SPEECH"; break;
    case fusion::Provenance::NoCommand: line += " NONE"; break;
  }
  return line;
}

std::string format_error(const RequestError& error) {
  return "ERR " + std::to_string(error.code) + " " + error.detail;
}

SessionEngine::SessionEngine(const HarnessConfig& config)
    : config_(config),
      aliases_(config.aliases()),
      correspondence_(config.fusion.correspondence),
      arm_(arm::new_arm()) {}

std::string SessionEngine::handle_line(const std::string& line) {
  const auto parsed = parse_request(line);
  if (const auto* error = std::get_if<RequestError>(&parsed)) {
    return format_error(*error);
  }
  const Request& request = std::get<Request>(parsed);

  if (std::holds_alternative<StateQuery>(request)) {
    return arm::state_line(arm_);
  }
  if (std::holds_alternative<Quit>(request)) {
    quit_requested_ = true;
    fusion::FusedDecision ack;  // "DEC 0 NONE NONE" close handshake
    return format_decision(ack);
  }
  if (const auto* evt = std::get_if<EvtGesture>(&request)) {
    return handle(*evt);
  }
  return handle(std::get<EvtSpeech>(request));
}

std::string SessionEngine::handle(const EvtGesture& evt) {
  fusion::FusedDecision decision = fusion::fuse_priority(
      fusion::ModalityEvent::gesture(evt.timestamp_ms, evt.label,
                                     evt.confidence),
      std::nullopt, config_.fusion.threshold, correspondence_,
      config_.arm_config);

  if (decision.provenance == fusion::Provenance::GesturePrimary) {
    last_gesture_success_ms_ = evt.timestamp_ms;
    arm_ = arm::apply(arm_, *decision.action, evt.timestamp_ms);
  } else {
    last_gesture_failure_ms_ = evt.timestamp_ms;
  }
  return format_decision(decision);
}

std::string SessionEngine::handle(const EvtSpeech& evt) {
  fusion::FusedDecision decision;
  decision.timestamp_ms = evt.timestamp_ms;

  const speech::ResolveResult resolved = speech::resolve(evt.raw_text, aliases_);

  // A gesture success inside the preceding window keeps priority; the speech
  // event is absorbed.  NoMatch and Ambiguous both count as speech failures.
  const bool suppressed =
      last_gesture_success_ms_ && evt.timestamp_ms > *last_gesture_success_ms_ &&
      evt.timestamp_ms - *last_gesture_success_ms_ <= config_.fusion.window_ms;

  if (resolved.matched() && !suppressed) {
    decision = fusion::fuse_priority(
        std::nullopt,
        fusion::ModalityEvent::speech_cmd(evt.timestamp_ms, resolved.command),
        config_.fusion.threshold, correspondence_, config_.arm_config);
    arm_ = arm::apply(arm_, *decision.action, evt.timestamp_ms);
  }
  return format_decision(decision);
}

}  // namespace myofuse::net
