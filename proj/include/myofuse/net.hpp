#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "myofuse/arm.hpp"
#include "myofuse/config.hpp"
#include "myofuse/fusion.hpp"
#include "myofuse/speech.hpp"

namespace myofuse::net {

// Wire grammar, one LF-terminated line per request and per reply:
//   request = "EVT GESTURE" ts label conf | "EVT SPEECH" ts text
//           | "STATE" | "QUIT"
//   reply   = "DEC" ts ("PIN"digits | "NONE") ("GESTURE"|"SPEECH"|"NONE")
//           | "STATE" a0 a1 a2 a3 a4
//           | "ERR" code detail

struct EvtGesture {
  std::uint64_t timestamp_ms;
  GestureLabel label;
  double confidence;
};
struct EvtSpeech {
  std::uint64_t timestamp_ms;
  std::string raw_text;
};
struct StateQuery {};
struct Quit {};

using Request = std::variant<EvtGesture, EvtSpeech, StateQuery, Quit>;

struct RequestError {
  int code;  // 400 malformed, 404 unknown-label
  std::string detail;
};

/// Parses one request line (without its terminating LF).
std::variant<Request, RequestError> parse_request(const std::string& line);

std::string format_decision(const fusion::FusedDecision& decision);
std::string format_error(const RequestError& error);

/// Session-level fusion over the request timeline: an accepted gesture
/// decides immediately and opens a suppression window; speech decides only
/// when it resolves to a command and no accepted gesture lies within the
/// preceding window_ms.  Owns the simulated arm; decisions actuate it.
class SessionEngine {
 public:
  explicit SessionEngine(const HarnessConfig& config);

  /// One reply line (no LF) per request line.  Never throws on bad input;
  /// malformed lines yield ERR replies.  Returns quit_requested() true after
  /// a QUIT.
  std::string handle_line(const std::string& line);

  bool quit_requested() const { return quit_requested_; }
  const arm::ArmState& arm_state() const { return arm_; }

 private:
  std::string handle(const EvtGesture& evt);
  std::string handle(const EvtSpeech& evt);

  HarnessConfig config_;
  speech::AliasTable aliases_;
  fusion::CorrespondenceTable correspondence_;
  arm::ArmState arm_;
  std::optional<std::uint64_t> last_gesture_success_ms_;
  std::optional<std::uint64_t> last_gesture_failure_ms_;
  bool quit_requested_ = false;
};

/// Line-based TCP server.  Binds immediately (port 0 picks an ephemeral
/// port); run() accepts one connection at a time and serves it to completion;
/// a QUIT request acknowledges, closes the connection and ends run().
class TcpServer {
 public:
  TcpServer(const std::string& bind_address, std::uint16_t port,
            const HarnessConfig& config);
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }
  void run();
  void stop();  // unblocks run() from another thread

 private:
  void serve_connection(int connection_fd, SessionEngine& engine);

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  HarnessConfig config_;
  std::atomic<bool> stopping_{false};
};

/// Sends each request line and collects one reply line per request.
/// Throws ConnectionError when the server is unreachable and ProtocolError
/// when a reply is missing or unterminated.
std::vector<std::string> client_send(const std::string& host,
                                     std::uint16_t port,
                                     const std::vector<std::string>& requests);

}  // namespace myofuse::net
