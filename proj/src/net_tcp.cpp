#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "myofuse/errors.hpp"
#include "myofuse/net.hpp"

namespace myofuse::net {

namespace {

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (host.empty() || host == "0.0.0.0") {
    addr.sin_addr.s_addr = INADDR_ANY;
  } else if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw ConnectionError("not an IPv4 address: " + host);
  }
  return addr;
}

// Reads LF-terminated lines from a socket; returns false on EOF with no
// pending data.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  bool next_line(std::string& line) {
    while (true) {
      const std::size_t eol = pending_.find('\n');
      if (eol != std::string::npos) {
        line = pending_.substr(0, eol);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pending_.erase(0, eol + 1);
        return true;
      }
      char buffer[4096];
      const ssize_t got = ::recv(fd_, buffer, sizeof(buffer), 0);
      if (got <= 0) {
        if (pending_.empty()) return false;
        throw ProtocolError("connection closed mid-line");
      }
      pending_.append(buffer, static_cast<std::size_t>(got));
    }
  }

 private:
  int fd_;
  std::string pending_;
};

void send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    // MSG_NOSIGNAL: a peer that vanished mid-session must surface as an
    // error on this connection, not as SIGPIPE for the whole process.
    const ssize_t n =
        ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      throw ConnectionError("send failed: " + std::string(std::strerror(errno)));
    }
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace

TcpServer::TcpServer(const std::string& bind_address, std::uint16_t port,
                     const HarnessConfig& config)
    : config_(config) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw ConnectionError("socket: " + std::string(std::strerror(errno)));
  }
  const int enable = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &enable, sizeof(enable));

  sockaddr_in addr = make_address(bind_address, port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string what = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw ConnectionError("bind: " + what);
  }
  if (::listen(listen_fd_, 8) != 0) {
    const std::string what = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw ConnectionError("listen: " + what);
  }

  sockaddr_in bound{};
  socklen_t bound_len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &bound_len);
  port_ = ntohs(bound.sin_port);
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::stop() {
  stopping_ = true;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void TcpServer::run() {
  // Fusion timeline and arm state live for the whole server run; connections
  // are serviced one at a time.
  SessionEngine engine(config_);
  while (!stopping_ && !engine.quit_requested()) {
    const int connection = ::accept(listen_fd_, nullptr, nullptr);
    if (connection < 0) {
      if (stopping_) break;
      if (errno == EINTR) continue;
      break;  // listening socket gone
    }
    serve_connection(connection, engine);
    ::close(connection);
  }
}

void TcpServer::serve_connection(int connection_fd, SessionEngine& engine) {
  LineReader reader(connection_fd);
  std::string line;
  try {
    while (!engine.quit_requested() && reader.next_line(line)) {
      send_all(connection_fd, engine.handle_line(line) + "\n");
    }
  } catch (const Error&) {
    // Client vanished mid-request; drop the connection, keep serving.
  }
}

std::vector<std::string> client_send(const std::string& host,
                                     std::uint16_t port,
                                     const std::vector<std::string>& requests) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) {
    throw ConnectionError("socket: " + std::string(std::strerror(errno)));
  }
  sockaddr_in addr = make_address(host.empty() ? "127.0.0.1" : host, port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string what = std::strerror(errno);
    ::close(fd);
    throw ConnectionError("connect: " + what);
  }

  std::vector<std::string> replies;
  try {
    LineReader reader(fd);
    for (const std::string& request : requests) {
      send_all(fd, request + "\n");
      std::string reply;
      if (!reader.next_line(reply)) {
        throw ProtocolError("server closed before replying");
      }
      replies.push_back(reply);
    }
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  return replies;
}

}  // namespace myofuse::net
