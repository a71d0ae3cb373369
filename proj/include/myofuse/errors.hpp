#pragma once

#include <stdexcept>
#include <string>

namespace myofuse {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- signal layer ---
struct InvalidSignal : Error {
  using Error::Error;
};
struct NyquistViolation : Error {
  using Error::Error;
};
struct WindowTooShort : Error {
  using Error::Error;
};

// --- dataset / file layer ---
struct ParseError : Error {
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};
struct UnknownLabel : Error {
  using Error::Error;
};
struct InvalidProbability : Error {
  using Error::Error;
};

// --- classifiers ---
struct InsufficientClassData : Error {
  using Error::Error;
};
struct StratificationError : Error {
  using Error::Error;
};

// --- speech normalizer ---
struct UnknownCommand : Error {
  UnknownCommand(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};
struct ConflictingAlias : Error {
  ConflictingAlias(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

// --- fusion ---
struct DimensionError : Error {
  using Error::Error;
};
struct InvalidWeights : Error {
  using Error::Error;
};

// --- arm simulator ---
struct UnknownPin : Error {
  using Error::Error;
};

// --- trial harness ---
struct EmptyInput : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};

// --- network ---
struct ConnectionError : Error {
  using Error::Error;
};
struct ProtocolError : Error {
  using Error::Error;
};

}  // namespace myofuse
