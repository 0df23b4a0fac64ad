#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace depthmap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidCircuit : public Error {
public:
  using Error::Error;
};

class CycleDetected : public Error {
public:
  CycleDetected() : Error("dependency graph contains a cycle") {}
};

/// Malformed QASM text. `line()` is 1-based.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class UnsupportedGate : public ParseError {
public:
  UnsupportedGate(std::size_t line, const std::string& name)
      : ParseError(line, "unsupported gate '" + name + "'"), name_(name) {}

  [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class IndexOutOfRange : public ParseError {
public:
  using ParseError::ParseError;
};

class DisconnectedGraph : public Error {
public:
  DisconnectedGraph() : Error("coupling graph is not connected") {}
};

class MalformedTopologyFile : public Error {
public:
  MalformedTopologyFile(std::size_t line, const std::string& message)
      : Error("topology line " + std::to_string(line) + ": " + message),
        line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class NotAnEdge : public Error {
public:
  NotAnEdge(std::size_t a, std::size_t b)
      : Error("no coupling edge between Q" + std::to_string(a) + " and Q" +
              std::to_string(b)) {}
};

class NoDirectionAvailable : public Error {
public:
  NoDirectionAvailable(std::size_t a, std::size_t b)
      : Error("no CNOT orientation available between Q" + std::to_string(a) +
              " and Q" + std::to_string(b)) {}
};

class QubitCountExceeded : public Error {
public:
  QubitCountExceeded(std::size_t logical, std::size_t physical)
      : Error("circuit uses " + std::to_string(logical) +
              " qubits but the architecture only has " +
              std::to_string(physical)) {}
};

class SearchExhausted : public Error {
public:
  using Error::Error;
};

class TooManyQubits : public Error {
public:
  TooManyQubits(std::size_t n, std::size_t limit)
      : Error("statevector simulation of " + std::to_string(n) +
              " qubits exceeds the limit of " + std::to_string(limit)) {}
};

class MeasureInVerification : public Error {
public:
  MeasureInVerification()
      : Error("measure gates must be stripped before simulation") {}
};

} // namespace depthmap
