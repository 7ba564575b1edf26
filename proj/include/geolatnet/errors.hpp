#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geolatnet {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point or parameter outside its domain (e.g. a disk point on the boundary).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateAnchors : public Error {
 public:
  using Error::Error;
};

class TooFewNodes : public Error {
 public:
  using Error::Error;
};

class SamplerError : public Error {
 public:
  using Error::Error;
};

class SingleClass : public Error {
 public:
  using Error::Error;
};

class DivergedOptimization : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace geolatnet
