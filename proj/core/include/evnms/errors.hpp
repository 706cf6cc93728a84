#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evnms {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(what + " '" + path + "'"), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed text input; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An event violated the stream contract (bounds or ordering).
/// `position` is the 0-based index of the event in its stream.
class StreamError : public Error {
 public:
  StreamError(std::size_t position, const std::string& what)
      : Error("event #" + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Invalid configuration value or unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace evnms
