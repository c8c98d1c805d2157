#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace caslgp {

enum class ErrorKind {
  argument,
  parse,
  contract,
  io,
  degenerate_spectrum,
  slicing,
  conditioning,
  degenerate_training,
  under_populated_cluster,
  degenerate_metric,
  sampling_failure,
  unsupported_distribution,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so front ends can
// report it in a single machine-parsable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace caslgp
