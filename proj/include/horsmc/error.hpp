#pragma once

#include <stdexcept>
#include <string>

namespace horsmc {

/// User-facing error (bad input files, violated preconditions).
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error carrying a 1-based source position.
struct ParseError : Error {
  ParseError(int line, int col, const std::string& msg)
      : Error("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace horsmc
