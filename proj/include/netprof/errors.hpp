#pragma once

#include <stdexcept>
#include <string>

namespace netprof {

// Problems with a user-supplied configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  enum class Kind { Syntax, Schema, Invariant };
  Kind kind;
  ConfigError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct UnknownPresetError : std::runtime_error {
  explicit UnknownPresetError(const std::string& name)
      : std::runtime_error("unknown preset: " + name) {}
};

// Shape propagation failure: spatial underflow or concat mismatch (CLI exit code 2).
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant, e.g. a schedule reading a freed buffer (CLI exit code 3).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace netprof
