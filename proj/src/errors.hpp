// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace urllcsim {

enum class ErrorCode {
  Parse,                // malformed scenario text / data file
  Validation,           // invariant violated; message names the field
  Misuse,               // operation undefined for the current mode
  Infeasible,           // query cannot be satisfied (e.g. allocation > budget)
  InsufficientSamples,  // statistical confidence rule not met
  Io,                   // file system failure
  Internal,
};

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_parse(const std::string& msg) {
  throw SimError(ErrorCode::Parse, msg);
}
[[noreturn]] inline void throw_validation(const std::string& msg) {
  throw SimError(ErrorCode::Validation, msg);
}
[[noreturn]] inline void throw_misuse(const std::string& msg) {
  throw SimError(ErrorCode::Misuse, msg);
}
[[noreturn]] inline void throw_infeasible(const std::string& msg) {
  throw SimError(ErrorCode::Infeasible, msg);
}
[[noreturn]] inline void throw_insufficient(const std::string& msg) {
  throw SimError(ErrorCode::InsufficientSamples, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
  throw SimError(ErrorCode::Io, msg);
}

}  // namespace urllcsim
