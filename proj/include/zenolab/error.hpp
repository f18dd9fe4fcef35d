// Copyright 2026 The Zenolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZENOLAB_ERROR_HPP_
#define ZENOLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace zenolab {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kModelViolation,   // the simulated model left the regime it is defined for
  kNumerical,        // integrator or positivity failure
  kInsufficientData  // e.g. a scan point with no observed errors
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) Fail(code, what);
}

}  // namespace zenolab

#endif  // ZENOLAB_ERROR_HPP_
