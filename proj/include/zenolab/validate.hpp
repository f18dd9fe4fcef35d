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

#ifndef ZENOLAB_VALIDATE_HPP_
#define ZENOLAB_VALIDATE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace zenolab {

struct InvariantCheck {
  std::string name;    // "<module>.<invariant>"
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  std::string notes;
  bool all_passed() const;
};

struct ValidateOptions {
  std::uint64_t seed = 20260101;
  // Test hook: feeds a density matrix with trace 1.1 through the
  // density-matrix invariant check.
  bool inject_trace_fault = false;
};

// Desk-scale run of every module invariant.
ValidationReport Validate(const ValidateOptions& options = {});

}  // namespace zenolab

#endif  // ZENOLAB_VALIDATE_HPP_
