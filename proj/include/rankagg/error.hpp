/*
 * Copyright 2026 The rankagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rankagg {

// Error categories surfaced by the core library. The C API maps each one to
// a distinct status code.
enum class ErrorKind {
  kInvalidArgument,
  kDomain,
  kDimension,
  kDivergence,
  kDegenerate,
  kParse,
  kUndefinedMetric,
  kNonConvergence,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when the natural-parameter cap of an exp-link family is hit. Carries
// the offending iterate so callers can inspect where the solver blew up.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<double> iterate)
      : Error(ErrorKind::kDivergence, what), iterate_(std::move(iterate)) {}

  const std::vector<double>& iterate() const noexcept { return iterate_; }

 private:
  std::vector<double> iterate_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace rankagg
