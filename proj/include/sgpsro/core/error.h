// Copyright 2026 The sgpsro Authors. All rights reserved.
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

#ifndef SGPSRO_CORE_ERROR_H_
#define SGPSRO_CORE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace sgpsro {

enum class ErrorCode {
  kInvalidArgument,
  kFailedPrecondition,
  kNotFound,
  kConflict,
  kResourceExhausted,  // enumeration budgets, iteration budgets
  kNotConverged,
  kIo,
  kInternal,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported by throwing Error. The code lets callers
// (the HTTP layer in particular) map failures without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

namespace internal {

template <typename... Args>
std::string StrCat(const Args&... args) {
  std::ostringstream out;
  (out << ... << args);
  return out.str();
}

}  // namespace internal

template <typename... Args>
[[noreturn]] void Fail(ErrorCode code, const Args&... args) {
  throw Error(code, internal::StrCat(args...));
}

}  // namespace sgpsro

#define SGPSRO_CHECK(cond, ...)                                            \
  do {                                                                     \
    if (!(cond)) {                                                         \
      ::sgpsro::Fail(::sgpsro::ErrorCode::kInvalidArgument, __FILE__, ":", \
                     __LINE__, ": ", #cond, " failed. ", ##__VA_ARGS__);   \
    }                                                                      \
  } while (false)

#endif  // SGPSRO_CORE_ERROR_H_
