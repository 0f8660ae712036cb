// Copyright 2026 The intermed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERMED_ERRORS_HPP_
#define INTERMED_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace intermed {

enum class ErrorKind {
  kOutOfSupport,
  kZeroDensity,
  kNotRegular,
  kDomainError,
  kSaturatedCdf,
  kNeverSells,
  kSeparationViolated,
  kInvalidMechanism,
  kUnsupported,
  kParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kOutOfSupport: return "OutOfSupport";
    case ErrorKind::kZeroDensity: return "ZeroDensity";
    case ErrorKind::kNotRegular: return "NotRegular";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kSaturatedCdf: return "SaturatedCdf";
    case ErrorKind::kNeverSells: return "NeverSells";
    case ErrorKind::kSeparationViolated: return "SeparationViolated";
    case ErrorKind::kInvalidMechanism: return "InvalidMechanism";
    case ErrorKind::kUnsupported: return "Unsupported";
    case ErrorKind::kParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (and tests)
// can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace intermed

#endif  // INTERMED_ERRORS_HPP_
