/* Copyright 2026 The qwire Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QWIRE_ERROR_HPP
#define QWIRE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qwire {

enum class ErrorCode {
  InvalidArgument,
  MismatchedWavenumber,
  SingularMatrix,
  ResonancePole,
  NotUnimodular,
  DegenerateSolutions,
  Overflow,
  SingularK,
  ComplexCoefficients,
  OutOfBand,
  InvalidSpec,
  UnstableProduct,
  ZeroTransmission,
  ZeroState,
  NotConverged,
  MonotonicityViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map them to exit codes or row flags.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qwire

#endif  // QWIRE_ERROR_HPP
