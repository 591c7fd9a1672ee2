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

#include "qwire/error.hpp"

namespace qwire {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MismatchedWavenumber: return "MismatchedWavenumber";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ResonancePole: return "ResonancePole";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::DegenerateSolutions: return "DegenerateSolutions";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SingularK: return "SingularK";
    case ErrorCode::ComplexCoefficients: return "ComplexCoefficients";
    case ErrorCode::OutOfBand: return "OutOfBand";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnstableProduct: return "UnstableProduct";
    case ErrorCode::ZeroTransmission: return "ZeroTransmission";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
  }
  return "Unknown";
}

}  // namespace qwire
