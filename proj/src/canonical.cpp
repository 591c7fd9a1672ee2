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

#include "qwire/canonical.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

CanonicalCoefficients coefficients_from_matrix(const TransferMatrix& m) {
  CanonicalCoefficients c;
  c.sbar = 0.5 * (m.m11 + m.m12 + m.m21 + m.m22);
  c.s = 0.5 * (m.m11 - m.m12 - m.m21 + m.m22);
  c.kfun = 0.5 * (m.m11 - m.m22 + m.m21 - m.m12);
  c.degenerate = std::abs(c.kfun) < kSingularK;
  return c;
}

RealCanonicalCoefficients real_coefficients_from_matrix(const TransferMatrix& m,
                                                        double imag_tol) {
  const CanonicalCoefficients g = coefficients_from_matrix(m);
  if (std::abs(g.sbar.imag()) > imag_tol || std::abs(g.s.imag()) > imag_tol ||
      std::abs(g.kfun.real()) > imag_tol)
    throw Error(ErrorCode::ComplexCoefficients,
                "transfer matrix is not of the real-potential form");
  return {m.m11.real() + m.m12.real(), m.m11.real() - m.m12.real(),
          m.m11.imag() - m.m12.imag()};
}

CanonicalModel::CanonicalModel(double energy, std::vector<double> k_values,
                               std::vector<double> j_table)
    : energy_(energy), k_(std::move(k_values)), j_(std::move(j_table)) {
  if (k_.empty()) throw Error(ErrorCode::InvalidArgument, "model without species");
  if (j_.size() != k_.size() * k_.size())
    throw Error(ErrorCode::InvalidArgument, "J table must be species x species");
  for (std::size_t g = 0; g < k_.size(); ++g) {
    if (!std::isfinite(k_[g]) || std::abs(k_[g]) < kSingularK)
      throw Error(ErrorCode::SingularK,
                  "K vanishes for species " + std::to_string(g) + " at E=" + std::to_string(energy));
  }
  for (double v : j_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite J");
}

bool CanonicalModel::single_site_coupling(double tol) const {
  const std::size_t n = k_.size();
  for (std::size_t g = 0; g < n; ++g) {
    if (std::abs(k_[g] - k_[0]) > tol) return false;
    for (std::size_t prev = 1; prev < n; ++prev)
      if (std::abs(j(prev, g) - j(0, g)) > tol) return false;
  }
  return true;
}

PhasePoint PhasePoint::from_angle(double angle) {
  const double turns = std::floor(angle / std::numbers::pi);
  double theta = angle - turns * std::numbers::pi;
  auto winding = static_cast<std::int64_t>(turns);
  if (theta >= std::numbers::pi) {  // rounding at the upper edge
    theta -= std::numbers::pi;
    ++winding;
  }
  if (theta < 0.0) theta = 0.0;
  return {theta, winding};
}

double PhasePoint::extended() const {
  return theta + static_cast<double>(winding) * std::numbers::pi;
}

double canonical_step(double psi_j, double psi_jm1, double j_coeff, double k_ratio) {
  const double next = j_coeff * psi_j - k_ratio * psi_jm1;
  if (!(std::abs(next) <= 1e280))
    throw Error(ErrorCode::Overflow, "canonical_step: amplitude needs rescaling");
  return next;
}

PhasePoint phase_forward(PhasePoint theta, double j_coeff, double k_ratio) {
  const double x = std::cos(theta.theta);
  const double y = std::sin(theta.theta);
  PhasePoint out = PhasePoint::from_angle(std::atan2(x, j_coeff * x - k_ratio * y));
  out.winding = theta.winding;
  return out;
}

double phase_inverse(PhasePoint theta, double j_coeff, double k_ratio) {
  const double s = std::sin(theta.theta);
  const double c = std::cos(theta.theta);
  const double sgn = k_ratio > 0.0 ? 1.0 : -1.0;
  // (J - cot) / k_ratio written as a ratio with a non-negative denominator
  const double principal = std::atan2(sgn * (j_coeff * s - c), std::abs(k_ratio) * s);
  return principal + sgn * static_cast<double>(theta.winding) * std::numbers::pi;
}

double radius_factor(double theta, double j_coeff, double k_ratio) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double b = j_coeff * c - k_ratio * s;
  return c * c + b * b;
}

bool gap_condition(const CanonicalModel& model) {
  const std::size_t n = model.species_count();
  for (std::size_t prev = 0; prev < n; ++prev) {
    for (std::size_t cur = 0; cur < n; ++cur) {
      const double j = model.j(prev, cur);
      if (!(j * j > 4.0 * model.k_ratio(prev, cur))) return false;
    }
  }
  return true;
}

}  // namespace qwire
