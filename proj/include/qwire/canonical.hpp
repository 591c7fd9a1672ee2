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

/** @file canonical.hpp
 *  @brief The three-term recursion
 *
 *      psi[j+1] = J(g[j-1], g[j]) psi[j] - (K(g[j]) / K(g[j-1])) psi[j-1]
 *
 *  and its polar form. The pair (x, y) = (psi[j+1], psi[j]) is written as
 *  rho (cos theta, sin theta); the phase map sends theta[j] to theta[j+1]
 *  and the radius factor is (rho[j+1] / rho[j])^2.
 *
 *  Phases live in [0, pi). Windings are tracked separately.
 */

#ifndef QWIRE_CANONICAL_HPP
#define QWIRE_CANONICAL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qwire/xfer.hpp"

namespace qwire {

/// |K| below this is treated as a zero of K.
inline constexpr double kSingularK = 1e-12;

/// General (complex) coefficients of the recursion for a unit with matrix M.
/// For real potentials sbar and s are real and kfun is purely imaginary;
/// kfun = i * K with K the real coefficient used by the engines. Only
/// ratios of K enter the recursion, so the factor i drops out.
struct CanonicalCoefficients {
  cplx sbar;
  cplx s;
  cplx kfun;
  bool degenerate = false;  ///< kfun vanishes: the recursion breaks down
};

struct RealCanonicalCoefficients {
  double sbar;
  double s;
  double kfun;
};

CanonicalCoefficients coefficients_from_matrix(const TransferMatrix& m);

/// Re/Im specialization for real potentials. Throws ComplexCoefficients if
/// the general coefficients carry an imaginary (for kfun: real) part above
/// `imag_tol`.
RealCanonicalCoefficients real_coefficients_from_matrix(const TransferMatrix& m,
                                                        double imag_tol = 1e-9);

struct StepCoefficients {
  double j;
  double k_ratio;  ///< K(current) / K(previous)
};

/// The recursion coefficients of a set of species at one energy.
class CanonicalModel {
 public:
  /// `j_table` is row-major: j_table[prev * species + cur].
  /// Throws SingularK when any |K| < kSingularK.
  CanonicalModel(double energy, std::vector<double> k_values, std::vector<double> j_table);

  std::size_t species_count() const noexcept { return k_.size(); }
  double energy() const noexcept { return energy_; }
  double k(std::size_t species) const { return k_[species]; }
  double j(std::size_t prev, std::size_t cur) const { return j_[prev * k_.size() + cur]; }
  double k_ratio(std::size_t prev, std::size_t cur) const { return k_[cur] / k_[prev]; }
  StepCoefficients step(std::size_t prev, std::size_t cur) const {
    return {j(prev, cur), k_ratio(prev, cur)};
  }

  /// True when J does not depend on the previous species and K is constant,
  /// i.e. the recursion reads psi[j+1] = J(g[j]) psi[j] - psi[j-1].
  bool single_site_coupling(double tol = 0.0) const;

 private:
  double energy_;
  std::vector<double> k_;
  std::vector<double> j_;
};

struct PhasePoint {
  double theta = 0.0;        ///< in [0, pi)
  std::int64_t winding = 0;  ///< extended value is theta + winding * pi

  /// Splits an arbitrary angle into a phase in [0, pi) and a winding.
  static PhasePoint from_angle(double angle);
  double extended() const;
};

/// j_coeff * psi_j - k_ratio * psi_jm1. Throws Overflow above 1e280.
double canonical_step(double psi_j, double psi_jm1, double j_coeff, double k_ratio);

/// Forward phase map, evaluated as atan2 of the mapped vector so that the
/// poles of tan never appear. Keeps the winding of the input.
PhasePoint phase_forward(PhasePoint theta, double j_coeff, double k_ratio);

/// Principal inverse phase map arctan((J - cot theta) / k_ratio) in
/// [-pi/2, pi/2], with the limit value at theta = 0. The winding of the
/// input is carried as +n pi (k_ratio > 0) or -n pi (k_ratio < 0).
double phase_inverse(PhasePoint theta, double j_coeff, double k_ratio);

/// (rho[j+1] / rho[j])^2 = cos^2 + (J cos - k_ratio sin)^2.
double radius_factor(double theta, double j_coeff, double k_ratio);

/// True iff J^2(g', g) > 4 K(g) / K(g') for every ordered pair: no states
/// can exist at this energy.
bool gap_condition(const CanonicalModel& model);

}  // namespace qwire

#endif  // QWIRE_CANONICAL_HPP
