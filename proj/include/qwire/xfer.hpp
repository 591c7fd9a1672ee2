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

/** @file xfer.hpp
 *  @brief Continuous transmission matrices of one-dimensional potentials.
 *
 *  A TransferMatrix maps the amplitudes (A, B) of the plane waves
 *  exp(ikx), exp(-ikx) on the left of a potential to those on the right.
 *  Chains are composed by matrix products. The ordering convention used
 *  throughout the library is chain order: element 0 of a list is the
 *  leftmost unit and is applied first, so compose({M1, M2, M3}) returns
 *  M3 * M2 * M1.
 */

#ifndef QWIRE_XFER_HPP
#define QWIRE_XFER_HPP

#include <complex>
#include <span>
#include <string_view>

namespace qwire {

using cplx = std::complex<double>;

/// Default tolerance on |det M - 1|.
inline constexpr double kUnimodularTol = 1e-10;
/// Default tolerance for symmetry classification.
inline constexpr double kSymmetryTol = 1e-9;

struct TransferMatrix {
  cplx m11{1.0};
  cplx m12{0.0};
  cplx m21{0.0};
  cplx m22{1.0};
  double k = 1.0;  ///< wavenumber the matrix was built for

  static TransferMatrix identity(double k = 1.0) { return {1.0, 0.0, 0.0, 1.0, k}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
};

/// Plain 2x2 product a * b (b applied first). The wavenumber of `a` is kept.
TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

struct ScatteringAmplitudes {
  cplx t{1.0};
  cplx rL{0.0};
  cplx rR{0.0};

  double transmission() const { return std::norm(t); }
  double reflection() const { return std::norm(rL); }
};

enum class SymmetryClass { GeneralComplex, Real, RealParity, ComplexParity, ComplexPT };

std::string_view to_string(SymmetryClass c) noexcept;

/// Product M_N ... M_1 of a chain given in chain order. Every 64 factors
/// the partial product is divided by sqrt(det) so the result stays
/// unimodular over long chains. Throws MismatchedWavenumber if the
/// wavenumbers differ by more than 1e-12 relative.
TransferMatrix compose(std::span<const TransferMatrix> chain);

/// t = 1/m22, rL = -m21/m22, rR = m12/m22.
ScatteringAmplitudes scattering_amplitudes(const TransferMatrix& m);

/// Amplitudes of unit 1 followed (on the right) by unit 2, summed over all
/// multiple reflections in closed form. Valid outside the convergence
/// radius of the geometric series as well.
ScatteringAmplitudes compose_scattering(const ScatteringAmplitudes& s1,
                                        const ScatteringAmplitudes& s2);

SymmetryClass classify_symmetry(const TransferMatrix& m, double tol = kSymmetryTol);

/// Matrix of the potential truncated to [-d1, d2], given its asymptotic matrix.
TransferMatrix apply_cutoff(const TransferMatrix& asymptotic, double k, double d1, double d2);

/// Elementary solution coefficients at x -> +/- infinity:
///   u ~ U1 exp(ikx) + U2 exp(-ikx),   v ~ V1 exp(ikx) + V2 exp(-ikx).
struct AsymptoticSolutions {
  cplx u1_plus, u2_plus, v1_plus, v2_plus;
  cplx u1_minus, u2_minus, v1_minus, v2_minus;
};

/// Asymptotic transmission matrix from elementary-solution coefficients and
/// the Wronskian W = v u' - v' u.
TransferMatrix asymptotic_matrix_from_solutions(const AsymptoticSolutions& s, cplx wronskian,
                                                double k);

/// Delta barrier v * delta(x) in units where psi'' = (V - k^2) psi.
/// Convenience demo unit; not one of the models the engines are built around.
TransferMatrix delta_potential_matrix(double strength, double k);

/// Free propagation over a distance `length`: diag(exp(ik L), exp(-ik L)).
TransferMatrix free_propagation(double k, double length);

}  // namespace qwire

#endif  // QWIRE_XFER_HPP
