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

#include "qwire/xfer.hpp"

#include <cmath>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

namespace {

constexpr std::size_t kRenormInterval = 64;

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

void check_same_k(double k0, double k1) {
  const double scale = std::max(std::abs(k0), std::abs(k1));
  if (std::abs(k0 - k1) > 1e-12 * scale)
    throw Error(ErrorCode::MismatchedWavenumber,
                "k=" + std::to_string(k0) + " vs k=" + std::to_string(k1));
}

}  // namespace

std::string_view to_string(SymmetryClass c) noexcept {
  switch (c) {
    case SymmetryClass::GeneralComplex: return "GeneralComplex";
    case SymmetryClass::Real: return "Real";
    case SymmetryClass::RealParity: return "RealParity";
    case SymmetryClass::ComplexParity: return "ComplexParity";
    case SymmetryClass::ComplexPT: return "ComplexPT";
  }
  return "?";
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22, a.k};
}

TransferMatrix compose(std::span<const TransferMatrix> chain) {
  if (chain.empty()) throw Error(ErrorCode::InvalidArgument, "compose: empty chain");
  TransferMatrix acc = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    check_same_k(chain.front().k, chain[i].k);
    acc = chain[i] * acc;
    if (i % kRenormInterval == 0) {
      const cplx root = std::sqrt(acc.det());
      acc.m11 /= root;
      acc.m12 /= root;
      acc.m21 /= root;
      acc.m22 /= root;
    }
  }
  acc.k = chain.front().k;
  return acc;
}

ScatteringAmplitudes scattering_amplitudes(const TransferMatrix& m) {
  if (std::abs(m.m22) < 1e-300)
    throw Error(ErrorCode::SingularMatrix, "scattering_amplitudes: |m22| vanishes");
  return {1.0 / m.m22, -m.m21 / m.m22, m.m12 / m.m22};
}

ScatteringAmplitudes compose_scattering(const ScatteringAmplitudes& s1,
                                        const ScatteringAmplitudes& s2) {
  const cplx denom = 1.0 - s2.rL * s1.rR;
  if (std::abs(denom) < 1e-14)
    throw Error(ErrorCode::ResonancePole, "compose_scattering: 1 - rL2 rR1 vanishes");
  return {s1.t * s2.t / denom, s1.rL + s2.rL * s1.t * s1.t / denom,
          s2.rR + s1.rR * s2.t * s2.t / denom};
}

SymmetryClass classify_symmetry(const TransferMatrix& m, double tol) {
  if (std::abs(m.det() - 1.0) > tol)
    throw Error(ErrorCode::NotUnimodular, "|det - 1| = " + std::to_string(std::abs(m.det() - 1.0)));

  const bool conj_diag = close(m.m22, std::conj(m.m11), tol);
  const bool conj_off = close(m.m21, std::conj(m.m12), tol);
  const bool parity = close(m.m21, -m.m12, tol);
  const bool imag_off = std::abs(m.m12.real()) <= tol && std::abs(m.m21.real()) <= tol;

  // RealParity is the intersection of any two of the other special classes,
  // so it has to be tested first.
  if (conj_diag && conj_off && parity) return SymmetryClass::RealParity;
  if (conj_diag && conj_off) return SymmetryClass::Real;
  if (conj_diag && imag_off) return SymmetryClass::ComplexPT;
  if (parity) return SymmetryClass::ComplexParity;
  return SymmetryClass::GeneralComplex;
}

TransferMatrix apply_cutoff(const TransferMatrix& m, double k, double d1, double d2) {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "apply_cutoff: k must be positive");
  if (d1 < 0.0 || d2 < 0.0)
    throw Error(ErrorCode::InvalidArgument, "apply_cutoff: cut-off distances must be >= 0");
  const cplx diag = std::polar(1.0, k * (d2 + d1));
  const cplx off = std::polar(1.0, k * (d2 - d1));
  return {m.m11 * diag, m.m12 * off, m.m21 / off, m.m22 / diag, k};
}

TransferMatrix asymptotic_matrix_from_solutions(const AsymptoticSolutions& s, cplx wronskian,
                                                double k) {
  if (std::abs(wronskian) < 1e-14)
    throw Error(ErrorCode::DegenerateSolutions, "Wronskian vanishes");
  const cplx f = cplx(0.0, 2.0 * k) / wronskian;
  return {f * (s.u1_plus * s.v2_minus - s.v1_plus * s.u2_minus),
          f * (s.v1_plus * s.u1_minus - s.u1_plus * s.v1_minus),
          f * (s.u2_plus * s.v2_minus - s.v2_plus * s.u2_minus),
          f * (s.v2_plus * s.u1_minus - s.u2_plus * s.v1_minus), k};
}

TransferMatrix delta_potential_matrix(double strength, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_potential_matrix: k <= 0");
  const cplx ia(0.0, strength / (2.0 * k));
  return {1.0 - ia, -ia, ia, 1.0 + ia, k};
}

TransferMatrix free_propagation(double k, double length) {
  const cplx ph = std::polar(1.0, k * length);
  return {ph, 0.0, 0.0, std::conj(ph), k};
}

}  // namespace qwire
