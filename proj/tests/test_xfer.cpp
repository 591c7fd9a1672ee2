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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "qwire/error.hpp"
#include "qwire/xfer.hpp"

using namespace qwire;
constexpr double kQuarterPi = std::numbers::pi / 4.0;

namespace {

TransferMatrix from(const oracle::Mat& m, double k = 1.0) { return {m.a, m.b, m.c, m.d, k}; }

double dist(const ScatteringAmplitudes& a, const ScatteringAmplitudes& b) {
  return std::max({std::abs(a.t - b.t), std::abs(a.rL - b.rL), std::abs(a.rR - b.rR)});
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("compose multiplies in chain order") {
  const TransferMatrix a = delta_potential_matrix(1.0, 2.0);
  const TransferMatrix b = free_propagation(2.0, 0.3);
  const TransferMatrix c = delta_potential_matrix(-0.4, 2.0);
  const std::vector<TransferMatrix> chain{a, b, c};
  const TransferMatrix m = compose(chain);
  const TransferMatrix ref = c * (b * a);
  CHECK(std::abs(m.m11 - ref.m11) < 1e-14);
  CHECK(std::abs(m.m12 - ref.m12) < 1e-14);
  CHECK(std::abs(m.m21 - ref.m21) < 1e-14);
  CHECK(std::abs(m.m22 - ref.m22) < 1e-14);

  const std::vector<TransferMatrix> ident(5, TransferMatrix::identity(2.0));
  CHECK(std::abs(compose(ident).m11 - 1.0) < 1e-15);
}

TEST_CASE("compose validates its input") {
  CHECK(code_of([] { compose(std::vector<TransferMatrix>{}); }) == ErrorCode::InvalidArgument);
  const std::vector<TransferMatrix> mixed{free_propagation(1.0, 1.0), free_propagation(1.1, 1.0)};
  CHECK(code_of([&] { compose(mixed); }) == ErrorCode::MismatchedWavenumber);
}

TEST_CASE("long products stay unimodular") {
  std::mt19937_64 rng(7);
  std::vector<TransferMatrix> chain;
  for (int i = 0; i < 10000; ++i) chain.push_back(from(oracle::random_su11(rng, 0.05)));
  CHECK(std::abs(compose(chain).det() - 1.0) <= 1e-10);
}

TEST_CASE("scattering amplitudes") {
  // delta barrier of strength 2 at k = 1: T = 1/2
  const ScatteringAmplitudes s = scattering_amplitudes(delta_potential_matrix(2.0, 1.0));
  CHECK(s.transmission() == doctest::Approx(oracle::delta_t(2.0, 1.0)).epsilon(1e-14));
  CHECK(s.transmission() + s.reflection() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(code_of([] { scattering_amplitudes({1.0, 0.0, 0.0, 0.0, 1.0}); }) ==
        ErrorCode::SingularMatrix);
}

TEST_CASE("multiple reflections sum to the matrix product") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const TransferMatrix m1 = from(oracle::random_su11(rng, 2.0));
    const TransferMatrix m2 = from(oracle::random_su11(rng, 2.0));
    const ScatteringAmplitudes direct = scattering_amplitudes(m2 * m1);
    const ScatteringAmplitudes summed =
        compose_scattering(scattering_amplitudes(m1), scattering_amplitudes(m2));
    REQUIRE(dist(direct, summed) < 1e-12);
  }
}

TEST_CASE("closed form holds beyond the geometric-series radius") {
  // General complex unimodular pair with |rL2 rR1| > 1.
  const TransferMatrix m1{cplx(1.0, 0.2), cplx(3.0, 0.0), cplx(0.1, 0.0), cplx(0.0, 0.0), 1.0};
  TransferMatrix m1u = m1;
  m1u.m22 = (1.0 + m1.m12 * m1.m21) / m1.m11;  // det = 1
  const TransferMatrix m2{cplx(1.0, 0.0), cplx(0.5, 0.0), cplx(-1.0, 0.0), cplx(0.0, 0.0), 1.0};
  TransferMatrix m2u = m2;
  m2u.m22 = (1.0 + m2.m12 * m2.m21) / m2.m11;
  const ScatteringAmplitudes s1 = scattering_amplitudes(m1u), s2 = scattering_amplitudes(m2u);
  REQUIRE(std::abs(s2.rL * s1.rR) > 1.0);
  CHECK(dist(compose_scattering(s1, s2), scattering_amplitudes(m2u * m1u)) < 1e-12);
}

TEST_CASE("resonance pole is reported") {
  const ScatteringAmplitudes s1{1.0, 0.0, 0.5};
  const ScatteringAmplitudes s2{1.0, 2.0, 0.0};
  CHECK(code_of([&] { compose_scattering(s1, s2); }) == ErrorCode::ResonancePole);
}

TEST_CASE("symmetry classes") {
  CHECK(classify_symmetry(free_propagation(1.0, 0.7)) == SymmetryClass::RealParity);
  CHECK(classify_symmetry(delta_potential_matrix(1.5, 1.0)) == SymmetryClass::RealParity);
  const TransferMatrix asym = delta_potential_matrix(2.0, 1.0) * free_propagation(1.0, 0.4) *
                              delta_potential_matrix(0.5, 1.0);
  CHECK(classify_symmetry(asym) == SymmetryClass::Real);
  const TransferMatrix pt{cplx(1.0, 0.5), cplx(0.0, 1.0), cplx(0.0, -0.25), cplx(1.0, -0.5), 1.0};
  CHECK(classify_symmetry(pt) == SymmetryClass::ComplexPT);
  CHECK(classify_symmetry({2.0, 1.0, -1.0, 0.0, 1.0}) == SymmetryClass::ComplexParity);
  CHECK(classify_symmetry({2.0, 1.0, 1.0, 1.0, 1.0}) == SymmetryClass::GeneralComplex);
  CHECK(code_of([] { classify_symmetry({2.0, 0.0, 0.0, 1.0, 1.0}); }) == ErrorCode::NotUnimodular);
  CHECK(to_string(SymmetryClass::ComplexPT) == "ComplexPT");
}

TEST_CASE("cut-off keeps transmission and unimodularity") {
  const TransferMatrix m = delta_potential_matrix(1.0, 1.3) * free_propagation(1.3, 0.2);
  const TransferMatrix c = apply_cutoff(m, 1.3, 0.7, 2.1);
  CHECK(std::abs(c.det() - 1.0) < 1e-14);
  CHECK(scattering_amplitudes(c).transmission() ==
        doctest::Approx(scattering_amplitudes(m).transmission()).epsilon(1e-14));
  const TransferMatrix same = apply_cutoff(m, 1.3, 0.0, 0.0);
  CHECK(std::abs(same.m12 - m.m12) < 1e-15);
  CHECK(code_of([&] { apply_cutoff(m, 0.0, 1.0, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { apply_cutoff(m, 1.0, -1.0, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("asymptotic matrix from elementary solutions") {
  // v delta(x): u(0) = 1, u'(0) = 0 -> cos kx on the left, cos kx + (v/k) sin kx
  // on the right; w(0) = 0, w'(0) = 1 -> sin(kx)/k on both sides. W = -1.
  const double v = 1.7, k = 0.9;
  const cplx ik(0.0, k);
  AsymptoticSolutions s;
  s.u1_minus = s.u2_minus = 0.5;
  s.u1_plus = 0.5 + v / (2.0 * ik);
  s.u2_plus = 0.5 - v / (2.0 * ik);
  s.v1_minus = s.v1_plus = 1.0 / (2.0 * ik);
  s.v2_minus = s.v2_plus = -1.0 / (2.0 * ik);
  const TransferMatrix m = asymptotic_matrix_from_solutions(s, -1.0, k);
  const TransferMatrix ref = delta_potential_matrix(v, k);
  CHECK(std::abs(m.m11 - ref.m11) < 1e-14);
  CHECK(std::abs(m.m12 - ref.m12) < 1e-14);
  CHECK(std::abs(m.m21 - ref.m21) < 1e-14);
  CHECK(std::abs(m.m22 - ref.m22) < 1e-14);
  CHECK(code_of([&] { asymptotic_matrix_from_solutions(s, 0.0, k); }) ==
        ErrorCode::DegenerateSolutions);
}

TEST_CASE("free propagation") {
  const TransferMatrix f = free_propagation(2.0, 0.25);
  CHECK(std::abs(f.m11 - std::polar(1.0, 0.5)) < 1e-15);
  CHECK(scattering_amplitudes(f).transmission() == doctest::Approx(1.0));
}

TEST_CASE("phase addition and trivial amplitudes") {
  const TransferMatrix p{std::polar(1.0, kQuarterPi), 0.0, 0.0, std::polar(1.0, -kQuarterPi), 1.0};
  const std::vector<TransferMatrix> two{p, p};
  const TransferMatrix m = compose(two);
  CHECK(std::abs(m.m11 - cplx(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(m.m22 - cplx(0.0, -1.0)) < 1e-15);
  const ScatteringAmplitudes id = scattering_amplitudes(TransferMatrix::identity());
  CHECK(id.t == cplx(1.0));
  CHECK(id.rL == cplx(0.0));
  CHECK(id.rR == cplx(0.0));
}

TEST_CASE("real potentials reflect equally from both sides") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const ScatteringAmplitudes s = scattering_amplitudes(from(oracle::random_su11(rng, 1.5)));
    CHECK(std::abs(s.rL) == doctest::Approx(std::abs(s.rR)).epsilon(1e-12));
  }
}

TEST_CASE("composition edge cases") {
  const ScatteringAmplitudes s1 = scattering_amplitudes(delta_potential_matrix(0.7, 1.2));
  const ScatteringAmplitudes free{1.0, 0.0, 0.0};
  CHECK(dist(compose_scattering(s1, free), s1) < 1e-15);

  const TransferMatrix d = delta_potential_matrix(2.0, 1.0);
  const std::vector<TransferMatrix> dd{d, d};
  const ScatteringAmplitudes s = scattering_amplitudes(d);
  CHECK(dist(compose_scattering(s, s), scattering_amplitudes(compose(dd))) < 1e-12);

  const ScatteringAmplitudes opaque{0.0, 1.0, 0.3};
  CHECK(std::abs(compose_scattering(opaque, s1).t) == 0.0);
}

TEST_CASE("table examples") {
  const double a = std::sqrt(0.75);
  const TransferMatrix pt{a, cplx(0.0, 0.5), cplx(0.0, 0.5), a, 1.0};
  CHECK(classify_symmetry(pt) == SymmetryClass::ComplexPT);
  const TransferMatrix rp{std::sqrt(2.0), cplx(0, 1), cplx(0, -1), std::sqrt(2.0), 1.0};
  CHECK(classify_symmetry(rp) == SymmetryClass::RealParity);
  // exact members stay in their class when the tolerance is scaled by 10
  for (double tol : {1e-10, 1e-9, 1e-8}) {
    CHECK(classify_symmetry(pt, tol) == SymmetryClass::ComplexPT);
    CHECK(classify_symmetry(rp, tol) == SymmetryClass::RealParity);
  }
}

TEST_CASE("cut-off of the identity") {
  const TransferMatrix c = apply_cutoff(TransferMatrix::identity(), 1.0, kQuarterPi * 2, kQuarterPi * 2);
  CHECK(std::abs(c.m11 + 1.0) < 1e-15);
  CHECK(std::abs(c.m22 + 1.0) < 1e-15);
  CHECK(std::abs(c.m12) < 1e-15);
}

TEST_CASE("asymptotic matrix: free particle and a solved square well") {
  const double k = 1.1;
  const cplx ik(0.0, k);
  AsymptoticSolutions f;
  f.u1_plus = f.u1_minus = 1.0;  // u = e^{ikx}
  f.v2_plus = f.v2_minus = 1.0;  // v = e^{-ikx}
  const TransferMatrix id = asymptotic_matrix_from_solutions(f, 2.0 * ik, k);  // W = v u' - v' u
  CHECK(std::abs(id.m11 - 1.0) < 1e-15);
  CHECK(std::abs(id.m22 - 1.0) < 1e-15);
  CHECK(std::abs(id.m12) < 1e-15);
  CHECK(std::abs(id.m21) < 1e-15);

  // well of depth v0 on [-a, a]; inside u = cos(kappa x), v = sin(kappa x) / kappa
  const double v0 = 2.3, a = 0.8, kap = std::sqrt(k * k + v0);
  auto outside = [&](double x, double val, double der, cplx& c1, cplx& c2) {
    c1 = 0.5 * (val + der / ik) * std::polar(1.0, -k * x);
    c2 = 0.5 * (val - der / ik) * std::polar(1.0, k * x);
  };
  AsymptoticSolutions s;
  outside(a, std::cos(kap * a), -kap * std::sin(kap * a), s.u1_plus, s.u2_plus);
  outside(-a, std::cos(kap * a), kap * std::sin(kap * a), s.u1_minus, s.u2_minus);
  outside(a, std::sin(kap * a) / kap, std::cos(kap * a), s.v1_plus, s.v2_plus);
  outside(-a, -std::sin(kap * a) / kap, std::cos(kap * a), s.v1_minus, s.v2_minus);
  const TransferMatrix w = asymptotic_matrix_from_solutions(s, -1.0, k);
  CHECK(std::abs(w.det() - 1.0) < 1e-12);
  CHECK(scattering_amplitudes(w).transmission() ==
        doctest::Approx(oracle::square_barrier_t(-v0, 2.0 * a, k * k)).epsilon(1e-12));
  CHECK(classify_symmetry(w) == SymmetryClass::RealParity);
}
