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

// Independent reference values for the tests. Nothing here calls into the
// library; each oracle is a closed form or a brute-force computation.

#ifndef QWIRE_TESTS_ORACLES_HPP
#define QWIRE_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Textbook square barrier (psi'' = (V - k^2) psi), height v0, width l, energy e.
inline double square_barrier_t(double v0, double l, double e) {
  if (e > v0) {
    const double s = std::sin(std::sqrt(e - v0) * l);
    return 1.0 / (1.0 + v0 * v0 * s * s / (4.0 * e * (e - v0)));
  }
  if (e < v0) {
    const double s = std::sinh(std::sqrt(v0 - e) * l);
    return 1.0 / (1.0 + v0 * v0 * s * s / (4.0 * e * (v0 - e)));
  }
  return 1.0 / (1.0 + v0 * l * l / 4.0);
}

/// Free chain psi_j = sin(j ka) / sin(ka).
inline double chebyshev(int j, double ka) { return std::sin(j * ka) / std::sin(ka); }

/// Delta barrier v delta(x): |t|^2 = 1 / (1 + (v / 2k)^2).
inline double delta_t(double v, double k) {
  const double a = v / (2.0 * k);
  return 1.0 / (1.0 + a * a);
}

struct Mat {
  cplx a, b, c, d;
};

inline Mat mul(const Mat& x, const Mat& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

/// Random SU(1,1) element [[a, b], [conj b, conj a]], |a|^2 - |b|^2 = 1,
/// with boost parameter drawn from [0, r_max].
inline Mat random_su11(std::mt19937_64& rng, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = r_max * u(rng);
  const double al = 2.0 * std::numbers::pi * u(rng);
  const double be = 2.0 * std::numbers::pi * u(rng);
  const cplx a = std::polar(std::cosh(r), al), b = std::polar(std::sinh(r), be);
  return {a, b, std::conj(b), std::conj(a)};
}

/// Dense hard-wall tight-binding eigenvalue count below e by brute-force
/// Gaussian elimination of H - e (no pivoting needed: Sturm pivots).
inline std::size_t eig_count_dense(const std::vector<double>& eps, double e) {
  // Use the characteristic polynomials p_j(e) sign sequence computed in
  // extended precision with explicit renormalization (classic Sturm).
  long double p_prev = 1.0L, p = eps[0] - e;
  std::size_t changes = 0;
  auto sgn = [](long double v) { return (v > 0) - (v < 0); };
  int last = 1;
  auto visit = [&](long double v) {
    const int s = sgn(v);
    if (s != 0 && s != last) {
      ++changes;
      last = s;
    } else if (s != 0) {
      last = s;
    }
  };
  visit(p);
  for (std::size_t j = 1; j < eps.size(); ++j) {
    const long double next = (eps[j] - e) * p - p_prev;
    p_prev = p;
    p = next;
    const long double m = std::max(std::fabs(p), std::fabs(p_prev));
    if (m > 1e300L) {
      p /= m;
      p_prev /= m;
    }
    visit(p);
  }
  return changes;  // sign changes of det(H_j - e) count eigenvalues below e
}

}  // namespace oracle

#endif  // QWIRE_TESTS_ORACLES_HPP
