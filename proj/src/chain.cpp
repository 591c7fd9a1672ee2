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

#include "qwire/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

namespace {

constexpr double kSpecTol = 1e-12;
constexpr std::size_t kRescaleInterval = 32;
constexpr double kRescaleAbove = 1e150;

void check_probability(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " must lie in [0, 1]");
}

template <class Weight>
std::uint32_t draw(Rng& rng, std::size_t n, Weight weight) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t b = 0; b < n; ++b) {
    const double w = weight(b);
    if (w <= 0.0) continue;
    acc += w;
    last = b;
    if (u < acc) return static_cast<std::uint32_t>(b);
  }
  return static_cast<std::uint32_t>(last);  // u in the rounding slack of the row sum
}

// Scales x and y by the same power of two (exact) and returns the exponent.
int rescale_pair(double& x, double& y) {
  const double m = std::max(std::abs(x), std::abs(y));
  if (m == 0.0 || !std::isfinite(m)) return 0;
  int e = 0;
  std::frexp(m, &e);
  x = std::ldexp(x, -e);
  y = std::ldexp(y, -e);
  return e;
}

}  // namespace

void DisorderSpec::validate() const {
  const std::size_t n = c.size();
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "no species");
  double sum = 0.0;
  for (double v : c) {
    check_probability(v, "concentration");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSpecTol)
    throw Error(ErrorCode::InvalidSpec, "concentrations sum to " + std::to_string(sum));
  if (p.empty()) return;
  if (p.size() != n * n) throw Error(ErrorCode::InvalidSpec, "pair table must be species x species");
  for (std::size_t g = 0; g < n; ++g) {
    double row = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      check_probability(p[g * n + b], "pair probability");
      row += p[g * n + b];
    }
    if (std::abs(row - 1.0) > kSpecTol)
      throw Error(ErrorCode::InvalidSpec,
                  "pair row " + std::to_string(g) + " sums to " + std::to_string(row));
  }
  for (std::size_t b = 0; b < n; ++b) {
    double flow = 0.0;
    for (std::size_t g = 0; g < n; ++g) flow += c[g] * p[g * n + b];
    if (std::abs(flow - c[b]) > kSpecTol)
      throw Error(ErrorCode::InvalidSpec,
                  "concentrations are not stationary under the pair table (species " +
                      std::to_string(b) + ")");
  }
}

DisorderSpec DisorderSpec::uncorrelated(std::vector<double> c, std::uint64_t seed) {
  DisorderSpec s{std::move(c), {}, seed};
  s.validate();
  return s;
}

DisorderSpec DisorderSpec::pure(std::size_t species, std::size_t which, std::uint64_t seed) {
  if (which >= species) throw Error(ErrorCode::InvalidSpec, "pure: species index out of range");
  std::vector<double> c(species, 0.0);
  c[which] = 1.0;
  return {std::move(c), {}, seed};
}

WireSequence generate_sequence(const DisorderSpec& spec, std::size_t n) {
  spec.validate();
  WireSequence seq;
  seq.seed = spec.seed;
  seq.species.resize(n);
  if (n == 0) return seq;
  Rng rng(spec.seed);
  const std::size_t s = spec.species_count();
  seq.species[0] = draw(rng, s, [&](std::size_t b) { return spec.c[b]; });
  for (std::size_t j = 1; j < n; ++j) {
    const std::size_t g = seq.species[j - 1];
    seq.species[j] = draw(rng, s, [&](std::size_t b) { return spec.pair(g, b); });
  }
  return seq;
}

void write_sequence(std::ostream& os, const WireSequence& seq) {
  for (std::size_t j = 0; j < seq.size(); ++j) os << (j + 1) << ' ' << seq.species[j] << '\n';
}

double StateTrajectory::log_rho() const {
  return log_scale + std::log(std::hypot(psi_next, psi_cur));
}

StateTrajectory propagate_canonical(const CanonicalModel& model, const WireSequence& seq,
                                    PropagateOptions opts) {
  const std::size_t n = seq.size();
  for (std::uint32_t g : seq.species)
    if (g >= model.species_count())
      throw Error(ErrorCode::InvalidArgument, "sequence refers to an unknown species");

  StateTrajectory tr;
  tr.n = n;
  tr.sign.resize(n + 1);
  tr.sign[0] = 1;
  if (opts.store_amplitudes) {
    tr.log_abs.resize(n + 1);
    tr.log_abs[0] = 0.0;
  }

  double prev = 0.0, cur = 1.0, log_scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint32_t g = seq.species[j];
    const std::uint32_t gp = j == 0 ? g : seq.species[j - 1];
    const double next = model.j(gp, g) * cur - model.k_ratio(gp, g) * prev;
    prev = cur;
    cur = next;
    tr.sign[j + 1] = static_cast<std::int8_t>((cur > 0.0) - (cur < 0.0));
    if (opts.store_amplitudes) tr.log_abs[j + 1] = std::log(std::abs(cur)) + log_scale;
    if ((j + 1) % kRescaleInterval == 0 || std::abs(cur) > kRescaleAbove) {
      log_scale += rescale_pair(cur, prev) * std::numbers::ln2;
      if (!std::isfinite(cur) || !std::isfinite(prev))
        throw Error(ErrorCode::Overflow, "amplitudes left the representable range");
    }
  }
  tr.log_scale = log_scale;
  tr.psi_next = cur;
  tr.psi_cur = prev;
  tr.theta = PhasePoint::from_angle(std::atan2(prev, cur));
  return tr;
}

namespace {

// Scattering through psi[n+1] = (2 - c[n]) psi[n] - psi[n-1] between free
// leads (c = 2 - 2 cos q). The product is accumulated on (psi, psi - psi_prev)
// so that small c (fine grids) are not swamped by the leading 2; long double
// keeps the phase error of 10^5 steps well below the discretization error.
LatticeScattering transmission_from_offsets(std::span<const double> c, double q) {
  if (!(q > 0.0 && q < std::numbers::pi))
    throw Error(ErrorCode::InvalidArgument, "lead wave number must lie in (0, pi)");
  using ld = long double;
  // columns: images of the unit vectors (psi, delta) = (1, 0) and (0, 1)
  ld p0 = 1, p1 = 0, d0 = 0, d1 = 1;
  double log_s = 0.0;
  for (double cn : c) {
    d0 -= static_cast<ld>(cn) * p0;
    d1 -= static_cast<ld>(cn) * p1;
    p0 += d0;
    p1 += d1;
    const ld m = std::max({std::abs(p0), std::abs(p1), std::abs(d0), std::abs(d1)});
    if (m > 1e100L) {
      int e = 0;
      std::frexp(static_cast<double>(m), &e);
      p0 = std::ldexp(p0, -e);
      p1 = std::ldexp(p1, -e);
      d0 = std::ldexp(d0, -e);
      d1 = std::ldexp(d1, -e);
      log_s += e * std::numbers::ln2;
    }
    if (!std::isfinite(static_cast<double>(p0)) || !std::isfinite(static_cast<double>(p1)))
      throw Error(ErrorCode::UnstableProduct, "recursion product is not finite");
  }
  // Amplitudes straight from the (psi, delta) product. Written in terms of
  // u = e^{iq} - 1 every term is O(q), so nothing cancels on fine grids:
  //   D = p0 conj(e) u + p1 |u|^2 - d0 + d1 u
  //   N = -p0 e u - p1 u^2 + d0 e^2 + d1 e u,   r = N / D.
  using lc = std::complex<ld>;
  const ld hq = static_cast<ld>(q) / 2;
  const lc e = std::polar(ld{1}, static_cast<ld>(q));
  const lc u = std::polar(2 * std::sin(hq), hq + std::numbers::pi_v<ld> / 2);
  const lc dd = p0 * std::conj(e) * u + p1 * std::norm(u) - d0 + d1 * u;
  const lc nn = -p0 * e * u - p1 * u * u + d0 * e * e + d1 * e * u;
  if (std::abs(dd) == 0) throw Error(ErrorCode::UnstableProduct, "vanishing denominator");
  const cplx d(static_cast<double>(dd.real()), static_cast<double>(dd.imag()));
  const lc rr = nn / dd;
  const cplx r(static_cast<double>(rr.real()), static_cast<double>(rr.imag()));

  LatticeScattering out;
  out.log_abs_t = std::log(2.0 * std::sin(q)) + log_s - std::log(std::abs(d));
  out.transmission = std::exp(2.0 * out.log_abs_t);
  out.reflection = std::norm(r);
  return out;
}

}  // namespace

LatticeScattering recursion_transmission(std::span<const double> a, double q) {
  std::vector<double> c(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) c[n] = 2.0 - a[n];
  return transmission_from_offsets(c, q);
}

LatticeScattering transmission_discretized(std::span<const double> potential, double dx,
                                           double k) {
  if (!(dx > 0.0) || !(k > 0.0))
    throw Error(ErrorCode::InvalidArgument, "dx and k must be positive");
  const double kd = k * dx;
  if (!(kd < 2.0))
    throw Error(ErrorCode::InvalidArgument, "k dx must be below 2 for a propagating lead wave");
  // Lattice dispersion of the leads, 2 cos q = 2 - (k dx)^2, in a form
  // that stays accurate for small k dx.
  const double q = 2.0 * std::asin(0.5 * kd);
  std::vector<double> c(potential.size());
  const double dx2 = dx * dx;
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = dx2 * (k * k - potential[n]);
  return transmission_from_offsets(c, q);
}

LatticeScattering lattice_transmission(std::span<const double> epsilon, double energy) {
  if (!(std::abs(energy) < 2.0))
    throw Error(ErrorCode::OutOfBand, "energy outside the lead band (-2, 2)");
  std::vector<double> a(epsilon.size());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = energy - epsilon[n];
  return recursion_transmission(a, std::acos(energy / 2.0));
}

TransferMatrix tb_site_matrix(double epsilon, double energy) {
  if (!(std::abs(energy) < 2.0))
    throw Error(ErrorCode::OutOfBand, "energy outside the lead band (-2, 2)");
  const double q = std::acos(energy / 2.0);
  const cplx e = std::polar(1.0, q);
  const double a = energy - epsilon;
  // G^{-1} P G, G = [[e, 1/e], [1, 1]] maps local plane-wave amplitudes to (psi_n, psi_{n-1}).
  const cplx pg11 = a * e - 1.0, pg12 = a * std::conj(e) - 1.0;  // P G, first row
  const cplx pg21 = e, pg22 = std::conj(e);                       // P G, second row
  const cplx inv_det = 1.0 / (e - std::conj(e));
  return {inv_det * (pg11 - std::conj(e) * pg21), inv_det * (pg12 - std::conj(e) * pg22),
          inv_det * (-pg11 + e * pg21), inv_det * (-pg12 + e * pg22), q};
}

ChainScattering transmission_matrix_chain(std::span<const TransferMatrix> ms,
                                          std::vector<double>* log_t_trace) {
  if (ms.empty()) throw Error(ErrorCode::InvalidArgument, "empty chain");
  if (log_t_trace) {
    log_t_trace->clear();
    log_t_trace->reserve(ms.size());
  }
  const double k0 = ms.front().k;

  ScatteringAmplitudes first = scattering_amplitudes(ms.front());
  double log_t = std::log(std::abs(first.t));
  double arg_t = std::arg(first.t);
  cplx phase = first.t / std::abs(first.t);
  cplx rl = first.rL, rr = first.rR;
  if (log_t_trace) log_t_trace->push_back(log_t);

  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (std::abs(ms[i].k - k0) > 1e-12 * std::abs(k0))
      throw Error(ErrorCode::MismatchedWavenumber, "unit " + std::to_string(i));
    const ScatteringAmplitudes s = scattering_amplitudes(ms[i]);
    const cplx denom = 1.0 - s.rL * rr;
    if (std::abs(denom) < 1e-14)
      throw Error(ErrorCode::ResonancePole, "1 - rL rR vanishes at unit " + std::to_string(i));
    const cplx t1 = std::exp(log_t) * phase;  // may underflow; only enters rL
    rl = rl + s.rL * t1 * t1 / denom;
    rr = s.rR + rr * s.t * s.t / denom;
    log_t += std::log(std::abs(s.t)) - std::log(std::abs(denom));
    arg_t += std::arg(s.t) - std::arg(denom);
    phase *= (s.t / std::abs(s.t)) / (denom / std::abs(denom));
    if (log_t_trace) log_t_trace->push_back(log_t);
  }
  phase /= std::abs(phase);

  ChainScattering out;
  out.amplitudes = {std::exp(log_t) * phase, rl, rr};
  out.log_abs_t = log_t;
  out.arg_t = arg_t;
  return out;
}

}  // namespace qwire
