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

#include "qwire/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qwire/error.hpp"
#include "qwire/parallel.hpp"

namespace qwire {

std::string_view to_string(LyapunovMethod m) noexcept {
  switch (m) {
    case LyapunovMethod::FromTransmission: return "from-T";
    case LyapunovMethod::FromState: return "from-state";
    case LyapunovMethod::Complex: return "complex";
    case LyapunovMethod::ThermodynamicLimit: return "tl";
  }
  return "?";
}

LyapunovEstimate LyapunovEstimate::make(double lambda, std::size_t n, LyapunovMethod m) {
  LyapunovEstimate e;
  e.lambda = lambda;
  e.xi = lambda > 0.0 ? 1.0 / lambda : std::numeric_limits<double>::infinity();
  e.n_sites = n;
  e.method = m;
  return e;
}

LyapunovEstimate lyapunov_from_transmission(double t, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "chain without sites");
  if (!(t > 0.0))
    throw Error(ErrorCode::ZeroTransmission, "T underflowed; use the log|t| accumulator");
  if (t > 1.0 + 1e-12) throw Error(ErrorCode::InvalidArgument, "T above 1");
  return LyapunovEstimate::make(std::max(0.0, -std::log(t) / (2.0 * n)), n,
                                LyapunovMethod::FromTransmission);
}

LyapunovEstimate lyapunov_from_log_transmission(double log_abs_t, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "chain without sites");
  return LyapunovEstimate::make(std::max(0.0, -log_abs_t / n), n, LyapunovMethod::FromTransmission);
}

LyapunovEstimate lyapunov_from_state(const StateTrajectory& tr) {
  if (tr.n == 0) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  return LyapunovEstimate::make(std::max(0.0, tr.log_rho() / tr.n), tr.n, LyapunovMethod::FromState);
}

namespace {

bool sign_change(std::int8_t a, std::int8_t b) { return a != 0 && (b == 0 || a * b < 0); }

}  // namespace

ComplexLyapunov complex_lyapunov(const StateTrajectory& tr) {
  if (tr.n < 3) throw Error(ErrorCode::InvalidArgument, "need at least three sites");
  std::size_t count = 0;
  for (std::size_t j = 2; j + 1 <= tr.n; ++j)  // site j: Psi_j -> Psi_{j+1}
    count += sign_change(tr.sign[j - 1], tr.sign[j]);
  return {lyapunov_from_state(tr).lambda,
          std::numbers::pi * static_cast<double>(count) / static_cast<double>(tr.n - 2)};
}

double ipr(std::span<const double> amplitudes) {
  double s2 = 0.0, s4 = 0.0;
  for (double a : amplitudes) {
    const double a2 = a * a;
    s2 += a2;
    s4 += a2 * a2;
  }
  if (!(s2 > 0.0)) throw Error(ErrorCode::ZeroState, "all amplitudes vanish");
  return s4 / (s2 * s2);
}

std::size_t NodeCountTally::total_changes() const {
  return std::accumulate(changes.begin(), changes.end(), std::size_t{0});
}

std::size_t NodeCountTally::total_sites() const {
  return std::accumulate(sites.begin(), sites.end(), std::size_t{0});
}

double NodeCountTally::fraction(std::size_t species) const {
  const std::size_t n = total_sites();
  return n ? static_cast<double>(changes[species]) / static_cast<double>(n) : 0.0;
}

double NodeCountTally::fraction() const {
  const std::size_t n = total_sites();
  return n ? static_cast<double>(total_changes()) / static_cast<double>(n) : 0.0;
}

NodeCountTally node_count(const CanonicalModel& model, const WireSequence& seq) {
  const std::size_t n = seq.size();
  NodeCountTally t;
  t.energy = model.energy();
  t.changes.assign(model.species_count(), 0);
  t.sites.assign(model.species_count(), 0);

  // s = Psi_{j+1} / Psi_j; `at_infinity` stands for Psi_j = 0.
  double s = 0.0;
  bool at_infinity = true;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::uint32_t g = seq.species[j - 1];
    const std::uint32_t gp = j == 1 ? g : seq.species[j - 2];
    if (g >= model.species_count())
      throw Error(ErrorCode::InvalidArgument, "sequence refers to an unknown species");
    if (at_infinity) {
      s = model.j(gp, g);
      at_infinity = false;
    } else if (s == 0.0) {
      at_infinity = true;
    } else {
      s = model.j(gp, g) - model.k_ratio(gp, g) / s;
    }
    if (j >= 2 && j < n) {
      ++t.sites[g];
      if (!at_infinity && s <= 0.0) ++t.changes[g];
    }
  }
  return t;
}

NodeCountTally node_count(const StateTrajectory& tr, const WireSequence& seq, double energy,
                          std::size_t species_count) {
  if (tr.n != seq.size()) throw Error(ErrorCode::InvalidArgument, "trajectory/sequence mismatch");
  NodeCountTally t;
  t.energy = energy;
  t.changes.assign(species_count, 0);
  t.sites.assign(species_count, 0);
  for (std::size_t j = 2; j < tr.n; ++j) {
    const std::uint32_t g = seq.species[j - 1];
    ++t.sites[g];
    t.changes[g] += sign_change(tr.sign[j - 1], tr.sign[j]);
  }
  return t;
}

std::vector<double> dos_from_tallies(std::span<const double> energies,
                                     std::span<const NodeCountTally> tallies,
                                     std::span<const std::vector<int>> k_sign) {
  const std::size_t m = energies.size();
  if (tallies.size() != m || k_sign.size() != m)
    throw Error(ErrorCode::InvalidArgument, "grid and tallies differ in length");
  std::vector<double> weighted(m);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < tallies[i].changes.size(); ++a)
      acc += k_sign[i][a] * tallies[i].fraction(a);
    weighted[i] = acc;
  }
  std::vector<double> g(m, 0.0);
  if (m < 2) return g;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == m ? m - 1 : i + 1;
    const double de = energies[hi] - energies[lo];
    if (!(de > 0.0)) throw Error(ErrorCode::InvalidArgument, "energies must increase");
    g[i] = std::abs((weighted[hi] - weighted[lo]) / de);
  }
  return g;
}

namespace {

template <class Loop>
std::vector<DosPoint> node_count_dos_impl(const ModelFamily& family, const WireSequence& seq,
                                          std::span<const double> energies, Loop loop) {
  const std::size_t m = energies.size();
  std::vector<NodeCountTally> tallies(m);
  std::vector<std::vector<int>> k_sign(m);
  loop(m, [&](std::size_t i) {
    const CanonicalModel model = family.at(energies[i]);
    tallies[i] = node_count(model, seq);
    k_sign[i].resize(model.species_count());
    for (std::size_t a = 0; a < model.species_count(); ++a) k_sign[i][a] = model.k(a) > 0 ? 1 : -1;
  });
  const std::vector<double> g = dos_from_tallies(energies, tallies, k_sign);
  std::vector<DosPoint> out(m);
  const int orient = family.node_orientation();
  for (std::size_t i = 0; i < m; ++i) {
    const double f = tallies[i].fraction();
    out[i].energy = energies[i];
    out[i].g = g[i];
    out[i].idos = orient < 0   ? 1.0 - f
                  : orient > 0 ? f
                               : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

std::vector<DosPoint> node_count_dos(const ModelFamily& family, const WireSequence& seq,
                                     std::span<const double> energies) {
  return node_count_dos_impl(family, seq, energies,
                             [](std::size_t m, auto&& f) { parallel_for(m, f); });
}

std::vector<DosPoint> node_count_dos_serial(const ModelFamily& family, const WireSequence& seq,
                                            std::span<const double> energies) {
  return node_count_dos_impl(family, seq, energies, [](std::size_t m, auto&& f) {
    for (std::size_t i = 0; i < m; ++i) f(i);
  });
}

std::size_t tb_count_below(std::span<const double> epsilon, double energy) {
  // Pivots of H - E, off-diagonal 1.
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t j = 0; j < epsilon.size(); ++j) {
    d = (epsilon[j] - energy) - (j == 0 ? 0.0 : 1.0 / d);
    if (d == 0.0) d = -1e-300;
    count += d < 0.0;
  }
  return count;
}

namespace {

// Tridiagonal solve with partial pivoting; a zero pivot is replaced by a
// tiny value, which is what inverse iteration wants.
void tridiagonal_solve(std::vector<double> dl, std::vector<double> d, std::vector<double> du,
                       std::vector<double>& b) {
  const std::size_t n = d.size();
  constexpr double kTiny = 1e-300;
  std::vector<double> du2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = kTiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - fact * tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = tmp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = kTiny;
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;)
    b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
}

double tb_eigenvalue(std::span<const double> eps, std::size_t index, double lo, double hi) {
  // index-th eigenvalue (0-based): smallest E with count_below(E) > index.
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tb_count_below(eps, mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Eigenpair> tb_eigenstates_near(std::span<const double> epsilon, double energy,
                                           std::size_t count) {
  const std::size_t n = epsilon.size();
  if (n == 0 || count == 0) return {};
  count = std::min(count, n);
  const auto [mn, mx] = std::minmax_element(epsilon.begin(), epsilon.end());
  const double lo = *mn - 2.5, hi = *mx + 2.5;

  const std::size_t below = tb_count_below(epsilon, energy);
  std::size_t first = below > count / 2 ? below - count / 2 : 0;
  first = std::min(first, n - count);

  std::vector<Eigenpair> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double e = tb_eigenvalue(epsilon, first + s, lo, hi);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + s);
    for (int it = 0; it < 4; ++it) {
      std::vector<double> d(n), off(n > 1 ? n - 1 : 0, 1.0);
      for (std::size_t i = 0; i < n; ++i) d[i] = epsilon[i] - e;
      if (n == 1) {
        x[0] = 1.0;
        break;
      }
      tridiagonal_solve(off, d, off, x);
      double norm = 0.0;
      for (double v : x) norm += v * v;
      norm = std::sqrt(norm);
      for (double& v : x) v /= norm;
    }
    out[s].energy = e;
    out[s].vector = std::move(x);
  }
  return out;
}

}  // namespace qwire
