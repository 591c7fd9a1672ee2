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

/** @file chain.hpp
 *  @brief Disorder sequences and finite-chain engines.
 */

#ifndef QWIRE_CHAIN_HPP
#define QWIRE_CHAIN_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "qwire/canonical.hpp"
#include "qwire/xfer.hpp"

namespace qwire {

/// Name written to output metadata; see Rng.
inline constexpr std::string_view kRngName = "mt19937_64";

/// std::mt19937_64 with a fixed double conversion (top 53 bits), so the
/// stream is bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Composition and binary correlations of a wire.
///   c[g]            concentration of species g
///   p[g * S + b]    probability that b follows g
/// An empty p means uncorrelated disorder, p[g][b] = c[b].
struct DisorderSpec {
  std::vector<double> c;
  std::vector<double> p;
  std::uint64_t seed = 0;

  std::size_t species_count() const { return c.size(); }
  double pair(std::size_t g, std::size_t b) const {
    return p.empty() ? c[b] : p[g * c.size() + b];
  }
  /// Throws InvalidSpec on any violated invariant.
  void validate() const;

  static DisorderSpec uncorrelated(std::vector<double> c, std::uint64_t seed = 0);
  static DisorderSpec pure(std::size_t species = 1, std::size_t which = 0, std::uint64_t seed = 0);
};

struct WireSequence {
  std::vector<std::uint32_t> species;
  std::uint64_t seed = 0;

  std::size_t size() const { return species.size(); }
};

WireSequence generate_sequence(const DisorderSpec& spec, std::size_t n);

/// One line per site: "<index> <species>", 1-based.
void write_sequence(std::ostream& os, const WireSequence& seq);

/// Hard-wall propagation Psi_0 = 0, Psi_1 = 1 through sites 1..N, giving
/// Psi_1 .. Psi_{N+1}. The first step uses the pair (g_1, g_1).
struct StateTrajectory {
  std::size_t n = 0;
  std::vector<std::int8_t> sign;  ///< sign of Psi_j, j = 1..N+1 (index j-1)
  double log_scale = 0.0;          ///< psi_next/psi_cur below are times exp(log_scale)
  double psi_next = 0.0;           ///< scaled Psi_{N+1}
  double psi_cur = 0.0;            ///< scaled Psi_N
  PhasePoint theta;                ///< phase of (Psi_{N+1}, Psi_N)
  std::vector<double> log_abs;     ///< log|Psi_j|, j = 1..N+1, if requested

  /// log of rho_N = |(Psi_{N+1}, Psi_N)|.
  double log_rho() const;
};

struct PropagateOptions {
  bool store_amplitudes = false;
};

StateTrajectory propagate_canonical(const CanonicalModel& model, const WireSequence& seq,
                                    PropagateOptions opts = {});

/// Transmission through a three-term recursion psi[n+1] = a[n] psi[n] - psi[n-1]
/// embedded in free leads with a = 2 cos q. Covers the discretized
/// Schroedinger equation and the tight-binding chain with ideal leads.
struct LatticeScattering {
  double transmission = 0.0;
  double reflection = 0.0;
  double log_abs_t = 0.0;
};

LatticeScattering recursion_transmission(std::span<const double> a, double q);

/// psi'' = (V - k^2) psi on a grid of spacing dx, samples V[n] at cell
/// centres; free leads at V = 0. Requires k dx < 2 (resolvable lead wave).
LatticeScattering transmission_discretized(std::span<const double> potential, double dx,
                                           double k);

/// Tight-binding chain with on-site energies eps between ideal leads
/// (eps = 0, hopping 1). Requires |E| < 2.
LatticeScattering lattice_transmission(std::span<const double> epsilon, double energy);

/// One tight-binding site in the plane-wave basis of the leads.
TransferMatrix tb_site_matrix(double epsilon, double energy);

/// Scattering amplitudes of a chain, composed one unit at a time. log|t|
/// and arg t are carried separately, so t itself may underflow for long
/// localized chains while log_abs_t stays exact.
struct ChainScattering {
  ScatteringAmplitudes amplitudes;
  double log_abs_t = 0.0;
  double arg_t = 0.0;  ///< unwrapped
};

/// If `log_t_trace` is given it receives log|t| after every unit.
ChainScattering transmission_matrix_chain(std::span<const TransferMatrix> ms,
                                          std::vector<double>* log_t_trace = nullptr);

}  // namespace qwire

#endif  // QWIRE_CHAIN_HPP
