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

/** @file observables.hpp
 *  @brief Lyapunov exponents, participation ratios and node counting on
 *  finite chains.
 *
 *  Node counting: a sign change of the envelope between Psi_j and
 *  Psi_{j+1} is attributed to the species of site j. Sites 1 and N are
 *  left out of every tally. For the tight-binding convention J = E - eps
 *  the sign-change fraction falls from 1 to 0 across the band, so the
 *  integrated density of states is 1 - fraction.
 */

#ifndef QWIRE_OBSERVABLES_HPP
#define QWIRE_OBSERVABLES_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "qwire/chain.hpp"
#include "qwire/models.hpp"

namespace qwire {

enum class LyapunovMethod { FromTransmission, FromState, Complex, ThermodynamicLimit };

std::string_view to_string(LyapunovMethod m) noexcept;

struct LyapunovEstimate {
  double lambda = 0.0;
  double xi = std::numeric_limits<double>::infinity();  ///< 1 / lambda
  std::size_t n_sites = 0;
  LyapunovMethod method = LyapunovMethod::FromState;

  static LyapunovEstimate make(double lambda, std::size_t n, LyapunovMethod m);
};

/// lambda = -log(T) / (2n). Throws ZeroTransmission if T underflowed to 0.
LyapunovEstimate lyapunov_from_transmission(double t, std::size_t n);
/// Same from an accumulated log|t|; never underflows.
LyapunovEstimate lyapunov_from_log_transmission(double log_abs_t, std::size_t n);

/// (1/N) log rho_N, the largest exponent.
LyapunovEstimate lyapunov_from_state(const StateTrajectory& tr);

struct ComplexLyapunov {
  double re = 0.0;
  double im = 0.0;  ///< pi * sign-change fraction over sites 2..N-1
};

ComplexLyapunov complex_lyapunov(const StateTrajectory& tr);

/// Sum |psi|^4 / (sum |psi|^2)^2. Throws ZeroState for an all-zero input.
double ipr(std::span<const double> amplitudes);

struct NodeCountTally {
  double energy = 0.0;
  std::vector<std::size_t> changes;  ///< per species
  std::vector<std::size_t> sites;    ///< per species

  std::size_t total_changes() const;
  std::size_t total_sites() const;
  /// Per-species count over all counted sites.
  double fraction(std::size_t species) const;
  double fraction() const;
};

/// Counts sign changes with the ratio recursion s = J - k_ratio / s, s_0 = inf.
NodeCountTally node_count(const CanonicalModel& model, const WireSequence& seq);

/// Same tally read off a propagated trajectory.
NodeCountTally node_count(const StateTrajectory& tr, const WireSequence& seq, double energy,
                          std::size_t species_count);

struct DosPoint {
  double energy = 0.0;
  double g = 0.0;
  double idos = 0.0;
};

/// Density of states |sum_a sgn K(a) dN_a/dE| on an increasing energy grid
/// by central differences (one-sided at the ends). `tallies[i]` belongs to
/// `energies[i]`; `k_sign[i][a]` is sgn K(a) there.
std::vector<double> dos_from_tallies(std::span<const double> energies,
                                     std::span<const NodeCountTally> tallies,
                                     std::span<const std::vector<int>> k_sign);

/// Node-counting DOS on one frozen sequence. Energies must be increasing.
std::vector<DosPoint> node_count_dos(const ModelFamily& family, const WireSequence& seq,
                                     std::span<const double> energies);
std::vector<DosPoint> node_count_dos_serial(const ModelFamily& family, const WireSequence& seq,
                                            std::span<const double> energies);

/// Hard-wall eigenpairs of the tight-binding chain nearest to `energy`.
/// Eigenvalues by Sturm bisection, vectors by inverse iteration.
struct Eigenpair {
  double energy = 0.0;
  std::vector<double> vector;
};

std::vector<Eigenpair> tb_eigenstates_near(std::span<const double> epsilon, double energy,
                                           std::size_t count);

/// Number of hard-wall tight-binding eigenvalues below `energy`.
std::size_t tb_count_below(std::span<const double> epsilon, double energy);

}  // namespace qwire

#endif  // QWIRE_OBSERVABLES_HPP
