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

/** @file tlsolver.hpp
 *  @brief Phase distribution functions of an infinite wire.
 *
 *  W_g(theta) is the probability that the phase after a g cell lies in
 *  [0, theta). It solves
 *
 *      W_g(theta) = sum_b q(g, b) | W_b(Tinv(theta; b, g)) - W_b(pi/2) + delta(b, g) |
 *
 *  with W(theta + n pi) = W(theta) + n, delta = 1 when K(g)/K(b) > 0 and
 *  q(g, b) = c_b p(b, g) / c_g the probability that b precedes g. For
 *  reversible pair chains (any two-species chain) q equals p.
 *
 *  From the solution:
 *      lambda = 1/2 sum_{g,b} c_g p(g, b) int dW_g(theta) log F(theta; g, b)
 *      g(E)   = | sum_g sgn K(g) c_g dW_g(pi/2)/dE |
 */

#ifndef QWIRE_TLSOLVER_HPP
#define QWIRE_TLSOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "qwire/chain.hpp"
#include "qwire/models.hpp"

namespace qwire {

/// Per-species tables on the grid theta_i = i pi / n_theta, i = 0..n_theta.
struct PhaseDistributions {
  double energy = 0.0;
  std::size_t n_theta = 0;              ///< even, so pi/2 is a node
  std::vector<std::vector<double>> w;   ///< w[species][i]

  static PhaseDistributions uniform(double energy, std::size_t species, std::size_t n_theta);

  std::size_t species_count() const { return w.size(); }
  double theta(std::size_t i) const;
  double at_half_pi(std::size_t species) const { return w[species][n_theta / 2]; }
  /// Linear interpolation, extended by W(x + n pi) = W(x) + n.
  double eval(std::size_t species, double x) const;
  /// Throws MonotonicityViolation if any step falls below -slack.
  void check_monotone(double slack = 1e-9) const;
};

/// Weighted sum over species, as a single table.
PhaseDistributions aggregate(const PhaseDistributions& tables, std::span<const double> c);

/// Two columns "theta W" for one species.
void write_table(std::ostream& os, const PhaseDistributions& tables, std::size_t species);

struct SolverOptions {
  std::size_t n_theta = 4096;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  double damping = 1.0;
  double fallback_damping = 0.5;
  std::size_t stall_window = 10;  ///< iterations compared by the stall test
  bool parallel = true;
};

struct SolverReport {
  std::size_t iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  double wall_seconds = 0.0;
  double damping = 1.0;  ///< value in use at the end
};

/// The right-hand side at one energy with the preimages of every grid
/// node tabulated once; they do not depend on W.
class FunctionalOperator {
 public:
  FunctionalOperator(const CanonicalModel& model, const DisorderSpec& spec, std::size_t n_theta);

  std::size_t n_theta() const { return n_theta_; }
  std::size_t species_count() const { return species_; }
  bool active(std::size_t g) const { return c_[g] > 0.0; }
  /// Probability that b precedes g.
  double backward(std::size_t g, std::size_t b) const { return q_[g * species_ + b]; }

  void apply(const PhaseDistributions& in, PhaseDistributions& out) const;
  void apply_serial(const PhaseDistributions& in, PhaseDistributions& out) const;

 private:
  struct Node {
    std::int32_t index;  // left grid node of the preimage
    float offset;        // -1 on the lower branch
    double frac;
  };
  double value(const PhaseDistributions& in, std::size_t g, std::size_t i) const;

  std::size_t species_;
  std::size_t n_theta_;
  std::vector<double> c_;
  std::vector<double> q_;
  std::vector<double> delta_;       // [b * S + g]
  std::vector<Node> nodes_;         // [(b * S + g) * (n_theta + 1) + i]
  bool expect_nonnegative_;
};

/// One application of the right-hand side (serial reference and OpenMP).
PhaseDistributions functional_operator(const PhaseDistributions& w, const CanonicalModel& model,
                                       const DisorderSpec& spec);
PhaseDistributions functional_operator_serial(const PhaseDistributions& w,
                                              const CanonicalModel& model,
                                              const DisorderSpec& spec);

struct PhaseSolution {
  PhaseDistributions tables;
  SolverReport report;
};

/// Damped fixed-point iteration from W = theta/pi (or `warm`). Never
/// throws on non-convergence; check report.converged.
PhaseSolution solve_phase_distributions(const CanonicalModel& model, const DisorderSpec& spec,
                                        const SolverOptions& opts = {},
                                        const PhaseDistributions* warm = nullptr);

/// Reduced equation for J depending on the current species only, K = 1
/// and uncorrelated disorder:
///     W(theta) = sum_g c_g W(Tinv(theta; g)) - W(pi/2) + 1.
PhaseDistributions single_equation_operator(const PhaseDistributions& w,
                                            const CanonicalModel& model, const DisorderSpec& spec);
PhaseSolution solve_single_equation(const CanonicalModel& model, const DisorderSpec& spec,
                                    const SolverOptions& opts = {});

/// Stieltjes sum over the grid.
double tl_lyapunov(const PhaseDistributions& tables, const CanonicalModel& model,
                   const DisorderSpec& spec);
/// 1 / lambda; infinity when lambda < 1e-12.
double tl_localization_length(const PhaseDistributions& tables, const CanonicalModel& model,
                              const DisorderSpec& spec);
/// sum_g sgn K(g) c_g W_g(pi/2).
double tl_weighted_half_pi(const PhaseDistributions& tables, const CanonicalModel& model,
                           const DisorderSpec& spec);

struct TlPoint {
  double energy = 0.0;
  double lambda = 0.0;
  double g = 0.0;
  double idos = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;  ///< this point and its difference stencil
  SolverReport report;
};

/// Solves on an increasing grid with warm starts and differentiates the
/// weighted W(pi/2) by central differences (one-sided at the ends).
/// The grid is split into one warm-started block per thread.
std::vector<TlPoint> tl_dos(const ModelFamily& family, const DisorderSpec& spec,
                            std::span<const double> energies, const SolverOptions& opts = {});
std::vector<TlPoint> tl_dos_serial(const ModelFamily& family, const DisorderSpec& spec,
                                   std::span<const double> energies,
                                   const SolverOptions& opts = {});

/// Histogram oracle: iterate the phase map along a generated wire and
/// return, per species, the CDF of the phase after that species.
PhaseDistributions empirical_phase_cdf(const CanonicalModel& model, const DisorderSpec& spec,
                                       std::size_t n, std::uint64_t seed, std::size_t burn_in,
                                       std::size_t n_theta);

/// Largest grid difference over species with c > 0.
double ks_distance(const PhaseDistributions& a, const PhaseDistributions& b,
                   std::span<const double> c);

}  // namespace qwire

#endif  // QWIRE_TLSOLVER_HPP
