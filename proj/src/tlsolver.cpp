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

#include "qwire/tlsolver.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qwire/error.hpp"
#include "qwire/parallel.hpp"

namespace qwire {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLambdaFloor = 1e-12;
constexpr double kAbsSlack = 1e-9;

void check_grid(std::size_t n_theta) {
  if (n_theta < 2 || n_theta % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "theta grid size must be even and >= 2");
}

void check_compatible(const PhaseDistributions& w, const CanonicalModel& model,
                      const DisorderSpec& spec) {
  if (w.species_count() != model.species_count() || spec.species_count() != model.species_count())
    throw Error(ErrorCode::InvalidArgument, "tables, model and disorder disagree on species");
}

double lerp(const std::vector<double>& w, std::int32_t idx, double frac) {
  return w[idx] + (w[idx + 1] - w[idx]) * frac;
}

// Grid position of a preimage in [-pi/2, pi/2], folded onto [0, pi].
struct Folded {
  std::int32_t index;
  double frac;
  double offset;
};

Folded fold(double x, std::size_t n_theta) {
  double offset = 0.0;
  if (x < 0.0) {
    x += kPi;
    offset = -1.0;
  }
  const double pos = std::clamp(x / kPi * static_cast<double>(n_theta), 0.0,
                                static_cast<double>(n_theta));
  auto idx = static_cast<std::int32_t>(pos);
  if (idx >= static_cast<std::int32_t>(n_theta)) idx = static_cast<std::int32_t>(n_theta) - 1;
  return {idx, pos - idx, offset};
}

double sup_residual(const PhaseDistributions& a, const PhaseDistributions& b,
                    const std::vector<double>& c) {
  double r = 0.0;
  for (std::size_t g = 0; g < a.species_count(); ++g) {
    if (!(c[g] > 0.0)) continue;
    for (std::size_t i = 0; i <= a.n_theta; ++i) r = std::max(r, std::abs(a.w[g][i] - b.w[g][i]));
  }
  return r;
}

void pin(PhaseDistributions& w) {
  for (auto& row : w.w) {
    row.front() = 0.0;
    row.back() = 1.0;
  }
}

template <class Apply>
PhaseSolution iterate(PhaseDistributions w, const std::vector<double>& c,
                      const SolverOptions& opts, Apply apply) {
  const auto start = std::chrono::steady_clock::now();
  PhaseSolution out;
  double omega = opts.damping;
  std::vector<double> history;
  history.reserve(std::min<std::size_t>(opts.max_iter, 1 << 16));
  PhaseDistributions tw = w;

  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    apply(w, tw);
    const double res = sup_residual(w, tw, c);
    for (std::size_t g = 0; g < w.species_count(); ++g)
      for (std::size_t i = 0; i <= w.n_theta; ++i)
        w.w[g][i] = (1.0 - omega) * w.w[g][i] + omega * tw.w[g][i];
    pin(w);
    out.report.iterations = it;
    out.report.residual = res;
    if (res < opts.tol) {
      out.report.converged = true;
      break;
    }
    history.push_back(res);
    // Stall test: no 10% progress over the window means the plain
    // iteration is oscillating or creeping; damp it.
    if (omega > opts.fallback_damping && history.size() > opts.stall_window &&
        res > 0.9 * history[history.size() - 1 - opts.stall_window])
      omega = opts.fallback_damping;
  }
  out.report.damping = omega;
  out.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  w.check_monotone();
  out.tables = std::move(w);
  return out;
}

}  // namespace

PhaseDistributions PhaseDistributions::uniform(double energy, std::size_t species,
                                               std::size_t n_theta) {
  check_grid(n_theta);
  PhaseDistributions p;
  p.energy = energy;
  p.n_theta = n_theta;
  std::vector<double> ramp(n_theta + 1);
  for (std::size_t i = 0; i <= n_theta; ++i)
    ramp[i] = static_cast<double>(i) / static_cast<double>(n_theta);
  p.w.assign(species, ramp);
  return p;
}

double PhaseDistributions::theta(std::size_t i) const {
  return kPi * static_cast<double>(i) / static_cast<double>(n_theta);
}

double PhaseDistributions::eval(std::size_t species, double x) const {
  const double turns = std::floor(x / kPi);
  const double y = x - turns * kPi;
  const double pos = std::clamp(y / kPi * static_cast<double>(n_theta), 0.0,
                                static_cast<double>(n_theta));
  auto idx = static_cast<std::size_t>(pos);
  if (idx >= n_theta) idx = n_theta - 1;
  const auto& row = w[species];
  return row[idx] + (row[idx + 1] - row[idx]) * (pos - static_cast<double>(idx)) + turns;
}

void PhaseDistributions::check_monotone(double slack) const {
  for (std::size_t g = 0; g < w.size(); ++g)
    for (std::size_t i = 0; i < n_theta; ++i)
      if (w[g][i + 1] < w[g][i] - slack)
        throw Error(ErrorCode::MonotonicityViolation,
                    "W decreases at node " + std::to_string(i) + " of species " + std::to_string(g));
}

PhaseDistributions aggregate(const PhaseDistributions& tables, std::span<const double> c) {
  if (c.size() != tables.species_count())
    throw Error(ErrorCode::InvalidArgument, "weights and tables disagree on species");
  PhaseDistributions out;
  out.energy = tables.energy;
  out.n_theta = tables.n_theta;
  out.w.assign(1, std::vector<double>(tables.n_theta + 1, 0.0));
  for (std::size_t g = 0; g < c.size(); ++g)
    for (std::size_t i = 0; i <= tables.n_theta; ++i) out.w[0][i] += c[g] * tables.w[g][i];
  return out;
}

void write_table(std::ostream& os, const PhaseDistributions& tables, std::size_t species) {
  const auto old = os.precision(17);
  for (std::size_t i = 0; i <= tables.n_theta; ++i)
    os << tables.theta(i) << ' ' << tables.w[species][i] << '\n';
  os.precision(old);
}

FunctionalOperator::FunctionalOperator(const CanonicalModel& model, const DisorderSpec& spec,
                                       std::size_t n_theta)
    : species_(model.species_count()), n_theta_(n_theta), c_(spec.c) {
  check_grid(n_theta);
  spec.validate();
  if (spec.species_count() != species_)
    throw Error(ErrorCode::InvalidArgument, "model and disorder disagree on species");
  const std::size_t s = species_;

  q_.assign(s * s, 0.0);
  for (std::size_t g = 0; g < s; ++g) {
    if (!(c_[g] > 0.0)) continue;
    for (std::size_t b = 0; b < s; ++b) q_[g * s + b] = c_[b] * spec.pair(b, g) / c_[g];
  }

  delta_.resize(s * s);
  nodes_.resize(s * s * (n_theta + 1));
  expect_nonnegative_ = true;
  for (std::size_t b = 0; b < s; ++b) {
    for (std::size_t g = 0; g < s; ++g) {
      const StepCoefficients st = model.step(b, g);
      delta_[b * s + g] = st.k_ratio > 0.0 ? 1.0 : 0.0;
      if (st.k_ratio < 0.0) expect_nonnegative_ = false;
      Node* row = &nodes_[(b * s + g) * (n_theta + 1)];
      for (std::size_t i = 0; i <= n_theta; ++i) {
        const double th = kPi * static_cast<double>(i) / static_cast<double>(n_theta);
        const Folded f = fold(phase_inverse({th, 0}, st.j, st.k_ratio), n_theta);
        row[i] = {f.index, static_cast<float>(f.offset), f.frac};
      }
    }
  }
}

double FunctionalOperator::value(const PhaseDistributions& in, std::size_t g, std::size_t i) const {
  const std::size_t s = species_;
  const std::size_t mid = n_theta_ / 2;
  double acc = 0.0;
  for (std::size_t b = 0; b < s; ++b) {
    const double q = q_[g * s + b];
    if (q == 0.0) continue;
    const Node& nd = nodes_[(b * s + g) * (n_theta_ + 1) + i];
    const auto& wb = in.w[b];
    const double arg = lerp(wb, nd.index, nd.frac) + nd.offset - wb[mid] + delta_[b * s + g];
    if (expect_nonnegative_ && arg < -kAbsSlack)
      throw Error(ErrorCode::MonotonicityViolation,
                  "negative argument " + std::to_string(arg) + " under the absolute value");
    acc += q * std::abs(arg);
  }
  return acc;
}

void FunctionalOperator::apply_serial(const PhaseDistributions& in, PhaseDistributions& out) const {
  out.energy = in.energy;
  out.n_theta = n_theta_;
  out.w.resize(species_);
  for (std::size_t g = 0; g < species_; ++g) {
    out.w[g].resize(n_theta_ + 1);
    if (!active(g)) {
      out.w[g] = in.w[g];
      continue;
    }
    for (std::size_t i = 0; i <= n_theta_; ++i) out.w[g][i] = value(in, g, i);
  }
  pin(out);
}

void FunctionalOperator::apply(const PhaseDistributions& in, PhaseDistributions& out) const {
  out.energy = in.energy;
  out.n_theta = n_theta_;
  out.w.resize(species_);
  for (std::size_t g = 0; g < species_; ++g) {
    out.w[g].resize(n_theta_ + 1);
    if (!active(g)) out.w[g] = in.w[g];
  }
  const auto n = static_cast<std::int64_t>(n_theta_ + 1);
  std::exception_ptr error;
  std::mutex guard;
#ifdef _OPENMP
#pragma omp parallel if (!omp_in_parallel())
#endif
  for (std::size_t g = 0; g < species_; ++g) {
    if (!active(g)) continue;
    double* dst = out.w[g].data();
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        dst[i] = value(in, g, static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  pin(out);
}

PhaseDistributions functional_operator(const PhaseDistributions& w, const CanonicalModel& model,
                                       const DisorderSpec& spec) {
  check_compatible(w, model, spec);
  PhaseDistributions out;
  FunctionalOperator(model, spec, w.n_theta).apply(w, out);
  return out;
}

PhaseDistributions functional_operator_serial(const PhaseDistributions& w,
                                              const CanonicalModel& model,
                                              const DisorderSpec& spec) {
  check_compatible(w, model, spec);
  PhaseDistributions out;
  FunctionalOperator(model, spec, w.n_theta).apply_serial(w, out);
  return out;
}

PhaseSolution solve_phase_distributions(const CanonicalModel& model, const DisorderSpec& spec,
                                        const SolverOptions& opts,
                                        const PhaseDistributions* warm) {
  const FunctionalOperator op(model, spec, opts.n_theta);
  PhaseDistributions w;
  if (warm && warm->n_theta == opts.n_theta && warm->species_count() == model.species_count()) {
    w = *warm;
  } else {
    w = PhaseDistributions::uniform(model.energy(), model.species_count(), opts.n_theta);
  }
  w.energy = model.energy();
  if (opts.parallel)
    return iterate(std::move(w), spec.c, opts,
                   [&](const PhaseDistributions& in, PhaseDistributions& out) { op.apply(in, out); });
  return iterate(std::move(w), spec.c, opts, [&](const PhaseDistributions& in, PhaseDistributions& out) {
    op.apply_serial(in, out);
  });
}

namespace {

void check_single_equation(const CanonicalModel& model, const DisorderSpec& spec) {
  spec.validate();
  if (!model.single_site_coupling() || model.k(0) <= 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "reduced equation needs J of the current species only and constant K > 0");
  const std::size_t s = spec.species_count();
  for (std::size_t g = 0; g < s; ++g)
    for (std::size_t b = 0; b < s; ++b)
      if (std::abs(spec.pair(g, b) - spec.c[b]) > 1e-14)
        throw Error(ErrorCode::InvalidArgument, "reduced equation needs uncorrelated disorder");
}

struct SingleEquation {
  std::vector<double> c;
  std::vector<Folded> nodes;  // [g * (n + 1) + i]
  std::size_t n;

  SingleEquation(const CanonicalModel& model, const DisorderSpec& spec, std::size_t n_theta)
      : c(spec.c), n(n_theta) {
    check_grid(n_theta);
    nodes.resize(c.size() * (n + 1));
    for (std::size_t g = 0; g < c.size(); ++g) {
      const StepCoefficients st = model.step(0, g);
      for (std::size_t i = 0; i <= n; ++i) {
        const double th = kPi * static_cast<double>(i) / static_cast<double>(n);
        nodes[g * (n + 1) + i] = fold(phase_inverse({th, 0}, st.j, st.k_ratio), n);
      }
    }
  }

  void apply(const PhaseDistributions& in, PhaseDistributions& out) const {
    const auto& w = in.w[0];
    out.energy = in.energy;
    out.n_theta = n;
    out.w.assign(1, std::vector<double>(n + 1));
    const double half = w[n / 2];
    for (std::size_t i = 0; i <= n; ++i) {
      double acc = 0.0;
      for (std::size_t g = 0; g < c.size(); ++g) {
        if (c[g] == 0.0) continue;
        const Folded& f = nodes[g * (n + 1) + i];
        acc += c[g] * (lerp(w, f.index, f.frac) + f.offset);
      }
      out.w[0][i] = acc - half + 1.0;
    }
    pin(out);
  }
};

}  // namespace

PhaseDistributions single_equation_operator(const PhaseDistributions& w,
                                            const CanonicalModel& model, const DisorderSpec& spec) {
  check_single_equation(model, spec);
  if (w.species_count() != 1) throw Error(ErrorCode::InvalidArgument, "expects one table");
  PhaseDistributions out;
  SingleEquation(model, spec, w.n_theta).apply(w, out);
  return out;
}

PhaseSolution solve_single_equation(const CanonicalModel& model, const DisorderSpec& spec,
                                    const SolverOptions& opts) {
  check_single_equation(model, spec);
  const SingleEquation eq(model, spec, opts.n_theta);
  return iterate(PhaseDistributions::uniform(model.energy(), 1, opts.n_theta), {1.0}, opts,
                 [&](const PhaseDistributions& in, PhaseDistributions& out) { eq.apply(in, out); });
}

double tl_lyapunov(const PhaseDistributions& tables, const CanonicalModel& model,
                   const DisorderSpec& spec) {
  check_compatible(tables, model, spec);
  const std::size_t s = model.species_count();
  const std::size_t n = tables.n_theta;
  double lambda = 0.0;
  for (std::size_t g = 0; g < s; ++g) {
    if (!(spec.c[g] > 0.0)) continue;
    const auto& w = tables.w[g];
    for (std::size_t b = 0; b < s; ++b) {
      const double weight = spec.c[g] * spec.pair(g, b);
      if (weight == 0.0) continue;
      const StepCoefficients st = model.step(g, b);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double mid = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        acc += std::log(radius_factor(mid, st.j, st.k_ratio)) * (w[i + 1] - w[i]);
      }
      lambda += weight * acc;
    }
  }
  return 0.5 * lambda;
}

double tl_localization_length(const PhaseDistributions& tables, const CanonicalModel& model,
                              const DisorderSpec& spec) {
  const double lambda = tl_lyapunov(tables, model, spec);
  return lambda < kLambdaFloor ? std::numeric_limits<double>::infinity() : 1.0 / lambda;
}

double tl_weighted_half_pi(const PhaseDistributions& tables, const CanonicalModel& model,
                           const DisorderSpec& spec) {
  check_compatible(tables, model, spec);
  double acc = 0.0;
  for (std::size_t g = 0; g < model.species_count(); ++g)
    acc += (model.k(g) > 0.0 ? 1.0 : -1.0) * spec.c[g] * tables.at_half_pi(g);
  return acc;
}

namespace {

struct RawTl {
  double lambda = 0.0;
  double weighted = 0.0;
  double plain = 0.0;  // sum c W(pi/2)
  SolverReport report;
};

void solve_block(const ModelFamily& family, const DisorderSpec& spec,
                 std::span<const double> energies, const SolverOptions& opts,
                 std::span<RawTl> out) {
  PhaseDistributions warm;
  bool have_warm = false;
  SolverOptions inner = opts;
  inner.parallel = false;  // parallelism lives at the block level
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const CanonicalModel model = family.at(energies[i]);
    PhaseSolution sol = solve_phase_distributions(model, spec, inner, have_warm ? &warm : nullptr);
    out[i].lambda = tl_lyapunov(sol.tables, model, spec);
    out[i].weighted = tl_weighted_half_pi(sol.tables, model, spec);
    double plain = 0.0;
    for (std::size_t g = 0; g < model.species_count(); ++g)
      plain += spec.c[g] * sol.tables.at_half_pi(g);
    out[i].plain = plain;
    out[i].report = sol.report;
    warm = std::move(sol.tables);
    have_warm = true;
  }
}

std::vector<TlPoint> finish(const ModelFamily& family, std::span<const double> energies,
                            const std::vector<RawTl>& raw) {
  const std::size_t m = energies.size();
  std::vector<TlPoint> out(m);
  const int orient = family.node_orientation();
  for (std::size_t i = 0; i < m; ++i) {
    out[i].energy = energies[i];
    out[i].lambda = raw[i].lambda < kLambdaFloor ? 0.0 : raw[i].lambda;
    out[i].report = raw[i].report;
    out[i].idos = orient < 0   ? raw[i].plain
                  : orient > 0 ? 1.0 - raw[i].plain
                               : std::numeric_limits<double>::quiet_NaN();
    if (m < 2) {
      out[i].converged = raw[i].report.converged;
      continue;
    }
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == m ? m - 1 : i + 1;
    const double de = energies[hi] - energies[lo];
    if (!(de > 0.0)) throw Error(ErrorCode::InvalidArgument, "energies must increase");
    out[i].g = std::abs((raw[hi].weighted - raw[lo].weighted) / de);
    out[i].converged =
        raw[i].report.converged && raw[lo].report.converged && raw[hi].report.converged;
  }
  return out;
}

}  // namespace

std::vector<TlPoint> tl_dos(const ModelFamily& family, const DisorderSpec& spec,
                            std::span<const double> energies, const SolverOptions& opts) {
  const std::size_t m = energies.size();
  std::vector<RawTl> raw(m);
  const std::size_t blocks = std::clamp<std::size_t>(max_threads(), 1, std::max<std::size_t>(m, 1));
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = m * b / blocks, hi = m * (b + 1) / blocks;
    solve_block(family, spec, energies.subspan(lo, hi - lo), opts,
                std::span<RawTl>(raw).subspan(lo, hi - lo));
  });
  return finish(family, energies, raw);
}

std::vector<TlPoint> tl_dos_serial(const ModelFamily& family, const DisorderSpec& spec,
                                   std::span<const double> energies, const SolverOptions& opts) {
  std::vector<RawTl> raw(energies.size());
  solve_block(family, spec, energies, opts, raw);
  return finish(family, energies, raw);
}

PhaseDistributions empirical_phase_cdf(const CanonicalModel& model, const DisorderSpec& spec,
                                       std::size_t n, std::uint64_t seed, std::size_t burn_in,
                                       std::size_t n_theta) {
  check_grid(n_theta);
  DisorderSpec s = spec;
  s.seed = seed;
  const WireSequence seq = generate_sequence(s, n + burn_in);
  const std::size_t species = model.species_count();

  std::vector<std::vector<double>> samples(species);
  PhasePoint theta{0.0, 0};  // (Psi_1, Psi_0) = (1, 0)
  for (std::size_t j = 0; j < seq.size(); ++j) {
    const std::uint32_t g = seq.species[j];
    const std::uint32_t gp = j == 0 ? g : seq.species[j - 1];
    const StepCoefficients st = model.step(gp, g);
    theta = phase_forward(theta, st.j, st.k_ratio);
    theta.winding = 0;
    if (j >= burn_in) samples[g].push_back(theta.theta);
  }

  PhaseDistributions out = PhaseDistributions::uniform(model.energy(), species, n_theta);
  for (std::size_t g = 0; g < species; ++g) {
    auto& v = samples[g];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i <= n_theta; ++i) {
      const double th = out.theta(i);
      out.w[g][i] = static_cast<double>(std::upper_bound(v.begin(), v.end(), th) - v.begin()) /
                    static_cast<double>(v.size());
    }
  }
  pin(out);
  return out;
}

double ks_distance(const PhaseDistributions& a, const PhaseDistributions& b,
                   std::span<const double> c) {
  if (a.n_theta != b.n_theta || a.species_count() != b.species_count() ||
      c.size() != a.species_count())
    throw Error(ErrorCode::InvalidArgument, "tables are not comparable");
  return sup_residual(a, b, std::vector<double>(c.begin(), c.end()));
}

}  // namespace qwire
