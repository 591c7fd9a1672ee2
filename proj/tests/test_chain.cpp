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
#include <sstream>

#include "oracles.hpp"
#include "qwire/chain.hpp"
#include "qwire/error.hpp"
#include "qwire/models.hpp"

using namespace qwire;
constexpr double kPi = std::numbers::pi;

TEST_CASE("rng is the standard 64-bit Mersenne twister") {
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next();
  CHECK(rng.next() == 9981545732273789042ULL);
  Rng a(3), b(3);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("disorder spec validation") {
  CHECK_NOTHROW(DisorderSpec::uncorrelated({0.3, 0.7}).validate());
  CHECK_THROWS_AS(DisorderSpec::uncorrelated({0.3, 0.6}), Error);
  CHECK_THROWS_AS(DisorderSpec::uncorrelated({-0.1, 1.1}), Error);
  CHECK_THROWS_AS(DisorderSpec::uncorrelated({}), Error);
  DisorderSpec s{{0.5, 0.5}, {0.9, 0.1, 0.1, 0.9}, 1};
  CHECK_NOTHROW(s.validate());
  s.p = {0.9, 0.2, 0.1, 0.8};  // rows do not sum to one
  CHECK_THROWS_AS(s.validate(), Error);
  s = {{0.5, 0.5}, {0.9, 0.1, 0.3, 0.7}, 1};  // stationary would be (0.75, 0.25)
  CHECK_THROWS_AS(s.validate(), Error);
  s = {{0.75, 0.25}, {0.9, 0.1, 0.3, 0.7}, 1};
  CHECK_NOTHROW(s.validate());
  CHECK(s.pair(1, 0) == 0.3);
  CHECK(DisorderSpec::uncorrelated({0.2, 0.8}).pair(0, 1) == 0.8);
  try {
    DisorderSpec::uncorrelated({0.5, 0.6});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
}

TEST_CASE("sequences are reproducible and have the requested statistics") {
  const DisorderSpec s{{0.75, 0.25}, {0.9, 0.1, 0.3, 0.7}, 42};
  const std::size_t n = 1000000;
  const WireSequence a = generate_sequence(s, n), b = generate_sequence(s, n);
  CHECK(a.species == b.species);
  CHECK(a.seed == 42);
  std::size_t count0 = 0, pairs01 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    count0 += a.species[j] == 0;
    if (j + 1 < n) pairs01 += a.species[j] == 0 && a.species[j + 1] == 1;
  }
  CHECK(static_cast<double>(count0) / n == doctest::Approx(0.75).epsilon(0.01));
  CHECK(static_cast<double>(pairs01) / count0 == doctest::Approx(0.1).epsilon(0.03));

  DisorderSpec other = s;
  other.seed = 43;
  CHECK(generate_sequence(other, 100).species != generate_sequence(s, 100).species);

  const WireSequence pure = generate_sequence(DisorderSpec::pure(3, 2), 50);
  for (auto g : pure.species) CHECK(g == 2);
}

TEST_CASE("sequence file format") {
  WireSequence seq{{0, 1, 1}, 0};
  std::ostringstream os;
  write_sequence(os, seq);
  CHECK(os.str() == "1 0\n2 1\n3 1\n");
}

TEST_CASE("propagation of the ordered chain") {
  const double ka = 0.731;
  const CanonicalModel m = tb_model({{0.0}}, 2.0 * std::cos(ka));
  const WireSequence seq{std::vector<std::uint32_t>(200, 0), 0};
  const StateTrajectory tr = propagate_canonical(m, seq, {true});
  REQUIRE(tr.sign.size() == 201);
  for (int j = 1; j <= 201; ++j) {
    const double ref = oracle::chebyshev(j, ka);
    if (std::abs(ref) > 1e-6) REQUIRE(tr.sign[j - 1] == (ref > 0 ? 1 : -1));
    if (std::abs(ref) > 1e-3) REQUIRE(tr.log_abs[j - 1] == doctest::Approx(std::log(std::abs(ref))).epsilon(1e-9));
  }
  const double rho = std::hypot(oracle::chebyshev(201, ka), oracle::chebyshev(200, ka));
  CHECK(tr.log_rho() == doctest::Approx(std::log(rho)).epsilon(1e-10));
  const double th = std::atan2(oracle::chebyshev(200, ka), oracle::chebyshev(201, ka));
  CHECK(std::abs(std::remainder(tr.theta.theta - th, kPi)) < 1e-9);
}

TEST_CASE("propagation survives long growing chains") {
  // E = 3 in a pure chain: Psi_N ~ exp(N acosh(1.5))
  const CanonicalModel m = tb_model({{0.0}}, 3.0);
  const WireSequence seq{std::vector<std::uint32_t>(100000, 0), 0};
  const StateTrajectory tr = propagate_canonical(m, seq);
  CHECK(tr.log_rho() / 100000.0 == doctest::Approx(std::acosh(1.5)).epsilon(1e-4));
  for (auto s : tr.sign) REQUIRE(s == 1);
  CHECK_THROWS_AS(propagate_canonical(m, WireSequence{{0, 1}, 0}), Error);
}

TEST_CASE("propagation matches a long double reference on a random chain") {
  const std::vector<TightBindingSpecies> sp{{-1.0}, {1.0}};
  const WireSequence seq = generate_sequence(DisorderSpec::uncorrelated({0.5, 0.5}, 9), 300);
  const double e = 0.37;
  const StateTrajectory tr = propagate_canonical(tb_model(sp, e), seq, {true});
  long double prev = 0, cur = 1;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    const long double next = (e - sp[seq.species[j]].epsilon) * cur - prev;
    prev = cur;
    cur = next;
    if (std::fabs(cur) > 1e-6L) REQUIRE(tr.sign[j + 1] == (cur > 0 ? 1 : -1));
    REQUIRE(tr.log_abs[j + 1] ==
            doctest::Approx(static_cast<double>(std::log(std::fabs(cur)))).epsilon(1e-8));
  }
}

TEST_CASE("lattice transmission") {
  const std::vector<double> none;
  CHECK(lattice_transmission(none, 0.4).transmission == doctest::Approx(1.0));
  const std::vector<double> clean(50, 0.0);
  CHECK(lattice_transmission(clean, -1.1).transmission == doctest::Approx(1.0).epsilon(1e-12));
  // single impurity: T = 4 sin^2 q / (4 sin^2 q + eps^2)
  for (double e : {-1.5, 0.0, 0.8}) {
    const double eps = 0.9;
    const double s2 = 4.0 - e * e;
    const std::vector<double> one{eps};
    const LatticeScattering s = lattice_transmission(one, e);
    CHECK(s.transmission == doctest::Approx(s2 / (s2 + eps * eps)).epsilon(1e-12));
    CHECK(s.transmission + s.reflection == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lattice_transmission(none, 2.0), Error);
}

TEST_CASE("site matrices compose to the lattice transmission") {
  const WireSequence seq = generate_sequence(DisorderSpec::uncorrelated({0.5, 0.5}, 4), 40);
  std::vector<double> eps;
  for (auto g : seq.species) eps.push_back(g == 0 ? -0.5 : 0.5);
  const double e = 0.3;
  std::vector<TransferMatrix> ms;
  for (double v : eps) ms.push_back(tb_site_matrix(v, e));
  const double t_direct = lattice_transmission(eps, e).transmission;
  CHECK(scattering_amplitudes(compose(ms)).transmission() ==
        doctest::Approx(t_direct).epsilon(1e-10));
  std::vector<double> trace;
  const ChainScattering cs = transmission_matrix_chain(ms, &trace);
  CHECK(trace.size() == ms.size());
  CHECK(std::exp(2.0 * cs.log_abs_t) == doctest::Approx(t_direct).epsilon(1e-10));
  CHECK(std::abs(tb_site_matrix(0.7, e).det() - 1.0) < 1e-13);
}

TEST_CASE("chain scattering keeps log|t| when t underflows") {
  // 5000 strong delta barriers: |t| ~ exp(-N * const) far below 1e-308.
  const double k = 1.0;
  std::vector<TransferMatrix> ms;
  for (int i = 0; i < 5000; ++i) {
    ms.push_back(free_propagation(k, 0.37 * (1 + i % 3)) * delta_potential_matrix(4.0, k));
  }
  const ChainScattering cs = transmission_matrix_chain(ms);
  CHECK(std::isfinite(cs.log_abs_t));
  CHECK(cs.log_abs_t < -800.0);
  // first 10 units agree with the plain product
  const std::span<const TransferMatrix> head(ms.data(), 10);
  const ChainScattering hs = transmission_matrix_chain(head);
  const cplx t = scattering_amplitudes(compose(head)).t;
  CHECK(hs.log_abs_t == doctest::Approx(std::log(std::abs(t))).epsilon(1e-12));
  CHECK(std::abs(hs.amplitudes.t - t) < 1e-12 * std::abs(t));
}

TEST_CASE("discretized Schroedinger transmission") {
  // free grid: T = 1
  const std::vector<double> zero(1000, 0.0);
  CHECK(transmission_discretized(zero, 0.01, 2.0).transmission == doctest::Approx(1.0).epsilon(1e-12));
  // square barrier converges to the continuum result
  const double v0 = 2.0, l = 1.0, dx = 1e-3;
  const std::vector<double> bar(static_cast<std::size_t>(l / dx + 0.5), v0);
  for (double e : {0.5, 2.0, 4.0}) {
    const double t = transmission_discretized(bar, dx, std::sqrt(e)).transmission;
    CHECK(t == doctest::Approx(oracle::square_barrier_t(v0, l, e)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(transmission_discretized(zero, 0.5, 5.0), Error);
  CHECK_THROWS_AS(transmission_discretized(zero, 0.0, 1.0), Error);
}

TEST_CASE("degenerate compositions") {
  const WireSequence only0 = generate_sequence(DisorderSpec::uncorrelated({1.0, 0.0}, 4), 1000);
  for (auto g : only0.species) REQUIRE(g == 0);

  // absorbing rows: the first draw decides the whole wire
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const WireSequence s = generate_sequence({{0.5, 0.5}, {1.0, 0.0, 0.0, 1.0}, seed}, 500);
    for (auto g : s.species) REQUIRE(g == s.species.front());
  }
}

TEST_CASE("uncorrelated composition and pair frequencies") {
  const std::size_t n = 1000000;
  const WireSequence s = generate_sequence(DisorderSpec::uncorrelated({0.3, 0.7}, 7), n);
  std::size_t ones = 0, pairs[2][2] = {};
  for (std::size_t j = 0; j < n; ++j) {
    ones += s.species[j];
    if (j + 1 < n) ++pairs[s.species[j]][s.species[j + 1]];
  }
  CHECK(std::abs(static_cast<double>(ones) / n - 0.7) < 0.0014);
  const double c[2] = {0.3, 0.7};
  for (int g = 0; g < 2; ++g)
    for (int b = 0; b < 2; ++b) {
      // overlapping pairs: adjacent indicators are correlated
      const double p = c[g] * c[b], m = static_cast<double>(n - 1);
      const double overlap = g == b ? c[g] * p : 0.0;
      const double var = m * p * (1.0 - p) + 2.0 * (m - 1.0) * (overlap - p * p);
      CHECK(std::abs(pairs[g][b] - m * p) < 3.0 * std::sqrt(var));
    }
}

TEST_CASE("band centre orbit has period four") {
  const CanonicalModel m = tb_model({{0.0}}, 0.0);
  const StateTrajectory tr = propagate_canonical(m, WireSequence{std::vector<std::uint32_t>(40, 0), 0});
  // Psi_j = 1, 0, -1, 0, 1, ...
  for (std::size_t j = 1; j <= tr.sign.size(); ++j)
    if (j % 2 == 1) REQUIRE(tr.sign[j - 1] == (j % 4 == 1 ? 1 : -1));
  CHECK(tr.log_rho() == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(tr.psi_cur) < 1e-15);  // Psi_40
}

TEST_CASE("identity chain is transparent") {
  const std::vector<TransferMatrix> ms(1000, TransferMatrix::identity());
  const ChainScattering c = transmission_matrix_chain(ms);
  CHECK(std::abs(c.amplitudes.t - cplx(1.0)) < 1e-15);
  CHECK(c.log_abs_t == 0.0);
}
