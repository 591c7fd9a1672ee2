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

#include "qwire/models.hpp"

#include <cmath>
#include <numbers>

#include "qwire/error.hpp"

namespace qwire {

CanonicalModel tb_model(const std::vector<TightBindingSpecies>& species, double energy) {
  if (species.empty()) throw Error(ErrorCode::InvalidArgument, "tb_model: no species");
  const std::size_t n = species.size();
  std::vector<double> j(n * n);
  for (std::size_t prev = 0; prev < n; ++prev)
    for (std::size_t cur = 0; cur < n; ++cur) j[prev * n + cur] = energy - species[cur].epsilon;
  return CanonicalModel(energy, std::vector<double>(n, 1.0), std::move(j));
}

TightBindingFamily::TightBindingFamily(std::vector<TightBindingSpecies> species)
    : species_(std::move(species)) {
  if (species_.empty()) throw Error(ErrorCode::InvalidArgument, "tight-binding: no species");
  for (const auto& s : species_)
    if (!std::isfinite(s.epsilon))
      throw Error(ErrorCode::InvalidArgument, "tight-binding: non-finite on-site energy");
}

MatrixCellFamily::MatrixCellFamily(std::vector<CellFn> cells, std::string name, int orientation)
    : cells_(std::move(cells)), name_(std::move(name)), orientation_(orientation) {
  if (cells_.empty()) throw Error(ErrorCode::InvalidArgument, "matrix-cell: no species");
}

CanonicalModel MatrixCellFamily::at(double energy) const {
  const std::size_t n = cells_.size();
  std::vector<RealCanonicalCoefficients> coef;
  coef.reserve(n);
  for (const auto& cell : cells_) coef.push_back(real_coefficients_from_matrix(cell(energy)));

  std::vector<double> k(n), j(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    if (std::abs(coef[g].kfun) < kSingularK)
      throw Error(ErrorCode::SingularK,
                  "K vanishes for species " + std::to_string(g) + " at E=" + std::to_string(energy));
    k[g] = coef[g].kfun;
  }
  for (std::size_t prev = 0; prev < n; ++prev)
    for (std::size_t cur = 0; cur < n; ++cur)
      j[prev * n + cur] = coef[cur].sbar + coef[prev].s * k[cur] / k[prev];
  return CanonicalModel(energy, std::move(k), std::move(j));
}

FunctionFamily::FunctionFamily(std::size_t species, Fn fn, std::string name, int orientation)
    : species_(species), fn_(std::move(fn)), name_(std::move(name)), orientation_(orientation) {
  if (species_ == 0 || !fn_) throw Error(ErrorCode::InvalidArgument, "function model: empty");
}

CanonicalModel FunctionFamily::at(double energy) const {
  CanonicalModel m = fn_(energy);
  if (m.species_count() != species_)
    throw Error(ErrorCode::InvalidArgument, "function model: species count changed");
  return m;
}

double pure_chain_lambda(double epsilon, double energy) {
  const double x = std::abs(energy - epsilon) / 2.0;
  return x > 1.0 ? std::acosh(x) : 0.0;
}

double pure_chain_dos(double epsilon, double energy) {
  const double d = energy - epsilon;
  if (!(std::abs(d) < 2.0))
    throw Error(ErrorCode::OutOfBand, "E - eps = " + std::to_string(d) + " is outside (-2, 2)");
  return 1.0 / (std::numbers::pi * std::sqrt(4.0 - d * d));
}

double pure_chain_idos(double epsilon, double energy) {
  const double d = energy - epsilon;
  if (d <= -2.0) return 0.0;
  if (d >= 2.0) return 1.0;
  return 1.0 - std::acos(d / 2.0) / std::numbers::pi;
}

}  // namespace qwire
