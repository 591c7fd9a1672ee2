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

/** @file models.hpp
 *  @brief Concrete potentials expressed as recursion coefficients.
 *
 *  A ModelFamily turns an energy into a CanonicalModel. The engines only
 *  ever see J and K; the phase map, its inverse and the radius factor
 *  follow from those two, so a new model only has to provide them.
 */

#ifndef QWIRE_MODELS_HPP
#define QWIRE_MODELS_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qwire/canonical.hpp"
#include "qwire/xfer.hpp"

namespace qwire {

class ModelFamily {
 public:
  virtual ~ModelFamily() = default;
  virtual std::size_t species_count() const = 0;
  virtual CanonicalModel at(double energy) const = 0;
  virtual std::string name() const = 0;
  /// How the sign-change fraction relates to the integrated density of
  /// states: -1 means idos = 1 - fraction (count falls with energy), +1
  /// means idos = fraction, 0 means unknown.
  virtual int node_orientation() const { return 0; }
};

/// Diagonal tight-binding site; hopping is fixed to 1.
struct TightBindingSpecies {
  double epsilon = 0.0;
};

/// J(g', g) = E - eps_g, K = 1.
CanonicalModel tb_model(const std::vector<TightBindingSpecies>& species, double energy);

class TightBindingFamily final : public ModelFamily {
 public:
  explicit TightBindingFamily(std::vector<TightBindingSpecies> species);
  std::size_t species_count() const override { return species_.size(); }
  CanonicalModel at(double energy) const override { return tb_model(species_, energy); }
  std::string name() const override { return "tight-binding"; }
  int node_orientation() const override { return -1; }
  const std::vector<TightBindingSpecies>& species() const { return species_; }

 private:
  std::vector<TightBindingSpecies> species_;
};

/// Species given by the transfer matrix of one cell as a function of
/// energy (real potentials). J(g', g) = sbar(g) + s(g') K(g) / K(g').
class MatrixCellFamily final : public ModelFamily {
 public:
  using CellFn = std::function<TransferMatrix(double energy)>;
  explicit MatrixCellFamily(std::vector<CellFn> cells, std::string name = "matrix-cell",
                            int orientation = 0);
  std::size_t species_count() const override { return cells_.size(); }
  CanonicalModel at(double energy) const override;
  std::string name() const override { return name_; }
  int node_orientation() const override { return orientation_; }

 private:
  std::vector<CellFn> cells_;
  std::string name_;
  int orientation_;
};

/// Escape hatch: any callable producing the coefficients directly.
class FunctionFamily final : public ModelFamily {
 public:
  using Fn = std::function<CanonicalModel(double energy)>;
  FunctionFamily(std::size_t species, Fn fn, std::string name = "custom", int orientation = 0);
  std::size_t species_count() const override { return species_; }
  CanonicalModel at(double energy) const override;
  std::string name() const override { return name_; }
  int node_orientation() const override { return orientation_; }

 private:
  std::size_t species_;
  Fn fn_;
  std::string name_;
  int orientation_;
};

/// Closed forms for the ordered tight-binding chain.
double pure_chain_lambda(double epsilon, double energy);
/// Throws OutOfBand for |E - eps| >= 2.
double pure_chain_dos(double epsilon, double energy);
/// Integrated density of states per site; 0 below the band, 1 above.
double pure_chain_idos(double epsilon, double energy);

}  // namespace qwire

#endif  // QWIRE_MODELS_HPP
