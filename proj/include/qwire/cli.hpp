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

/** @file cli.hpp
 *  @brief Batch front end: JSON run configs, energy sweeps, CSV/JSON output.
 */

#ifndef QWIRE_CLI_HPP
#define QWIRE_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwire/chain.hpp"

namespace qwire::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Share of rows that must converge for dos/lyapunov to exit 0.
inline constexpr double kRequiredConverged = 0.9;

/// Exact CSV header; part of the public output contract.
inline constexpr const char* kCsvHeader = "energy,T,R,lambda,xi,g,idos,ipr,engine,converged,seed";

struct ModelConfig {
  std::string type;                 ///< "tight-binding" or "potential"
  std::vector<double> species;      ///< on-site energies (tight-binding)
  std::string shape;                ///< "square-barrier" (potential)
  double height = 0.0;
  double width = 0.0;
  std::vector<double> samples;      ///< explicit potential samples
  std::optional<double> sample_dx;  ///< spacing of `samples`
};

struct EngineParams {
  std::size_t sites = 100000;
  std::size_t n_theta = 4096;
  double tol = 1e-10;
  double delta_e = 1e-3;
  std::optional<double> dx;
  std::size_t max_iter = 100000;
  double damping = 1.0;
  std::size_t ipr_states = 0;  ///< > 0: mean IPR of that many eigenstates near E
};

struct RunConfig {
  ModelConfig model;
  DisorderSpec disorder;
  std::string engine = "finite";  ///< finite | tl | both
  std::vector<double> energies;
  EngineParams params;
  std::string output_path;
  std::string format = "csv";
  nlohmann::json effective;  ///< normalized config, hashed into the metadata
};

/// All problems found in a config, reported together.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct Overrides {
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

/// Validates everything before any computation. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const Overrides& ov = {});
RunConfig load_config(const std::string& path, const Overrides& ov = {});

struct EnergyScanRecord {
  double energy = 0.0;
  std::optional<double> T, R, lambda, xi, g, idos, ipr;
  std::string engine;
  bool converged = false;
  std::optional<std::uint64_t> seed;
};

std::vector<EnergyScanRecord> cmd_transmit(const RunConfig& cfg);
std::vector<EnergyScanRecord> cmd_dos(const RunConfig& cfg);
std::vector<EnergyScanRecord> cmd_lyapunov(const RunConfig& cfg);

struct Metadata {
  std::string command;
  std::string timestamp;  ///< ISO 8601 UTC
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// FNV-1a (64 bit) of the normalized config, as 16 hex digits.
std::string config_hash(const nlohmann::json& effective);

void write_csv(std::ostream& os, const Metadata& meta, const std::vector<EnergyScanRecord>& rows);
void write_json(std::ostream& os, const Metadata& meta, const std::vector<EnergyScanRecord>& rows);

/// Runs one subcommand end to end and returns the exit code. Output goes to
/// the configured path, or to `out` when none is set; diagnostics to `err`.
int run(const std::string& command, const std::string& config_path, const Overrides& ov,
        std::ostream& out, std::ostream& err);

}  // namespace qwire::cli

#endif  // QWIRE_CLI_HPP
