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

#include "qwire/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qwire/error.hpp"
#include "qwire/models.hpp"
#include "qwire/observables.hpp"
#include "qwire/parallel.hpp"
#include "qwire/tlsolver.hpp"

#ifndef QWIRE_VERSION
#define QWIRE_VERSION "0.0.0"
#endif

namespace qwire::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxEnergies = 1000000;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
  return s;
}

class Problems {
 public:
  void add(std::string p) { list_.push_back(std::move(p)); }
  bool empty() const { return list_.empty(); }
  [[noreturn]] void raise() { throw ConfigError(std::move(list_)); }

  std::optional<double> number(const json& obj, const char* key, const std::string& where,
                               bool required) {
    if (!obj.contains(key)) {
      if (required) add(where + "." + key + " is required");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      add(where + "." + key + " must be a finite number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::uint64_t> count(const json& obj, const char* key, const std::string& where,
                                     bool required, std::uint64_t min_value = 1) {
    const auto v = number(obj, key, where, required);
    if (!v) return std::nullopt;
    if (*v < static_cast<double>(min_value) || *v != std::floor(*v) || *v > 9.0e15) {
      add(where + "." + key + " must be an integer >= " + std::to_string(min_value));
      return std::nullopt;
    }
    return static_cast<std::uint64_t>(*v);
  }

  std::vector<double> numbers(const json& v, const std::string& where) {
    std::vector<double> out;
    if (!v.is_array()) {
      add(where + " must be an array of numbers");
      return out;
    }
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        add(where + " must contain finite numbers only");
        return {};
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

 private:
  std::vector<std::string> list_;
};

void parse_model(const json& doc, Problems& pr, RunConfig& cfg) {
  if (!doc.contains("model") || !doc["model"].is_object()) {
    pr.add("model block is required");
    return;
  }
  const json& m = doc["model"];
  if (!m.contains("type") || !m["type"].is_string()) {
    pr.add("model.type is required (tight-binding | potential)");
    return;
  }
  cfg.model.type = m["type"].get<std::string>();
  if (cfg.model.type == "tight-binding") {
    if (!m.contains("species")) {
      pr.add("model.species is required for tight-binding");
      return;
    }
    cfg.model.species = pr.numbers(m["species"], "model.species");
    if (m["species"].is_array() && m["species"].empty()) pr.add("model.species must not be empty");
  } else if (cfg.model.type == "potential") {
    if (m.contains("samples")) {
      cfg.model.samples = pr.numbers(m["samples"], "model.samples");
      const auto dx = pr.number(m, "dx", "model", true);
      if (dx && !(*dx > 0.0)) pr.add("model.dx must be positive");
      cfg.model.sample_dx = dx;
    } else {
      const std::string shape = m.value("shape", "");
      if (shape != "square-barrier") {
        pr.add("model.shape must be square-barrier (or give model.samples)");
        return;
      }
      cfg.model.shape = shape;
      cfg.model.height = pr.number(m, "height", "model", true).value_or(0.0);
      cfg.model.width = pr.number(m, "width", "model", true).value_or(0.0);
      if (!(cfg.model.width > 0.0)) pr.add("model.width must be positive");
    }
  } else {
    pr.add("model.type must be tight-binding or potential, got '" + cfg.model.type + "'");
  }
}

void parse_disorder(const json& doc, Problems& pr, RunConfig& cfg, const Overrides& ov) {
  const std::size_t s = cfg.model.type == "tight-binding" ? cfg.model.species.size() : 1;
  if (!doc.contains("disorder")) {
    if (s > 1) pr.add("disorder block is required with more than one species");
    cfg.disorder = DisorderSpec::pure(std::max<std::size_t>(s, 1));
  } else {
    const json& d = doc["disorder"];
    if (!d.is_object()) {
      pr.add("disorder must be an object");
      return;
    }
    if (d.contains("c")) {
      cfg.disorder.c = pr.numbers(d["c"], "disorder.c");
    } else {
      if (s > 1) pr.add("disorder.c is required");
      cfg.disorder.c = DisorderSpec::pure(std::max<std::size_t>(s, 1)).c;
    }
    if (d.contains("p")) {
      if (!d["p"].is_array()) {
        pr.add("disorder.p must be a matrix");
      } else {
        for (std::size_t g = 0; g < d["p"].size(); ++g) {
          const auto row = pr.numbers(d["p"][g], "disorder.p[" + std::to_string(g) + "]");
          if (row.size() != s) pr.add("disorder.p rows must have one entry per species");
          cfg.disorder.p.insert(cfg.disorder.p.end(), row.begin(), row.end());
        }
        if (d["p"].size() != s) pr.add("disorder.p must have one row per species");
      }
    }
    if (auto seed = pr.count(d, "seed", "disorder", false, 0)) cfg.disorder.seed = *seed;
  }
  if (ov.seed) cfg.disorder.seed = *ov.seed;
  if (cfg.disorder.c.size() != s) {
    pr.add("disorder.c must have one entry per species");
    return;
  }
  try {
    cfg.disorder.validate();
  } catch (const Error& e) {
    pr.add(std::string("disorder: ") + e.what());
  }
}

void parse_energies(const json& doc, Problems& pr, RunConfig& cfg) {
  if (!doc.contains("energies")) {
    pr.add("energies block is required");
    return;
  }
  const json& e = doc["energies"];
  if (e.is_array()) {
    cfg.energies = pr.numbers(e, "energies");
  } else if (e.is_object() && e.contains("list")) {
    cfg.energies = pr.numbers(e["list"], "energies.list");
  } else if (e.is_object()) {
    const auto lo = pr.number(e, "min", "energies", true);
    const auto hi = pr.number(e, "max", "energies", true);
    const auto step = pr.number(e, "step", "energies", true);
    if (!lo || !hi || !step) return;
    if (!(*step > 0.0)) {
      pr.add("energies.step must be positive");
      return;
    }
    if (*hi < *lo) {
      pr.add("energies.max must not be below energies.min");
      return;
    }
    const double n = std::floor((*hi - *lo) / *step + 1e-9);
    if (n + 1 > kMaxEnergies) {
      pr.add("energy grid has too many points");
      return;
    }
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
      cfg.energies.push_back(*lo + static_cast<double>(i) * *step);
  } else {
    pr.add("energies must be a list or {min, max, step}");
    return;
  }
  if (cfg.energies.empty()) pr.add("energies must not be empty");
  std::sort(cfg.energies.begin(), cfg.energies.end());
  cfg.energies.erase(std::unique(cfg.energies.begin(), cfg.energies.end()), cfg.energies.end());
}

void parse_parameters(const json& doc, Problems& pr, RunConfig& cfg) {
  if (!doc.contains("parameters")) return;
  const json& p = doc["parameters"];
  if (!p.is_object()) {
    pr.add("parameters must be an object");
    return;
  }
  auto& e = cfg.params;
  if (auto v = pr.count(p, "sites", "parameters", false, 1)) e.sites = *v;
  if (auto v = pr.count(p, "n_theta", "parameters", false, 2)) {
    if (*v % 2) pr.add("parameters.n_theta must be even");
    e.n_theta = *v;
  }
  if (auto v = pr.number(p, "tol", "parameters", false)) {
    if (!(*v > 0.0)) pr.add("parameters.tol must be positive");
    e.tol = *v;
  }
  if (auto v = pr.number(p, "delta_e", "parameters", false)) {
    if (!(*v > 0.0)) pr.add("parameters.delta_e must be positive");
    e.delta_e = *v;
  }
  if (auto v = pr.number(p, "dx", "parameters", false)) {
    if (!(*v > 0.0)) pr.add("parameters.dx must be positive");
    e.dx = *v;
  }
  if (auto v = pr.count(p, "max_iter", "parameters", false, 1)) e.max_iter = *v;
  if (auto v = pr.number(p, "damping", "parameters", false)) {
    if (!(*v > 0.0 && *v <= 1.0)) pr.add("parameters.damping must lie in (0, 1]");
    e.damping = *v;
  }
  if (auto v = pr.count(p, "ipr_states", "parameters", false, 0)) e.ipr_states = *v;
}

json effective_json(const RunConfig& cfg) {
  json m = {{"type", cfg.model.type}};
  if (cfg.model.type == "tight-binding") {
    m["species"] = cfg.model.species;
  } else if (!cfg.model.samples.empty()) {
    m["samples"] = cfg.model.samples;
    m["dx"] = cfg.model.sample_dx.value_or(0.0);
  } else {
    m["shape"] = cfg.model.shape;
    m["height"] = cfg.model.height;
    m["width"] = cfg.model.width;
  }
  json p = {{"sites", cfg.params.sites},       {"n_theta", cfg.params.n_theta},
            {"tol", cfg.params.tol},           {"delta_e", cfg.params.delta_e},
            {"max_iter", cfg.params.max_iter}, {"damping", cfg.params.damping},
            {"ipr_states", cfg.params.ipr_states}};
  if (cfg.params.dx) p["dx"] = *cfg.params.dx;
  return {{"model", m},
          {"disorder", {{"c", cfg.disorder.c}, {"p", cfg.disorder.p}, {"seed", cfg.disorder.seed}}},
          {"engine", cfg.engine},
          {"energies", cfg.energies},
          {"parameters", p}};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

RunConfig parse_config(const json& doc, const Overrides& ov) {
  Problems pr;
  RunConfig cfg;
  if (!doc.is_object()) {
    pr.add("config must be a JSON object");
    pr.raise();
  }
  parse_model(doc, pr, cfg);
  parse_disorder(doc, pr, cfg, ov);
  parse_energies(doc, pr, cfg);
  parse_parameters(doc, pr, cfg);

  cfg.engine = doc.value("engine", std::string("finite"));
  if (ov.mode) cfg.engine = *ov.mode;
  if (cfg.engine != "finite" && cfg.engine != "tl" && cfg.engine != "both")
    pr.add("engine must be finite, tl or both");

  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) {
      pr.add("output must be an object");
    } else {
      if (o.contains("path")) {
        if (o["path"].is_string())
          cfg.output_path = o["path"].get<std::string>();
        else
          pr.add("output.path must be a string");
      }
      if (o.contains("format")) {
        if (o["format"].is_string())
          cfg.format = o["format"].get<std::string>();
        else
          pr.add("output.format must be a string");
      }
    }
  }
  if (ov.output) cfg.output_path = *ov.output;
  if (ov.format) cfg.format = *ov.format;
  if (cfg.format != "csv" && cfg.format != "json") pr.add("format must be csv or json");
  if (ov.threads && *ov.threads < 0) pr.add("--threads must be >= 0");

  if (!pr.empty()) pr.raise();
  cfg.effective = effective_json(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return parse_config(doc, ov);
}

namespace {

void set_lambda(EnergyScanRecord& r, double lambda) {
  r.lambda = lambda;
  if (lambda > 0.0) r.xi = 1.0 / lambda;
}

TightBindingFamily tb_family(const RunConfig& cfg) {
  std::vector<TightBindingSpecies> s;
  for (double e : cfg.model.species) s.push_back({e});
  return TightBindingFamily(std::move(s));
}

std::vector<double> onsite(const RunConfig& cfg, const WireSequence& seq) {
  std::vector<double> eps(seq.size());
  for (std::size_t j = 0; j < seq.size(); ++j) eps[j] = cfg.model.species[seq.species[j]];
  return eps;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.n_theta = cfg.params.n_theta;
  o.tol = cfg.params.tol;
  o.max_iter = cfg.params.max_iter;
  o.damping = cfg.params.damping;
  o.fallback_damping = std::min(o.fallback_damping, o.damping);
  o.parallel = false;  // the sweep is parallel over energies
  return o;
}

template <class Row>
std::vector<EnergyScanRecord> sweep(const RunConfig& cfg, const std::vector<std::string>& engines,
                                    Row row) {
  const std::size_t m = cfg.energies.size();
  const std::size_t k = engines.size();
  std::vector<EnergyScanRecord> out(m * k);
  parallel_for(m * k, [&](std::size_t idx) {
    EnergyScanRecord& r = out[idx];
    r.energy = cfg.energies[idx / k];
    r.engine = engines[idx % k];
    try {
      row(r);
    } catch (const Error&) {
      r.T = r.R = r.lambda = r.xi = r.g = r.idos = r.ipr = std::nullopt;
      r.converged = false;
    }
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.energy < b.energy; });
  return out;
}

std::vector<std::string> engines_of(const RunConfig& cfg) {
  if (cfg.engine == "both") return {"finite", "tl"};
  return {cfg.engine};
}

}  // namespace

std::vector<EnergyScanRecord> cmd_transmit(const RunConfig& cfg) {
  if (cfg.model.type == "potential") {
    double k_max = 0.0;
    for (double e : cfg.energies) k_max = std::max(k_max, std::sqrt(std::max(e, 0.0)));
    return sweep(cfg, {"dse"}, [&](EnergyScanRecord& r) {
      if (!(r.energy > 0.0)) throw Error(ErrorCode::InvalidArgument, "energy must be positive");
      const double k = std::sqrt(r.energy);
      std::vector<double> samples;
      double dx = 0.0;
      if (!cfg.model.samples.empty()) {
        samples = cfg.model.samples;
        dx = *cfg.model.sample_dx;
      } else {
        // default spacing keeps k dx <= 0.01 at the largest energy
        const double want = cfg.params.dx.value_or(0.01 / std::max(k_max, 1e-300));
        const auto n = static_cast<std::size_t>(std::ceil(cfg.model.width / want - 1e-9));
        dx = cfg.model.width / static_cast<double>(std::max<std::size_t>(n, 1));
        samples.assign(std::max<std::size_t>(n, 1), cfg.model.height);
      }
      const LatticeScattering s = transmission_discretized(samples, dx, k);
      r.T = s.transmission;
      r.R = s.reflection;
      r.converged = true;
    });
  }
  const WireSequence seq = generate_sequence(cfg.disorder, cfg.params.sites);
  const std::vector<double> eps = onsite(cfg, seq);
  return sweep(cfg, {"lattice"}, [&](EnergyScanRecord& r) {
    r.seed = seq.seed;
    const LatticeScattering s = lattice_transmission(eps, r.energy);
    r.T = s.transmission;
    r.R = s.reflection;
    set_lambda(r, lyapunov_from_log_transmission(s.log_abs_t, eps.size()).lambda);
    r.converged = true;
  });
}

std::vector<EnergyScanRecord> cmd_dos(const RunConfig& cfg) {
  const TightBindingFamily family = tb_family(cfg);
  const WireSequence seq = generate_sequence(cfg.disorder, cfg.params.sites);
  const SolverOptions opts = solver_options(cfg);
  const double de = cfg.params.delta_e;
  const int orient = family.node_orientation();

  return sweep(cfg, engines_of(cfg), [&](EnergyScanRecord& r) {
    const CanonicalModel mid = family.at(r.energy);
    if (r.engine == "finite") {
      r.seed = seq.seed;
      const NodeCountTally lo = node_count(family.at(r.energy - de), seq);
      const NodeCountTally hi = node_count(family.at(r.energy + de), seq);
      double diff = 0.0;
      for (std::size_t a = 0; a < mid.species_count(); ++a)
        diff += (mid.k(a) > 0 ? 1.0 : -1.0) * (hi.fraction(a) - lo.fraction(a));
      r.g = std::abs(diff) / (2.0 * de);
      const double f = node_count(mid, seq).fraction();
      if (orient != 0) r.idos = orient < 0 ? 1.0 - f : f;
      r.converged = true;
      return;
    }
    const PhaseSolution at = solve_phase_distributions(mid, cfg.disorder, opts);
    const CanonicalModel m_lo = family.at(r.energy - de), m_hi = family.at(r.energy + de);
    const PhaseSolution s_lo = solve_phase_distributions(m_lo, cfg.disorder, opts, &at.tables);
    const PhaseSolution s_hi = solve_phase_distributions(m_hi, cfg.disorder, opts, &at.tables);
    r.g = std::abs(tl_weighted_half_pi(s_hi.tables, m_hi, cfg.disorder) -
                   tl_weighted_half_pi(s_lo.tables, m_lo, cfg.disorder)) /
          (2.0 * de);
    double plain = 0.0;
    for (std::size_t a = 0; a < mid.species_count(); ++a)
      plain += cfg.disorder.c[a] * at.tables.at_half_pi(a);
    if (orient != 0) r.idos = orient < 0 ? plain : 1.0 - plain;
    const double lambda = tl_lyapunov(at.tables, mid, cfg.disorder);
    set_lambda(r, lambda < 1e-12 ? 0.0 : lambda);
    r.converged = at.report.converged && s_lo.report.converged && s_hi.report.converged;
  });
}

std::vector<EnergyScanRecord> cmd_lyapunov(const RunConfig& cfg) {
  const TightBindingFamily family = tb_family(cfg);
  const WireSequence seq = generate_sequence(cfg.disorder, cfg.params.sites);
  const SolverOptions opts = solver_options(cfg);
  const std::vector<double> eps = cfg.params.ipr_states ? onsite(cfg, seq) : std::vector<double>{};

  return sweep(cfg, engines_of(cfg), [&](EnergyScanRecord& r) {
    const CanonicalModel model = family.at(r.energy);
    if (r.engine == "finite") {
      r.seed = seq.seed;
      set_lambda(r, lyapunov_from_state(propagate_canonical(model, seq)).lambda);
      if (cfg.params.ipr_states) {
        const auto states = tb_eigenstates_near(eps, r.energy, cfg.params.ipr_states);
        double acc = 0.0;
        for (const auto& st : states) acc += ipr(st.vector);
        r.ipr = acc / static_cast<double>(states.size());
      }
      r.converged = true;
      return;
    }
    const PhaseSolution sol = solve_phase_distributions(model, cfg.disorder, opts);
    const double lambda = tl_lyapunov(sol.tables, model, cfg.disorder);
    set_lambda(r, lambda < 1e-12 ? 0.0 : lambda);
    r.converged = sol.report.converged;
  });
}

std::string config_hash(const json& effective) {
  const std::string s = effective.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? fmt(*v) : std::string();
}

json to_json(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

}  // namespace

void write_csv(std::ostream& os, const Metadata& meta, const std::vector<EnergyScanRecord>& rows) {
  os << "# tool: qwire " << QWIRE_VERSION << '\n'
     << "# timestamp: " << meta.timestamp << '\n'
     << "# command: " << meta.command << '\n'
     << "# rng: " << kRngName << '\n'
     << "# seed: " << meta.seed << '\n'
     << "# config_hash: fnv1a64:" << meta.config_hash << '\n'
     << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << fmt(r.energy) << ',' << fmt(r.T) << ',' << fmt(r.R) << ',' << fmt(r.lambda) << ','
       << fmt(r.xi) << ',' << fmt(r.g) << ',' << fmt(r.idos) << ',' << fmt(r.ipr) << ','
       << r.engine << ',' << (r.converged ? "true" : "false") << ',';
    if (r.seed) os << *r.seed;
    os << '\n';
  }
}

void write_json(std::ostream& os, const Metadata& meta, const std::vector<EnergyScanRecord>& rows) {
  json records = json::array();
  for (const auto& r : rows) {
    records.push_back({{"energy", r.energy},
                       {"T", to_json(r.T)},
                       {"R", to_json(r.R)},
                       {"lambda", to_json(r.lambda)},
                       {"xi", to_json(r.xi)},
                       {"g", to_json(r.g)},
                       {"idos", to_json(r.idos)},
                       {"ipr", to_json(r.ipr)},
                       {"engine", r.engine},
                       {"converged", r.converged},
                       {"seed", r.seed ? json(*r.seed) : json(nullptr)}});
  }
  const json doc = {{"metadata",
                     {{"tool", std::string("qwire ") + QWIRE_VERSION},
                      {"timestamp", meta.timestamp},
                      {"command", meta.command},
                      {"rng", std::string(kRngName)},
                      {"seed", meta.seed},
                      {"config_hash", "fnv1a64:" + meta.config_hash}}},
                    {"records", records}};
  os << doc.dump(2) << '\n';
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_command(const std::string& command, const RunConfig& cfg) {
  std::vector<std::string> problems;
  if (command != "transmit" && command != "dos" && command != "lyapunov")
    problems.push_back("unknown command '" + command + "'");
  if ((command == "dos" || command == "lyapunov") && cfg.model.type != "tight-binding")
    problems.push_back(command + " needs a tight-binding model");
  if ((command == "dos" || command == "lyapunov") && cfg.params.sites < 3)
    problems.push_back("parameters.sites must be at least 3 for " + command);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace

int run(const std::string& command, const std::string& config_path, const Overrides& ov,
        std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path, ov);
    check_command(command, cfg);
  } catch (const ConfigError& e) {
    err << "config error:\n";
    for (const auto& p : e.problems()) err << "  - " << p << '\n';
    return kExitConfig;
  }
  set_thread_count(ov.threads.value_or(0));

  std::vector<EnergyScanRecord> rows;
  try {
    if (command == "transmit")
      rows = cmd_transmit(cfg);
    else if (command == "dos")
      rows = cmd_dos(cfg);
    else
      rows = cmd_lyapunov(cfg);
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  const Metadata meta{command, utc_now(), cfg.disorder.seed, config_hash(cfg.effective)};
  std::ostringstream buf;
  if (cfg.format == "json")
    write_json(buf, meta, rows);
  else
    write_csv(buf, meta, rows);

  if (cfg.output_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
      err << "cannot write '" << cfg.output_path << "'\n";
      return kExitNumerical;
    }
    f << buf.str();
  }

  const auto ok = static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.converged; }));
  if (command == "transmit") {
    if (ok != rows.size()) {
      err << (rows.size() - ok) << " of " << rows.size() << " rows failed\n";
      return kExitNumerical;
    }
    return kExitOk;
  }
  if (static_cast<double>(ok) < kRequiredConverged * static_cast<double>(rows.size())) {
    err << "only " << ok << " of " << rows.size() << " rows converged\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace qwire::cli
