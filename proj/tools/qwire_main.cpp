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

#include <CLI11.hpp>
#include <iostream>

#include "qwire/cli.hpp"

namespace {

struct Args {
  std::string config;
  std::string output;
  std::string format;
  std::string mode;
  int threads = 0;
  std::uint64_t seed = 0;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Args& a,
                      bool with_mode) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", a.config, "JSON run config")->required();
  sub->add_option("--output", a.output, "output file (default: stdout)");
  sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", a.threads, "worker threads, 0 = auto");
  sub->add_option("--seed", a.seed, "overrides disorder.seed");
  if (with_mode)
    sub->add_option("--mode", a.mode, "finite, tl or both (overrides engine)")
        ->check(CLI::IsMember({"finite", "tl", "both"}));
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission, localization and density of states of disordered wires"};
  app.require_subcommand(1);
  Args a;
  auto* transmit = add_command(app, "transmit", "transmission and reflection per energy", a, false);
  auto* dos = add_command(app, "dos", "density of states per energy", a, true);
  auto* lyap = add_command(app, "lyapunov", "Lyapunov exponent and localization length", a, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qwire::cli::kExitConfig;
  }

  qwire::cli::Overrides ov;
  CLI::App* used = app.got_subcommand(transmit) ? transmit : app.got_subcommand(dos) ? dos : lyap;
  if (used->count("--output")) ov.output = a.output;
  if (used->count("--format")) ov.format = a.format;
  if (used->count("--threads")) ov.threads = a.threads;
  if (used->count("--seed")) ov.seed = a.seed;
  if (used != transmit && used->count("--mode")) ov.mode = a.mode;
  return qwire::cli::run(used->get_name(), a.config, ov, std::cout, std::cerr);
}
