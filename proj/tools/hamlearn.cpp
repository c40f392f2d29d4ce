// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hamlearn/experiments.hpp"

namespace {

using hamlearn::ExperimentConfig;
using hamlearn::ResultRecord;

struct CliOptions {
  std::string config_path;
  ExperimentConfig overrides;
  std::vector<double> field;

  CLI::Option* sites = nullptr;
  CLI::Option* field_opt = nullptr;
  CLI::Option* coupling = nullptr;
  CLI::Option* g = nullptr;
  CLI::Option* nbar = nullptr;
  CLI::Option* locality = nullptr;
  CLI::Option* dyn_locality = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* dt_grid = nullptr;
  CLI::Option* order = nullptr;
  CLI::Option* solver = nullptr;
  CLI::Option* sigma_grid = nullptr;
  CLI::Option* repeats = nullptr;
  CLI::Option* disorder = nullptr;
  CLI::Option* nmin = nullptr;
  CLI::Option* nmax = nullptr;
  CLI::Option* samples = nullptr;
  CLI::Option* fd_sigma = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* stride = nullptr;
  CLI::Option* max_sites = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* format = nullptr;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
  auto& o = opts.overrides;
  cmd->add_option("--config", opts.config_path,
                  "JSON config file; command line flags override its values")
      ->check(CLI::ExistingFile);
  opts.sites = cmd->add_option("--sites", o.sites, "Chain length N");
  opts.field_opt = cmd->add_option("--field", opts.field,
                                   "Per-site field c_x c_y c_z (3 values)")
                       ->expected(3);
  opts.coupling = cmd->add_option("--coupling", o.coupling, "Nearest-neighbour XX coupling J");
  opts.g = cmd->add_option("--g", o.g, "Reservoir coupling g");
  opts.nbar = cmd->add_option("--nbar", o.nbar, "Thermal occupation nbar");
  opts.locality = cmd->add_option("--input-locality", o.input_locality,
                                  "Maximum input-operator locality (steady experiments)");
  opts.dyn_locality = cmd->add_option("--dyn-input-locality", o.dyn_input_locality,
                                      "Maximum input-operator locality (dynamical experiments)");
  opts.dt = cmd->add_option("--dt", o.dt, "Evolution time step");
  opts.dt_grid = cmd->add_option("--dt-grid", o.dt_grid, "Time-step grid");
  opts.order = cmd->add_option("--order", o.fd_order, "Finite-difference order (1 or 2)");
  opts.solver = cmd->add_option("--solver", o.solver, "Dynamical solver: lsq, psd, or both");
  opts.sigma_grid = cmd->add_option("--sigma-grid", o.sigma_grid, "Noise level grid");
  opts.repeats = cmd->add_option("--repeats", o.noise_repeats, "Noise repeats per level");
  opts.disorder = cmd->add_option("--disorder-mode", o.disorder_mode,
                                  "Noise repeats draw 'seeds' or perturbed 'models'");
  opts.nmin = cmd->add_option("--nmin", o.n_min, "Smallest chain in the size sweep");
  opts.nmax = cmd->add_option("--nmax", o.n_max, "Largest chain in the size sweep");
  opts.samples = cmd->add_option("--samples", o.samples, "Monte-Carlo sample count");
  opts.fd_sigma = cmd->add_option("--fd-sigma", o.fd_sigma, "Monte-Carlo noise level");
  opts.seed = cmd->add_option("--seed", o.seed, "Base RNG seed");
  opts.stride = cmd->add_option("--stride", o.stride, "Input-set sweep stride");
  opts.max_sites = cmd->add_option("--max-sites", o.max_sites,
                                   "Refuse chains longer than this (hard cap 6)");
  opts.out = cmd->add_option("--out", o.out, "Output path (default stdout)");
  opts.format = cmd->add_option("--format", o.format, "Output format: csv or structured");
}

ExperimentConfig resolve_config(const CliOptions& opts) {
  ExperimentConfig config = opts.config_path.empty()
                                ? ExperimentConfig{}
                                : ExperimentConfig::from_json_file(opts.config_path);
  const auto& o = opts.overrides;
  if (opts.sites->count()) config.sites = o.sites;
  if (opts.field_opt->count()) {
    config.field = Eigen::Vector3d(opts.field[0], opts.field[1], opts.field[2]);
    config.fields.clear();
  }
  if (opts.coupling->count()) {
    config.coupling = o.coupling;
    config.couplings.clear();
  }
  if (opts.g->count()) config.g = o.g;
  if (opts.nbar->count()) config.nbar = o.nbar;
  if (opts.locality->count()) config.input_locality = o.input_locality;
  if (opts.dyn_locality->count()) config.dyn_input_locality = o.dyn_input_locality;
  if (opts.dt->count()) config.dt = o.dt;
  if (opts.dt_grid->count()) config.dt_grid = o.dt_grid;
  if (opts.order->count()) config.fd_order = o.fd_order;
  if (opts.solver->count()) config.solver = o.solver;
  if (opts.sigma_grid->count()) config.sigma_grid = o.sigma_grid;
  if (opts.repeats->count()) config.noise_repeats = o.noise_repeats;
  if (opts.disorder->count()) config.disorder_mode = o.disorder_mode;
  if (opts.nmin->count()) config.n_min = o.n_min;
  if (opts.nmax->count()) config.n_max = o.n_max;
  if (opts.samples->count()) config.samples = o.samples;
  if (opts.fd_sigma->count()) config.fd_sigma = o.fd_sigma;
  if (opts.seed->count()) config.seed = o.seed;
  if (opts.stride->count()) config.stride = o.stride;
  if (opts.max_sites->count()) config.max_sites = o.max_sites;
  if (opts.out->count()) config.out = o.out;
  if (opts.format->count()) config.format = o.format;
  return config;
}

int run_experiment(const CliOptions& opts, const std::string& name,
                   const std::function<std::vector<ResultRecord>(const ExperimentConfig&)>& fn) {
  const ExperimentConfig config = resolve_config(opts);
  config.validate();
  const std::vector<ResultRecord> records = fn(config);
  emit_results(records, config.out, hamlearn::result_format_from_name(config.format));

  std::cerr << "hamlearn " << name << ": ";
  if (name == "dynamic-size") {
    std::cerr << "N=" << config.n_min << ".." << config.n_max;
  } else if (name == "fd-variance") {
    std::cerr << "samples=" << config.samples;
  } else {
    std::cerr << "N=" << config.sites << ", model dimension "
              << config.model_space(config.sites).dimension();
  }
  std::cerr << ", " << records.size() << " record" << (records.size() == 1 ? "" : "s")
            << " -> " << (config.out.empty() ? "stdout" : config.out) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian and Lindbladian estimation experiments on thermal XX chains"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* description;
    std::vector<ResultRecord> (*fn)(const ExperimentConfig&);
  };
  const Entry entries[] = {
      {"steady-sweep",
       "Grow the steady-state input set and track estimator error and the singular spectrum",
       hamlearn::run_steady_sweep},
      {"noise-sweep", "Re-solve the steady-state system under measurement noise",
       hamlearn::run_noise_sweep},
      {"dynamic-size", "Dynamical reconstruction versus chain length (lsq and psd solvers)",
       hamlearn::run_dynamic_size},
      {"dynamic-dt", "Dynamical reconstruction versus time step for stencil orders 1 and 2",
       hamlearn::run_dynamic_dt},
      {"fd-variance", "Monte-Carlo variance ratio of the two derivative stencils",
       hamlearn::run_fd_variance},
  };

  std::vector<std::unique_ptr<CliOptions>> options;
  for (const Entry& entry : entries) {
    CLI::App* cmd = app.add_subcommand(entry.name, entry.description);
    options.push_back(std::make_unique<CliOptions>());
    CliOptions* opts = options.back().get();
    add_common_options(cmd, *opts);
    auto fn = entry.fn;
    std::string name = entry.name;
    cmd->callback([opts, fn, name]() { run_experiment(*opts, name, fn); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
