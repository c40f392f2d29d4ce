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

#include "hamlearn/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hamlearn/random.hpp"

namespace hamlearn {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      break;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string> solver_selection(const std::string& solver) {
  if (solver == "both") return {"lsq", "psd"};
  return {solver};
}

// Shared per-size setup for the dynamical experiments.
struct DynamicalSetup {
  SpinChainSpec spec;
  ModelSpace model;
  LindbladGenerator gen;
  std::vector<DensityMatrix> states;
  std::vector<PauliString> inputs;
  Eigen::VectorXd x_true;
};

DynamicalSetup prepare_dynamical(const ExperimentConfig& config, std::size_t n) {
  DynamicalSetup setup{
      config.chain_spec(n),
      config.model_space(n),
      {},
      {},
      {},
      {},
  };
  setup.gen = build_thermal_generator(setup.spec, JumpBasisMode::Pauli);
  const DensityMatrix rho_ss = steady_state(setup.gen);
  setup.states = conjugated_state_set(
      rho_ss, enumerate_basis({n, 1, /*include_lower=*/true}));
  setup.inputs = enumerate_basis(
      {n, std::min(config.dyn_input_locality, n), /*include_lower=*/true});
  setup.x_true = true_model_vector(setup.spec, setup.model);
  return setup;
}

ResultRecord dynamical_record(const DynamicalSetup& setup, const CorrelationSystem& sys,
                              const EstimationReport& report, const std::string& solver,
                              const ExperimentConfig& config, double variable, int order) {
  const SectorErrors err =
      error_metrics(setup.x_true, report.x_est, setup.model, ErrorScaling::Absolute);
  ResultRecord rec;
  rec.variable = variable;
  rec.seed = config.seed;
  rec.solver = solver;
  rec.order = order;
  rec.n_rows = static_cast<std::size_t>(sys.rows());
  rec.model_dim = setup.model.dimension();
  rec.delta_H = err.delta_H;
  rec.delta_HL = err.delta_HL;
  rec.delta_env = err.delta_env;
  rec.s0 = report.s0;
  rec.gap = report.gap;
  rec.measurement_complexity = measurement_complexity(sys);
  rec.ambiguous = report.ambiguous;
  rec.converged = report.converged;
  rec.truth_residual = (sys.matrix * setup.x_true - sys.rhs).norm();
  return rec;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  sigma_grid.reserve(13);
  for (int i = 0; i <= 12; ++i) sigma_grid.push_back(std::pow(10.0, -6.0 + 0.25 * i));
}

void ExperimentConfig::validate() const {
  if (max_sites < 1 || max_sites > kMaxSuperoperatorSites) {
    throw std::invalid_argument("max_sites must be between 1 and " +
                                std::to_string(kMaxSuperoperatorSites) +
                                " (dense superoperators scale as 16^N)");
  }
  if (sites < 1 || sites > max_sites) {
    throw std::invalid_argument("sites=" + std::to_string(sites) +
                                " is outside [1, max_sites=" + std::to_string(max_sites) +
                                "]; raise --max-sites (hard cap " +
                                std::to_string(kMaxSuperoperatorSites) + ")");
  }
  if (!fields.empty() && fields.size() != sites) {
    throw std::invalid_argument("fields override has " + std::to_string(fields.size()) +
                                " entries but sites=" + std::to_string(sites));
  }
  if (!couplings.empty() && couplings.size() != sites - 1) {
    throw std::invalid_argument("couplings override has " + std::to_string(couplings.size()) +
                                " entries but sites=" + std::to_string(sites) +
                                " needs " + std::to_string(sites - 1));
  }
  if (g < 0.0) throw std::invalid_argument("reservoir coupling g must be non-negative");
  if (nbar < 0.0) throw std::invalid_argument("thermal occupation nbar must be non-negative");
  if (hamiltonian_locality < 1) {
    throw std::invalid_argument("hamiltonian_locality must be at least 1");
  }
  if (input_locality < 1 || dyn_input_locality < 1) {
    throw std::invalid_argument("input localities must be at least 1");
  }
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (dt_grid.empty()) {
    throw std::invalid_argument("dt_grid is empty; provide at least one time step");
  }
  for (double v : dt_grid) {
    if (v <= 0.0) throw std::invalid_argument("dt_grid entries must be positive");
  }
  if (fd_order != 1 && fd_order != 2) {
    throw std::invalid_argument("fd_order must be 1 or 2");
  }
  if (solver != "lsq" && solver != "psd" && solver != "both") {
    throw std::invalid_argument("solver must be lsq, psd, or both");
  }
  if (sigma_grid.empty()) {
    throw std::invalid_argument("sigma_grid is empty; provide at least one noise level");
  }
  for (double v : sigma_grid) {
    if (v < 0.0) throw std::invalid_argument("sigma_grid entries must be non-negative");
  }
  if (noise_repeats < 1) throw std::invalid_argument("noise_repeats must be at least 1");
  if (disorder_mode != "seeds" && disorder_mode != "models") {
    throw std::invalid_argument("disorder_mode must be 'seeds' or 'models'");
  }
  if (n_min < 1 || n_min > n_max || n_max > max_sites) {
    throw std::invalid_argument("size sweep range [" + std::to_string(n_min) + ", " +
                                std::to_string(n_max) + "] must lie inside [1, max_sites=" +
                                std::to_string(max_sites) + "]");
  }
  if (samples < 10000) {
    throw std::invalid_argument("samples must be at least 10000 for a stable ratio");
  }
  if (fd_sigma < 0.0) throw std::invalid_argument("fd_sigma must be non-negative");
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
  if (format != "csv" && format != "structured") {
    throw std::invalid_argument("format must be csv or structured");
  }
}

SpinChainSpec ExperimentConfig::chain_spec(std::size_t n) const {
  SpinChainSpec spec;
  spec.n_sites = n;
  if (!fields.empty()) {
    if (fields.size() != n) {
      throw std::invalid_argument("fields override does not match requested chain size " +
                                  std::to_string(n));
    }
    spec.local_fields = fields;
  } else {
    spec.local_fields.assign(n, field);
  }
  if (!couplings.empty()) {
    if (couplings.size() != n - 1) {
      throw std::invalid_argument("couplings override does not match requested chain size " +
                                  std::to_string(n));
    }
    spec.couplings = couplings;
  } else {
    spec.couplings.assign(n - 1, coupling);
  }
  spec.reservoir_coupling = g;
  spec.thermal_occupation = nbar;
  spec.validate();
  return spec;
}

ModelSpace ExperimentConfig::model_space(std::size_t n) const {
  return ModelSpace::build(n, std::min(hamiltonian_locality, n), gamma_constraint,
                           /*with_dissipator=*/true);
}

namespace {

nlohmann::ordered_json vector3_to_json(const Eigen::Vector3d& v) {
  return nlohmann::ordered_json::array({v(0), v(1), v(2)});
}

Eigen::Vector3d vector3_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("config key '" + key + "' must be an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");

  ExperimentConfig config;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "sites") config.sites = value.get<std::size_t>();
      else if (key == "field") config.field = vector3_from_json(value, key);
      else if (key == "fields") {
        config.fields.clear();
        for (const auto& f : value) config.fields.push_back(vector3_from_json(f, key));
      } else if (key == "coupling") config.coupling = value.get<double>();
      else if (key == "couplings") config.couplings = value.get<std::vector<double>>();
      else if (key == "g") config.g = value.get<double>();
      else if (key == "nbar") config.nbar = value.get<double>();
      else if (key == "hamiltonian_locality") config.hamiltonian_locality = value.get<std::size_t>();
      else if (key == "gamma_constraint") config.gamma_constraint = gamma_constraint_from_name(value.get<std::string>());
      else if (key == "input_locality") config.input_locality = value.get<std::size_t>();
      else if (key == "dyn_input_locality") config.dyn_input_locality = value.get<std::size_t>();
      else if (key == "dt") config.dt = value.get<double>();
      else if (key == "dt_grid") config.dt_grid = value.get<std::vector<double>>();
      else if (key == "fd_order") config.fd_order = value.get<int>();
      else if (key == "solver") config.solver = value.get<std::string>();
      else if (key == "sigma_grid") config.sigma_grid = value.get<std::vector<double>>();
      else if (key == "noise_repeats") config.noise_repeats = value.get<std::size_t>();
      else if (key == "disorder_mode") config.disorder_mode = value.get<std::string>();
      else if (key == "n_min") config.n_min = value.get<std::size_t>();
      else if (key == "n_max") config.n_max = value.get<std::size_t>();
      else if (key == "samples") config.samples = value.get<std::size_t>();
      else if (key == "fd_sigma") config.fd_sigma = value.get<double>();
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "stride") config.stride = value.get<std::size_t>();
      else if (key == "max_sites") config.max_sites = value.get<std::size_t>();
      else if (key == "out") config.out = value.get<std::string>();
      else if (key == "format") config.format = value.get<std::string>();
      else throw std::invalid_argument("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["sites"] = sites;
  j["field"] = vector3_to_json(field);
  if (!fields.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : fields) arr.push_back(vector3_to_json(f));
    j["fields"] = arr;
  }
  j["coupling"] = coupling;
  if (!couplings.empty()) j["couplings"] = couplings;
  j["g"] = g;
  j["nbar"] = nbar;
  j["hamiltonian_locality"] = hamiltonian_locality;
  j["gamma_constraint"] = gamma_constraint_name(gamma_constraint);
  j["input_locality"] = input_locality;
  j["dyn_input_locality"] = dyn_input_locality;
  j["dt"] = dt;
  j["dt_grid"] = dt_grid;
  j["fd_order"] = fd_order;
  j["solver"] = solver;
  j["sigma_grid"] = sigma_grid;
  j["noise_repeats"] = noise_repeats;
  j["disorder_mode"] = disorder_mode;
  j["n_min"] = n_min;
  j["n_max"] = n_max;
  j["samples"] = samples;
  j["fd_sigma"] = fd_sigma;
  j["seed"] = seed;
  j["stride"] = stride;
  j["max_sites"] = max_sites;
  j["out"] = out;
  j["format"] = format;
  return j.dump(2) + "\n";
}

void ExperimentConfig::save_json(const std::string& path) const {
  std::ofstream out_file(path);
  if (!out_file) throw std::runtime_error("cannot open '" + path + "' for writing");
  out_file << to_json();
}

std::size_t worker_thread_count() {
  if (const char* env = std::getenv("HAMLEARN_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && parsed >= 1) return static_cast<std::size_t>(parsed);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ResultRecord> run_steady_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.sites;
  const SpinChainSpec spec = config.chain_spec();
  const ModelSpace model = config.model_space(n);
  const LindbladGenerator gen = build_thermal_generator(spec, JumpBasisMode::Pauli);
  const DensityMatrix rho_ss = steady_state(gen);
  const Eigen::VectorXd x_true = true_model_vector(spec, model);
  const std::vector<PauliString> inputs =
      enumerate_basis({n, std::min(config.input_locality, n), /*include_lower=*/true});

  // One serial pass accumulates all rows plus per-input cumulative row and
  // measurement counts; prefix systems are views into the full matrix.
  SteadyRowBuilder builder(rho_ss, model);
  std::vector<std::size_t> rows_after(inputs.size()), measured_after(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    builder.add_input(inputs[k]);
    rows_after[k] = builder.row_count();
    measured_after[k] = builder.measured_count();
  }
  const CorrelationSystem full = builder.snapshot();

  std::vector<std::size_t> points;
  for (std::size_t k = config.stride; k < inputs.size(); k += config.stride) {
    points.push_back(k);
  }
  points.push_back(inputs.size());

  std::vector<ResultRecord> records(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    const std::size_t k = points[p];
    CorrelationSystem sys;
    sys.dynamical = false;
    sys.hamiltonian_dim = full.hamiltonian_dim;
    sys.col_labels = full.col_labels;
    sys.matrix = full.matrix.topRows(static_cast<Eigen::Index>(rows_after[k - 1]));

    ResultRecord rec;
    rec.experiment = "steady-sweep";
    rec.variable = double(k);
    rec.seed = config.seed;
    rec.locality = static_cast<int>(inputs[k - 1].support_span());
    rec.n_rows = rows_after[k - 1];
    rec.model_dim = model.dimension();
    rec.measurement_complexity = measured_after[k - 1];
    if (rows_after[k - 1] > 0) {
      const EstimationReport report = svd_null_estimator(sys);
      const SectorErrors err =
          error_metrics(x_true, report.x_est, model, ErrorScaling::Scaled);
      rec.solver = report.solver;
      rec.delta_H = err.delta_H;
      rec.delta_HL = err.delta_HL;
      rec.delta_env = err.delta_env;
      rec.s0 = report.s0;
      rec.gap = report.gap;
      rec.ambiguous = report.ambiguous;
      rec.truth_residual = (sys.matrix * x_true).norm() / x_true.norm();
    } else {
      rec.solver = "svd-null";
      rec.ambiguous = true;
    }
    records[p] = std::move(rec);
  });
  return records;
}

std::vector<ResultRecord> run_noise_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.sites;
  const ModelSpace model = config.model_space(n);
  const std::vector<PauliString> inputs =
      enumerate_basis({n, std::min(config.input_locality, n), /*include_lower=*/true});

  // One clean system per disorder repeat: a shared one for seed mode, a
  // freshly drawn perturbed chain per repeat for model mode.
  struct Repeat {
    CorrelationSystem clean;
    Eigen::VectorXd x_true;
  };
  std::vector<Repeat> repeats;
  if (config.disorder_mode == "seeds") {
    const SpinChainSpec spec = config.chain_spec();
    const DensityMatrix rho_ss =
        steady_state(build_thermal_generator(spec, JumpBasisMode::Pauli));
    repeats.push_back({assemble_steady(rho_ss, inputs, model),
                       true_model_vector(spec, model)});
  } else {
    repeats.resize(config.noise_repeats);
    parallel_for(config.noise_repeats, [&](std::size_t rep) {
      SpinChainSpec spec = config.chain_spec();
      GaussianStream draw(derive_seed(config.seed, rep, /*stream=*/0x6d6f64656cULL));
      for (auto& f : spec.local_fields) {
        for (int a = 0; a < 3; ++a) f(a) += 0.1 * draw.next();
      }
      for (auto& j : spec.couplings) j += 0.1 * draw.next();
      const DensityMatrix rho_ss =
          steady_state(build_thermal_generator(spec, JumpBasisMode::Pauli));
      repeats[rep] = {assemble_steady(rho_ss, inputs, model),
                      true_model_vector(spec, model)};
    });
  }

  const std::size_t total = config.sigma_grid.size() * config.noise_repeats;
  std::vector<ResultRecord> records(total);
  parallel_for(total, [&](std::size_t idx) {
    const std::size_t si = idx / config.noise_repeats;
    const std::size_t rep = idx % config.noise_repeats;
    const double sigma = config.sigma_grid[si];
    const Repeat& base = repeats[config.disorder_mode == "seeds" ? 0 : rep];

    const CorrelationSystem noisy =
        inject_noise(base.clean, sigma, derive_seed(config.seed, si, rep));
    const EstimationReport report = svd_null_estimator(noisy);
    const SectorErrors err =
        error_metrics(base.x_true, report.x_est, model, ErrorScaling::Scaled);

    ResultRecord rec;
    rec.experiment = "noise-sweep";
    rec.variable = sigma;
    rec.seed = rep;
    rec.solver = report.solver;
    rec.n_rows = static_cast<std::size_t>(noisy.rows());
    rec.model_dim = model.dimension();
    rec.delta_H = err.delta_H;
    rec.delta_HL = err.delta_HL;
    rec.delta_env = err.delta_env;
    rec.s0 = report.s0;
    rec.gap = report.gap;
    rec.measurement_complexity = measurement_complexity(noisy);
    rec.ambiguous = report.ambiguous;
    records[idx] = std::move(rec);
  });
  return records;
}

std::vector<ResultRecord> run_dynamic_size(const ExperimentConfig& config) {
  config.validate();
  const std::vector<std::string> solvers = solver_selection(config.solver);
  const std::size_t sizes = config.n_max - config.n_min + 1;
  std::vector<std::vector<ResultRecord>> grouped(sizes);

  parallel_for(sizes, [&](std::size_t i) {
    const std::size_t n = config.n_min + i;
    const DynamicalSetup setup = prepare_dynamical(config, n);
    const CorrelationSystem sys = assemble_dynamical(
        setup.states, setup.inputs, setup.gen, config.dt, config.fd_order, setup.model);
    for (const std::string& solver : solvers) {
      const EstimationReport report = solver == "lsq"
                                          ? least_squares_estimator(sys)
                                          : psd_constrained_estimator(sys, setup.model);
      ResultRecord rec = dynamical_record(setup, sys, report, solver, config, double(n),
                                          config.fd_order);
      rec.experiment = "dynamic-size";
      grouped[i].push_back(std::move(rec));
    }
  });

  std::vector<ResultRecord> records;
  for (auto& group : grouped) {
    for (auto& rec : group) records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ResultRecord> run_dynamic_dt(const ExperimentConfig& config) {
  config.validate();
  const std::vector<std::string> solvers = solver_selection(config.solver);
  const DynamicalSetup setup = prepare_dynamical(config, config.sites);

  const std::size_t tasks = config.dt_grid.size() * 2;  // orders 1 and 2
  std::vector<std::vector<ResultRecord>> grouped(tasks);
  parallel_for(tasks, [&](std::size_t idx) {
    const double dt = config.dt_grid[idx / 2];
    const int order = static_cast<int>(idx % 2) + 1;
    const CorrelationSystem sys =
        assemble_dynamical(setup.states, setup.inputs, setup.gen, dt, order, setup.model);
    for (const std::string& solver : solvers) {
      const EstimationReport report = solver == "lsq"
                                          ? least_squares_estimator(sys)
                                          : psd_constrained_estimator(sys, setup.model);
      ResultRecord rec = dynamical_record(setup, sys, report, solver, config, dt, order);
      rec.experiment = "dynamic-dt";
      grouped[idx].push_back(std::move(rec));
    }
  });

  std::vector<ResultRecord> records;
  for (auto& group : grouped) {
    for (auto& rec : group) records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ResultRecord> run_fd_variance(const ExperimentConfig& config) {
  config.validate();
  const VarianceRatioEstimate estimate =
      derivative_variance_ratio(config.samples, config.fd_sigma, config.seed);
  ResultRecord rec;
  rec.experiment = "fd-variance";
  rec.variable = double(config.samples);
  rec.seed = config.seed;
  rec.solver = "monte-carlo";
  rec.value = estimate.ratio;
  rec.ci_half = estimate.ci_half;
  return {rec};
}

std::string results_csv_header() {
  return "experiment,variable,seed,solver,order,locality,n_rows,model_dim,"
         "delta_H,delta_HL,delta_env,s0,gap,measurement_complexity,"
         "ambiguous,converged,truth_residual,value,ci_half";
}

namespace {

std::string record_to_csv(const ResultRecord& r) {
  std::ostringstream out;
  out << r.experiment << ',' << format_double(r.variable) << ',' << r.seed << ','
      << r.solver << ',' << r.order << ',' << r.locality << ',' << r.n_rows << ','
      << r.model_dim << ',' << format_double(r.delta_H) << ','
      << format_double(r.delta_HL) << ',' << format_double(r.delta_env) << ','
      << format_double(r.s0) << ',' << format_double(r.gap) << ','
      << r.measurement_complexity << ',' << (r.ambiguous ? 1 : 0) << ','
      << (r.converged ? 1 : 0) << ',' << format_double(r.truth_residual) << ','
      << format_double(r.value) << ',' << format_double(r.ci_half);
  return out.str();
}

nlohmann::ordered_json record_to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["variable"] = r.variable;
  j["seed"] = r.seed;
  j["solver"] = r.solver;
  j["order"] = r.order;
  j["locality"] = r.locality;
  j["n_rows"] = r.n_rows;
  j["model_dim"] = r.model_dim;
  j["delta_H"] = r.delta_H;
  j["delta_HL"] = r.delta_HL;
  j["delta_env"] = r.delta_env;
  j["s0"] = r.s0;
  j["gap"] = r.gap;
  j["measurement_complexity"] = r.measurement_complexity;
  j["ambiguous"] = r.ambiguous;
  j["converged"] = r.converged;
  j["truth_residual"] = r.truth_residual;
  j["value"] = r.value;
  j["ci_half"] = r.ci_half;
  return j;
}

}  // namespace

std::string results_to_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << results_csv_header() << '\n';
  for (const ResultRecord& r : records) out << record_to_csv(r) << '\n';
  return out.str();
}

std::string results_to_structured(const std::vector<ResultRecord>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const ResultRecord& r : records) arr.push_back(record_to_json(r));
  return arr.dump(2) + "\n";
}

ResultFormat result_format_from_name(const std::string& name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "structured") return ResultFormat::Structured;
  throw std::invalid_argument("unknown result format '" + name +
                              "' (expected csv or structured)");
}

void emit_results(const std::vector<ResultRecord>& records, const std::string& path,
                  ResultFormat format) {
  const std::string text = format == ResultFormat::Csv ? results_to_csv(records)
                                                       : results_to_structured(records);
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing results to '" + path + "'");
}

std::vector<ResultRecord> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != results_csv_header()) {
    throw std::runtime_error("missing or unexpected results CSV header");
  }
  std::vector<ResultRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 19) {
      throw std::runtime_error("results CSV row has " + std::to_string(parts.size()) +
                               " fields, expected 19");
    }
    ResultRecord r;
    r.experiment = parts[0];
    r.variable = std::strtod(parts[1].c_str(), nullptr);
    r.seed = std::strtoull(parts[2].c_str(), nullptr, 10);
    r.solver = parts[3];
    r.order = std::atoi(parts[4].c_str());
    r.locality = std::atoi(parts[5].c_str());
    r.n_rows = std::strtoull(parts[6].c_str(), nullptr, 10);
    r.model_dim = std::strtoull(parts[7].c_str(), nullptr, 10);
    r.delta_H = std::strtod(parts[8].c_str(), nullptr);
    r.delta_HL = std::strtod(parts[9].c_str(), nullptr);
    r.delta_env = std::strtod(parts[10].c_str(), nullptr);
    r.s0 = std::strtod(parts[11].c_str(), nullptr);
    r.gap = std::strtod(parts[12].c_str(), nullptr);
    r.measurement_complexity = std::strtoull(parts[13].c_str(), nullptr, 10);
    r.ambiguous = parts[14] == "1";
    r.converged = parts[15] == "1";
    r.truth_residual = std::strtod(parts[16].c_str(), nullptr);
    r.value = std::strtod(parts[17].c_str(), nullptr);
    r.ci_half = std::strtod(parts[18].c_str(), nullptr);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace hamlearn
