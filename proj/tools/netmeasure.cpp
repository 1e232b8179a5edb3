// netmeasure command-line front end.

#include "netmeasure/errors.hpp"
#include "netmeasure/report.hpp"
#include "netmeasure/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace nm = netmeasure;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw nm::InvalidArgument("bad number '" + s + "' in " + what);
  return v;
}

nm::NoiseModel parse_sigma(const std::string& spec, nm::Index n) {
  if (spec == "identity") return nm::NoiseModel::identity(n);
  if (spec.rfind("scalar:", 0) == 0) {
    const double c = to_double(spec.substr(7), "--sigma");
    return nm::NoiseModel::constant(c * nm::MatrixXd::Identity(n, n), spec);
  }
  if (spec.rfind("diag:", 0) == 0) {
    const auto parts = split(spec.substr(5), ',');
    if (static_cast<nm::Index>(parts.size()) != n)
      throw nm::InvalidArgument("--sigma diag needs " + std::to_string(n) + " entries");
    nm::VectorXd d(n);
    for (nm::Index i = 0; i < n; ++i) d[i] = to_double(strip(parts[static_cast<std::size_t>(i)]), "--sigma");
    return nm::NoiseModel::diagonal(d);
  }
  throw nm::InvalidArgument("--sigma must be identity, scalar:c or diag:d1,...,dn");
}

/// "ka=0:10:11, kb=0:10:11" and "k=1,2,3" both appear in --vary; a piece
/// without '=' continues the previous value list.
std::vector<std::string> split_vary(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& arg : args)
    for (auto& piece : split(arg, ',')) {
      piece = strip(piece);
      if (piece.empty()) continue;
      if (piece.find('=') == std::string::npos && !out.empty())
        out.back() += "," + piece;
      else
        out.push_back(piece);
    }
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw nm::Error("cannot write '" + path + "'");
}

nm::System system_with_params(nm::System system, const std::vector<std::string>& params) {
  if (params.empty()) return system;
  if (!system.network) throw nm::InvalidArgument("--param applies to reaction networks only");
  std::map<std::string, double> values;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw nm::InvalidArgument("--param expects name=value, got '" + p + "'");
    values[strip(p.substr(0, eq))] = to_double(strip(p.substr(eq + 1)), "--param");
  }
  return nm::network_system(system.network->with_params(values), system.name);
}

nm::SimConfig read_config(const std::string& path, nm::SimConfig cfg) {
  std::ifstream in(path);
  if (!in) throw nm::InvalidArgument("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw nm::InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  cfg.dt = j.value("dt", cfg.dt);
  cfg.burn_in = j.value("burn_in", cfg.burn_in);
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.thin = j.value("thin", cfg.thin);
  cfg.chains = j.value("chains", cfg.chains);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.reflect_at_zero = j.value("reflect_at_zero", cfg.reflect_at_zero);
  cfg.overflow_guard = j.value("overflow_guard", cfg.overflow_guard);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degeneracy, complexity and robustness of noise-perturbed reaction networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NETMEASURE_VERSION);

  std::string file;
  nm::Index ou_dim = 1;

  auto* parse = app.add_subcommand("parse", "Print a network summary as JSON");
  parse->add_option("file", file, "Reaction file")->required();

  auto* analyze = app.add_subcommand("analyze", "Equilibrium, Lyapunov shape, measures and robustness");
  std::vector<std::string> output_sets, mi_specs, params;
  bool all_outputs = false, no_timestamp = false, validate = false;
  std::string sigma = "identity", eps_ladder = "0.05,0.1,0.2", json_out;
  std::uint64_t seed = 0;
  nm::Index samples = 20000;
  int knn_k = 4, alpha_grid = 10000;
  double alpha_radius = 0.0;
  analyze->add_option("system", file, "Reaction file or builtin:ou|builtin:enzyme")->required();
  analyze->add_option("--output-set", output_sets, "Output coordinates, e.g. P1,P2 (repeatable)");
  analyze->add_flag("--all-outputs", all_outputs, "Evaluate every proper nonempty output set (default)");
  analyze->add_option("--mi", mi_specs, "Multivariate MI entry I1;I2;O, e.g. S1;S2;P1,P2 (repeatable)");
  analyze->add_option("--sigma", sigma, "identity | scalar:c | diag:d1,...,dn");
  analyze->add_option("--eps-ladder", eps_ladder, "Comma-separated eps values");
  analyze->add_option("--seed", seed, "Seed for every random draw");
  analyze->add_option("--json", json_out, "Write the report here instead of stdout");
  analyze->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp for byte-reproducible output");
  analyze->add_flag("--validate", validate, "Cross-check against simulation at each eps");
  analyze->add_option("--samples", samples, "Samples per eps for --validate");
  analyze->add_option("--k", knn_k, "Neighbor order of the entropy estimator");
  analyze->add_option("--param", params, "Rebind a rate constant, name=value (repeatable)");
  auto* radius_opt = analyze->add_option("--alpha-radius", alpha_radius, "Region radius for the uniform index");
  analyze->add_option("--alpha-grid", alpha_grid, "Grid points for the uniform index");
  analyze->add_option("--n", ou_dim, "Dimension of builtin:ou");

  auto* sweep = app.add_subcommand("sweep", "Multivariate MI over a parameter grid, as CSV");
  std::vector<std::string> vary;
  std::string sweep_mi, csv_out;
  sweep->add_option("file", file, "Reaction file")->required();
  sweep->add_option("--vary", vary, "name=start:stop:count or name=v1,v2 (repeatable)")->required();
  sweep->add_option("--mi", sweep_mi, "I1;I2;O")->required();
  sweep->add_option("--csv", csv_out, "Write the CSV here instead of stdout");

  auto* simulate = app.add_subcommand("simulate", "Euler-Maruyama ensemble");
  double eps = 0.1;
  std::string config_path, ens_out;
  nm::Index sim_samples = 20000;
  int chains = 10;
  simulate->add_option("system", file, "Reaction file, builtin:ou or builtin:limitcycle")->required();
  simulate->add_option("--eps", eps, "Noise amplitude");
  simulate->add_option("--config", config_path, "JSON overriding dt, burn_in, horizon, thin, chains, seed");
  simulate->add_option("--samples", sim_samples, "Retained samples when no horizon is configured");
  simulate->add_option("--chains", chains, "Independent chains");
  simulate->add_option("--seed", seed, "Seed");
  simulate->add_option("--n", ou_dim, "Dimension of builtin:ou");
  simulate->add_option("--out", ens_out, "Ensemble file")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Compare an ensemble with closed forms");
  std::string ensemble_path;
  validate_cmd->add_option("ensemble", ensemble_path, "Ensemble file")->required();
  validate_cmd->add_option("system", file, "System the ensemble was drawn from")->required();
  validate_cmd->add_option("--mi", mi_specs, "Multivariate MI entry I1;I2;O (repeatable)");
  validate_cmd->add_option("--k", knn_k, "Neighbor order of the entropy estimator");
  validate_cmd->add_option("--n", ou_dim, "Dimension of builtin:ou");
  validate_cmd->add_option("--json", json_out, "Write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*parse) {
      std::ifstream in(file);
      if (!in) throw nm::ParseError("cannot read '" + file + "'", 0, 0);
      std::ostringstream text;
      text << in.rdbuf();
      emit(nm::network_summary(nm::parse_network(text.str())).dump(2) + "\n", "");
    } else if (*analyze) {
      nm::System system = system_with_params(nm::load_system(file, ou_dim), params);
      system.noise = parse_sigma(sigma, system.field.dimension());
      nm::AnalysisRequest req;
      if (!all_outputs)
        for (const auto& o : output_sets) req.outputs.push_back(nm::parse_index_set(system, o));
      for (const auto& m : mi_specs) req.interactions.push_back(nm::parse_decomposition(system, m));
      req.eps_ladder.clear();
      for (const auto& e : split(eps_ladder, ',')) req.eps_ladder.push_back(to_double(strip(e), "--eps-ladder"));
      req.seed = seed;
      req.timestamp = !no_timestamp;
      req.validate = validate;
      req.validation_samples = samples;
      req.knn_k = knn_k;
      if (*radius_opt) req.alpha_radius = alpha_radius;
      req.alpha_grid = alpha_grid;
      emit(nm::analyze(system, req).dump(2) + "\n", json_out);
    } else if (*sweep) {
      const nm::System system = nm::load_system(file);
      if (!system.network) throw nm::InvalidArgument("sweep needs a reaction network");
      std::vector<nm::ParamRange> grid;
      for (const auto& v : split_vary(vary)) grid.push_back(nm::ParamRange::parse(v));
      const auto [i1, i2, o] = nm::parse_decomposition(system, sweep_mi);
      const nm::SweepResult result = nm::mi_sweep(*system.network, grid, i1, i2, o);
      emit(nm::to_csv(result), csv_out);
      if (result.invalid_count() > 0)
        std::cerr << "netmeasure: " << result.invalid_count() << " of " << result.cells.size()
                  << " cells invalid\n";
    } else if (*simulate) {
      const nm::System system = nm::load_system(file, ou_dim);
      nm::SimConfig cfg = nm::default_sim_config(system, sim_samples, seed, chains);
      if (!config_path.empty()) cfg = read_config(config_path, cfg);
      nm::VectorXd start = system.start;
      try {
        nm::NewtonOptions newton;
        newton.keep_nonnegative = system.reflect_at_zero;
        const nm::Equilibrium eq = nm::find_equilibrium(system.field, system.start, newton);
        if (eq.spectral_abscissa < 0.0) start = eq.x0;
      } catch (const nm::ConvergenceError&) {
        // Start from the system's default point; burn-in takes care of it.
      }
      const nm::SampleEnsemble ens = nm::simulate(system.field, system.noise, eps, cfg, start, system.fingerprint);
      nm::save_ensemble(ens, ens_out);
      emit(json{{"out", ens_out},
                {"fingerprint", ens.fingerprint},
                {"samples", ens.size()},
                {"dimension", ens.dimension()},
                {"discarded_chains", ens.discarded_chains}}
                   .dump(2) +
               "\n",
           "");
    } else if (*validate_cmd) {
      const nm::SampleEnsemble ens = nm::load_ensemble(ensemble_path);
      const nm::System system = nm::load_system(file, file == "builtin:ou" ? ens.dimension() : ou_dim);
      nm::ValidationRequest req;
      for (const auto& m : mi_specs) req.interactions.push_back(nm::parse_decomposition(system, m));
      req.knn_k = knn_k;
      emit(nm::validate_ensemble(system, ens, req).dump(2) + "\n", json_out);
    }
  } catch (const nm::Error& e) {
    std::cerr << "netmeasure: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "netmeasure: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
