#include "netmeasure/report.hpp"

#include "netmeasure/errors.hpp"

#include <cmath>
#include <ctime>
#include <string>

namespace netmeasure {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(std::string("non-finite value for ") + what);
  return v;
}

json vector_json(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(finite(v[i], "vector entry"));
  return out;
}

json matrix_json(const MatrixXd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

json names_json(const System& system, const IndexSet& set) {
  json out = json::array();
  for (Index i : set) out.push_back(system.coordinate_names.at(static_cast<std::size_t>(i)));
  return out;
}

std::string names_text(const System& system, const IndexSet& set) {
  std::string out;
  for (Index i : set) {
    if (!out.empty()) out += ',';
    out += system.coordinate_names.at(static_cast<std::size_t>(i));
  }
  return out;
}

std::string method_name(LyapunovMethod m) {
  switch (m) {
    case LyapunovMethod::Kronecker:
      return "kronecker";
    case LyapunovMethod::Schur:
      return "schur";
    default:
      return "automatic";
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

NewtonOptions newton_for(const System& system) {
  NewtonOptions opt;
  opt.keep_nonnegative = system.reflect_at_zero;
  return opt;
}

/// One empirical-vs-reference comparison. Absolute tolerances are used for
/// quantities that can sit near zero (entropies, MI); relative ones otherwise.
json check(std::string quantity, json set, double empirical, double reference, double tolerance, bool relative) {
  const double delta = relative ? (empirical - reference) / std::abs(reference) : empirical - reference;
  return {{"quantity", std::move(quantity)},
          {"set", std::move(set)},
          {"empirical", finite(empirical, "empirical estimate")},
          {"reference", finite(reference, "reference value")},
          {"delta", finite(delta, "delta")},
          {"tolerance", tolerance},
          {"tolerance_kind", relative ? "relative" : "absolute"},
          {"within_tolerance", std::abs(delta) <= tolerance}};
}

constexpr double kEntropyTolerance = 0.05;   // nats, absolute
constexpr double kMiTolerance = 0.03;        // nats, absolute
constexpr double kDisplacementTolerance = 0.05;
constexpr double kFunctionalTolerance = 0.01;
constexpr double kQuadratureTolerance = 0.05;

json gaussian_checks(const System& system, const StationaryShape& shape, const SampleEnsemble& ens,
                     const std::vector<Decomposition>& interactions, int knn_k) {
  const Index n = shape.dimension();
  const double eps = ens.eps;
  KnnOptions knn;
  knn.k = knn_k;
  const EntropyOracle empirical = empirical_oracle(ens, knn);
  const EntropyOracle gaussian = gaussian_oracle(shape.S, eps);

  json checks = json::array();
  const Displacement d = mean_square_displacement(ens, shape.x0);
  checks.push_back(check("msd_over_eps2", json::array(), d.v_over_eps2, shape.S.trace(), kDisplacementTolerance, true));
  const PerformanceFunction p = default_performance(shape.x0);
  checks.push_back(check("functional_robustness", json::array(), functional_robustness(ens, p, eps),
                         functional_robustness_gaussian(shape.S, eps), kFunctionalTolerance, true));
  for (Index i = 0; i < n; ++i) {
    const IndexSet one{i};
    checks.push_back(check("entropy", names_json(system, one), empirical(one), gaussian(one), kEntropyTolerance, false));
  }
  if (n <= 6) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const IndexSet a{i}, b{j};
        json set = json::array({names_json(system, a), names_json(system, b)});
        checks.push_back(check("mutual_information", std::move(set), mutual_information(empirical, a, b),
                               mutual_information(gaussian, a, b), kMiTolerance, false));
      }
  }
  for (const auto& [i1, i2, o] : interactions) {
    json set = json::array({names_json(system, i1), names_json(system, i2), names_json(system, o)});
    checks.push_back(check("multivariate_mi", std::move(set), multivariate_mi(empirical, i1, i2, o),
                           gaussian_multivariate_mi(shape.S, i1, i2, o), kMiTolerance, false));
  }
  return checks;
}

json density_checks(const System& system, const SampleEnsemble& ens, int knn_k, Index resolution) {
  const double eps = ens.eps;
  auto density = [&](const Eigen::Ref<const VectorXd>& x) { return system.stationary_density(x, eps); };
  const QuadratureEntropy q = quadrature_entropy(density, system.density_box(eps), resolution);
  KnnOptions knn;
  knn.k = knn_k;
  const IndexSet all = IndexSet::range(ens.dimension());
  const double h = knn_entropy(ens, all, knn);
  json out = json::array();
  out.push_back(check("entropy_vs_quadrature", names_json(system, all), h, q.value, kQuadratureTolerance, true));
  return out;
}

json validation_summary(json checks) {
  bool all_ok = true;
  for (const auto& c : checks) all_ok = all_ok && c.at("within_tolerance").get<bool>();
  return {{"checks", std::move(checks)}, {"all_within_tolerance", all_ok}};
}

json ensemble_json(const SampleEnsemble& ens) {
  const auto& c = ens.config;
  return {{"eps", ens.eps},
          {"samples", ens.size()},
          {"discarded_chains", ens.discarded_chains},
          {"dt", c.dt},
          {"burn_in", c.burn_in},
          {"horizon", c.horizon},
          {"thin", c.thin},
          {"chains", c.chains},
          {"seed", c.seed}};
}

}  // namespace

IndexSet parse_index_set(const System& system, std::string_view text) {
  std::vector<Index> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (token.empty()) throw InvalidArgument("empty coordinate name in '" + std::string(text) + "'");
    if (auto idx = system.coordinate(token)) {
      out.push_back(*idx);
    } else {
      std::size_t used = 0;
      long v = -1;
      try {
        v = std::stol(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || v < 0 || v >= static_cast<long>(system.coordinate_names.size()))
        throw InvalidArgument("unknown coordinate '" + token + "'");
      out.push_back(static_cast<Index>(v));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return IndexSet(out);
}

Decomposition parse_decomposition(const System& system, std::string_view text) {
  Decomposition parts;
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    const auto semi = text.find(';', start);
    if ((k < 2) == (semi == std::string_view::npos))
      throw InvalidArgument("expected three ';'-separated sets in '" + std::string(text) + "'");
    parts[static_cast<std::size_t>(k)] =
        parse_index_set(system, text.substr(start, semi == std::string_view::npos ? text.npos : semi - start));
    start = semi + 1;
  }
  if (!disjoint(parts[0], parts[1]) || !disjoint(parts[0], parts[2]) || !disjoint(parts[1], parts[2]))
    throw InvalidArgument("the sets in '" + std::string(text) + "' must be pairwise disjoint");
  return parts;
}

SimConfig default_sim_config(const System& system, Index samples, std::uint64_t seed, int chains) {
  if (samples < 1) throw InvalidArgument("sample count must be positive");
  if (chains < 1) throw InvalidArgument("chain count must be positive");
  SimConfig cfg;
  cfg.seed = seed;
  cfg.chains = chains;
  cfg.reflect_at_zero = system.reflect_at_zero;
  double tau = 1.0;
  try {
    const Equilibrium eq = find_equilibrium(system.field, system.start, newton_for(system));
    if (eq.spectral_abscissa < 0.0) {
      cfg.dt = default_dt(eq.jacobian);
      tau = 1.0 / std::abs(eq.spectral_abscissa);
    }
  } catch (const ConvergenceError&) {
    // No equilibrium to read time scales from; keep the generic defaults.
  }
  cfg.burn_in = 10.0 * tau;
  cfg.thin = std::max(1, static_cast<int>(std::lround(0.5 * tau / cfg.dt)));
  const Index per_chain = (samples + chains - 1) / chains;
  cfg.horizon = static_cast<double>(per_chain * cfg.thin) * cfg.dt;
  return cfg;
}

json network_summary(const ReactionNetwork& net) {
  const auto& species = net.species();
  auto side = [&](const std::vector<StoichTerm>& terms) {
    json out = json::object();
    for (const auto& t : terms) out[species[static_cast<std::size_t>(t.species)].name] = t.coefficient;
    return out;
  };
  json sp = json::array();
  for (const auto& s : species) sp.push_back(s.name);
  json reactions = json::array();
  for (const auto& r : net.reactions()) {
    json entry = {{"reactants", side(r.reactants)}, {"products", side(r.products)}, {"rate", r.rate.value}};
    if (r.rate.is_named()) entry["rate_param"] = r.rate.param;
    reactions.push_back(std::move(entry));
  }
  json params = json::object();
  for (const auto& [name, value] : net.params()) params[name] = value;
  return {{"species", std::move(sp)},
          {"species_count", net.dimension()},
          {"reactions", std::move(reactions)},
          {"reaction_count", net.reactions().size()},
          {"params", std::move(params)},
          {"fingerprint", fingerprint(net)}};
}

json analyze(const System& system, const AnalysisRequest& request) {
  const Index n = system.field.dimension();
  for (double eps : request.eps_ladder)
    if (!(eps > 0.0)) throw InvalidArgument("eps ladder values must be positive");

  const StationaryShape shape = stationary_shape(system.field, system.noise, system.start, newton_for(system));

  json report;
  report["schema_version"] = kReportSchemaVersion;
  json coords = json::array();
  for (const auto& c : system.coordinate_names) coords.push_back(c);
  report["input"] = {{"name", system.name},
                     {"fingerprint", system.fingerprint},
                     {"dimension", n},
                     {"coordinates", std::move(coords)},
                     {"noise", system.noise.description()}};

  report["equilibrium"] = {{"x0", vector_json(shape.x0)},
                           {"spectral_abscissa", finite(shape.spectral_abscissa, "spectral abscissa")},
                           {"residual", shape.equilibrium_residual}};

  const auto& ld = shape.lyapunov;
  report["lyapunov"] = {{"S", matrix_json(shape.S)},
                        {"residual", ld.residual},
                        {"tolerance", ld.tolerance},
                        {"reciprocal_condition", ld.reciprocal_condition},
                        {"refinement_steps", ld.refinement_steps},
                        {"ill_conditioned", ld.ill_conditioned},
                        {"method", method_name(ld.method)}};

  // Measures from the closed-form Gaussian oracle, exact in the small-noise
  // limit and therefore independent of eps.
  MeasureOptions mopt = request.measure_options;
  std::optional<std::vector<IndexSet>> outputs;
  if (!request.outputs.empty()) {
    outputs = request.outputs;
  } else {
    mopt.keep_interactions = false;
  }
  const DecompositionMeasures dm = eps_sigma_measures(shape, outputs, mopt);
  json per_output = json::array();
  for (const auto& om : dm.outputs) {
    json entry = {{"output", names_json(system, om.output)},
                  {"degeneracy", finite(om.degeneracy, "degeneracy")},
                  {"complexity", finite(om.complexity, "complexity")}};
    if (mopt.keep_interactions) {
      json inter = json::array();
      for (const auto& it : om.interactions)
        inter.push_back({{"ik", names_json(system, it.ik)},
                         {"ikc", names_json(system, it.ikc)},
                         {"multivariate_mi", finite(it.multivariate_mi, "multivariate MI")},
                         {"pair_mi", finite(it.pair_mi, "pair MI")}});
      entry["interactions"] = std::move(inter);
    }
    per_output.push_back(std::move(entry));
  }
  const EntropyOracle gaussian = gaussian_oracle(shape.S);
  json mmi = json::array();
  for (const auto& [i1, i2, o] : request.interactions) {
    mmi.push_back({{"label", names_text(system, i1) + ";" + names_text(system, i2) + ";" + names_text(system, o)},
                   {"i1", names_json(system, i1)},
                   {"i2", names_json(system, i2)},
                   {"output", names_json(system, o)},
                   {"value", finite(multivariate_mi(gaussian, i1, i2, o), "multivariate MI")},
                   {"closed_form", finite(gaussian_multivariate_mi(shape.S, i1, i2, o), "multivariate MI")},
                   {"pair_mi", finite(mutual_information(gaussian, i1, i2), "pair MI")}});
  }
  report["measures"] = {{"provenance", to_string(dm.provenance)},
                        {"units", "nats"},
                        {"eps_independent", true},
                        {"degeneracy", finite(dm.degeneracy, "degeneracy")},
                        {"complexity", finite(dm.complexity, "complexity")},
                        {"degeneracy_argmax", names_json(system, dm.degeneracy_argmax)},
                        {"complexity_argmax", names_json(system, dm.complexity_argmax)},
                        {"truncated", dm.truncated},
                        {"outputs", std::move(per_output)},
                        {"multivariate_mi", std::move(mmi)}};

  UniformIndexOptions uopt;
  if (request.alpha_radius) {
    uopt.region_radius = *request.alpha_radius;
  } else if (system.network) {
    // Stay inside the positive orthant where the mass-action field lives.
    uopt.region_radius = 0.5 * shape.x0.minCoeff();
    if (!(uopt.region_radius > 0.0)) uopt.region_radius = 1.0;
  }
  uopt.grid_density = request.alpha_grid;
  const UniformIndexResult ui =
      uniform_robustness_index(system.field, shape.x0, quadratic_lyapunov_function(shape.J, shape.x0), uopt);
  json functional = json::array();
  for (double eps : request.eps_ladder)
    functional.push_back({{"eps", eps}, {"value", finite(functional_robustness_gaussian(shape.S, eps), "R_f")}});
  report["robustness"] = {{"wasserstein", finite(wasserstein_robustness(shape.S), "R_w")},
                          {"displacement_slope", finite(displacement_slope(shape.S), "displacement slope")},
                          {"functional", std::move(functional)},
                          {"functional_performance", "exp(-|x-x0|^2)"},
                          {"uniform",
                           {{"alpha", finite(ui.alpha, "alpha")},
                            {"raw_minimum", finite(ui.raw_minimum, "alpha raw minimum")},
                            {"region_radius", uopt.region_radius},
                            {"inner_fraction", uopt.inner_fraction},
                            {"grid_density", uopt.grid_density},
                            {"shells", ui.shells},
                            {"directions", ui.directions},
                            {"evaluated", ui.evaluated},
                            {"skipped", ui.skipped}}}};

  if (request.validate) {
    json runs = json::array();
    for (double eps : request.eps_ladder) {
      const SimConfig cfg = default_sim_config(system, request.validation_samples, request.seed);
      const SampleEnsemble ens = simulate(system.field, system.noise, eps, cfg, shape.x0, system.fingerprint);
      json run = validation_summary(gaussian_checks(system, shape, ens, request.interactions, request.knn_k));
      run["ensemble"] = ensemble_json(ens);
      runs.push_back(std::move(run));
    }
    report["validation"] = {{"estimator", "kozachenko-leonenko"}, {"k", request.knn_k}, {"runs", std::move(runs)}};
  }

  json prov = {{"tool", "netmeasure"},
               {"version", NETMEASURE_VERSION},
               {"eigen",
                std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
               {"seed", request.seed}};
  if (request.timestamp) prov["timestamp"] = utc_timestamp();
  report["provenance"] = std::move(prov);
  return report;
}

json validate_ensemble(const System& system, const SampleEnsemble& ensemble, const ValidationRequest& request) {
  if (ensemble.fingerprint != system.fingerprint)
    throw InputMismatchError("ensemble fingerprint " + ensemble.fingerprint + " does not match system fingerprint " +
                             system.fingerprint);
  if (ensemble.dimension() != system.field.dimension())
    throw InputMismatchError("ensemble dimension does not match the system");
  if (!(ensemble.eps > 0.0)) throw InvalidArgument("validation needs an ensemble drawn with eps > 0");

  json checks = json::array();
  std::string reference;
  if (system.stationary_density) {
    checks = density_checks(system, ensemble, request.knn_k, request.quadrature_resolution);
    reference = "quadrature";
  } else {
    const StationaryShape shape = stationary_shape(system.field, system.noise, system.start, newton_for(system));
    checks = gaussian_checks(system, shape, ensemble, request.interactions, request.knn_k);
    reference = "gaussian";
  }
  json out = validation_summary(std::move(checks));
  out["schema_version"] = kValidationSchemaVersion;
  out["fingerprint"] = system.fingerprint;
  out["reference"] = reference;
  out["estimator"] = "kozachenko-leonenko";
  out["k"] = request.knn_k;
  out["ensemble"] = ensemble_json(ensemble);
  return out;
}

}  // namespace netmeasure
