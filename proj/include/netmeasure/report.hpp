#pragma once

#include "netmeasure/infomeasure.hpp"
#include "netmeasure/knn_entropy.hpp"
#include "netmeasure/robustness.hpp"
#include "netmeasure/systems.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netmeasure {

inline constexpr std::string_view kReportSchemaVersion = "netmeasure.report/1";
inline constexpr std::string_view kValidationSchemaVersion = "netmeasure.validation/1";

/// (I1, I2, O) for a multivariate MI entry.
using Decomposition = std::array<IndexSet, 3>;

/// Parses "S1,P2" into coordinate indices by name; plain integers are taken
/// as 0-based indices when they do not name a coordinate.
IndexSet parse_index_set(const System& system, std::string_view text);

/// Parses "S1;S2;P1,P2".
Decomposition parse_decomposition(const System& system, std::string_view text);

struct AnalysisRequest {
  /// Output sets to evaluate; empty means every proper nonempty subset.
  std::vector<IndexSet> outputs;
  std::vector<Decomposition> interactions;
  std::vector<double> eps_ladder{0.05, 0.1, 0.2};
  std::uint64_t seed = 0;
  bool timestamp = true;
  bool validate = false;
  Index validation_samples = 20000;
  int knn_k = 4;
  std::optional<double> alpha_radius;
  int alpha_grid = 10000;
  MeasureOptions measure_options;
};

/// Equilibrium, Lyapunov solution, measures, robustness and (optionally) a
/// simulation cross-check, as a versioned JSON document. Byte-identical for
/// identical inputs when `timestamp` is off.
nlohmann::ordered_json analyze(const System& system, const AnalysisRequest& request);

/// Simulation settings used by `simulate` and `--validate`: dt from the
/// Jacobian, ten relaxation times of burn-in, samples spaced half a
/// relaxation time apart and split over `chains`.
SimConfig default_sim_config(const System& system, Index samples, std::uint64_t seed, int chains = 10);

struct ValidationRequest {
  std::vector<Decomposition> interactions;
  int knn_k = 4;
  Index quadrature_resolution = 160;
};

/// Compares an ensemble with the closed forms available for `system`.
/// Throws InputMismatchError when the fingerprints differ.
nlohmann::ordered_json validate_ensemble(const System& system, const SampleEnsemble& ensemble, const ValidationRequest& request);

/// Species, reactions and parameters of a network.
nlohmann::ordered_json network_summary(const ReactionNetwork& net);

}  // namespace netmeasure
