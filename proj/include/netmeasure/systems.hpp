#pragma once

#include "netmeasure/quadrature.hpp"
#include "netmeasure/reaction_dsl.hpp"
#include "netmeasure/stationary.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netmeasure {

/// A drift field bundled with its noise model and everything the CLI needs
/// to analyze or simulate it.
struct System {
  std::string name;
  std::string fingerprint;
  VectorField field;
  NoiseModel noise;
  VectorXd start;  ///< Newton initial guess and SDE start point
  std::vector<std::string> coordinate_names{};
  std::optional<ReactionNetwork> network{};
  bool reflect_at_zero = false;
  /// Closed-form unnormalized stationary density at eps, when known.
  std::function<double(const Eigen::Ref<const VectorXd>&, double)> stationary_density{};
  std::function<Box(double)> density_box{};

  std::optional<Index> coordinate(std::string_view name) const;
};

/// f(x) = -x in R^n with identity noise: S = I / 2.
System ou_system(Index n = 1);

/// x' = y + x(1 - x^2 - y^2), y' = -x + y(1 - x^2 - y^2), z' = -z with noise
/// sqrt(2) I, whose stationary density is exactly
///   exp(-(z^2 / 2 + (1 - x^2 - y^2)^2 / 4) / eps^2) / Z.
System limit_cycle_system();

/// Mass-action system of a reaction network with identity noise, started at
/// (1, ..., 1) and reflected at 0 when simulated.
System network_system(const ReactionNetwork& net, std::string name);

/// The built-in substrate-competition enzyme network.
std::string_view enzyme_network_source();

/// "builtin:ou" (dimension `ou_dimension`), "builtin:limitcycle",
/// "builtin:enzyme", or a path to a reaction file.
System load_system(const std::string& spec, Index ou_dimension = 1);

}  // namespace netmeasure
