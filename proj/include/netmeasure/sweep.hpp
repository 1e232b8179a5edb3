#pragma once

#include "netmeasure/infomeasure.hpp"
#include "netmeasure/reaction_dsl.hpp"

#include <optional>
#include <string>
#include <vector>

namespace netmeasure {

/// Named parameter with the values it takes on the grid.
struct ParamRange {
  std::string name;
  std::vector<double> values;

  /// `count` evenly spaced values from `start` to `stop` inclusive.
  static ParamRange linspace(std::string name, double start, double stop, int count);
  /// Parses "name=start:stop:count" or "name=v1,v2,...".
  static ParamRange parse(const std::string& spec);
};

struct SweepCell {
  std::vector<double> params;  ///< one value per ParamRange, grid order
  double mi = 0.0;
  bool valid = false;
  std::string status;  ///< "ok" or the reason the cell was dropped
  double spectral_abscissa = 0.0;
};

struct SweepResult {
  std::vector<std::string> names;
  std::vector<SweepCell> cells;  ///< last parameter varies fastest
  std::size_t invalid_count() const;
};

struct SweepOptions {
  /// Noise; identity when unset.
  std::optional<NoiseModel> noise;
  NewtonOptions newton{1e-10, 200, true};
};

/// Multivariate MI(Ik; Ikc; O) over the Cartesian grid of parameter values.
/// Each cell rebinds the rates, re-finds the equilibrium from (1, ..., 1)
/// (falling back to the previous cell's equilibrium) and re-solves the
/// Lyapunov equation. Failing cells are marked invalid and the sweep goes on.
/// Throws InvalidArgument for parameter names the network does not declare.
SweepResult mi_sweep(const ReactionNetwork& base, const std::vector<ParamRange>& grid, const IndexSet& ik,
                     const IndexSet& ikc, const IndexSet& o, const SweepOptions& options = {});

/// CSV with one column per parameter, then MI and status; numbers carry 10
/// significant digits.
std::string to_csv(const SweepResult& result);

}  // namespace netmeasure
