#pragma once

#include "netmeasure/knn_entropy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace netmeasure {

struct PersistenceOptions {
  std::optional<NoiseModel> noise;  ///< identity when unset
  VectorXd x_init;                  ///< start of the first Newton solve
  NewtonOptions newton;
  /// When set, D(O) is estimated from simulated ensembles at eps (common
  /// seed across rows) instead of the Gaussian limit.
  std::optional<SimConfig> simulation;
  KnnOptions knn;
};

struct PersistenceRow {
  double delta = 0.0;
  double degeneracy = 0.0;
  bool valid = false;
  std::string status;
};

struct PersistenceTable {
  double eps = 0.0;
  IndexSet output;
  std::vector<PersistenceRow> rows;
  /// max |D(delta_{i+1}) - D(delta_i)| over consecutive valid rows.
  double max_successive_difference = 0.0;
};

/// D(O) of f + delta g for each delta. Equilibria are continued from one row
/// to the next; rows where the equilibrium is lost or unstable are flagged.
PersistenceTable persistence_probe(const VectorField& field, const VectorField& perturbation,
                                   const std::vector<double>& deltas, double eps, const IndexSet& output,
                                   const PersistenceOptions& options = {});

}  // namespace netmeasure
