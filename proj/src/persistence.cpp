#include "netmeasure/persistence.hpp"

#include <cmath>

namespace netmeasure {

PersistenceTable persistence_probe(const VectorField& field, const VectorField& perturbation,
                                   const std::vector<double>& deltas, double eps, const IndexSet& output,
                                   const PersistenceOptions& options) {
  const Index n = field.dimension();
  if (perturbation.dimension() != n) throw InvalidArgument("persistence_probe: perturbation dimension mismatch");
  if (!(eps > 0.0)) throw InvalidArgument("persistence_probe: eps must be positive");
  const NoiseModel noise = options.noise.value_or(NoiseModel::identity(n));
  VectorXd x = options.x_init.size() == n ? options.x_init : VectorXd(VectorXd::Zero(n));

  PersistenceTable table;
  table.eps = eps;
  table.output = output;
  for (double delta : deltas) {
    PersistenceRow row;
    row.delta = delta;
    try {
      const VectorField g = perturbed(field, perturbation, delta);
      const Equilibrium eq = find_equilibrium(g, x, options.newton);
      const StationaryShape shape = stationary_shape(eq, noise);
      if (options.simulation) {
        const SampleEnsemble ens = simulate(g, noise, eps, *options.simulation, eq.x0);
        row.degeneracy = degeneracy_output(empirical_oracle(ens, options.knn), output);
      } else {
        row.degeneracy = degeneracy_output(gaussian_oracle(shape.S, eps), output);
      }
      row.valid = std::isfinite(row.degeneracy);
      row.status = row.valid ? "ok" : "non-finite degeneracy";
      x = eq.x0;
    } catch (const Error& e) {
      row.status = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  const PersistenceRow* prev = nullptr;
  for (const auto& row : table.rows) {
    if (!row.valid) continue;
    if (prev) table.max_successive_difference = std::max(table.max_successive_difference, std::abs(row.degeneracy - prev->degeneracy));
    prev = &row;
  }
  return table;
}

}  // namespace netmeasure
