#pragma once

#include "netmeasure/sampling.hpp"
#include "netmeasure/stationary.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace netmeasure {

/// R_w = sqrt(2 / Tr(S^-1)); throws NotPositiveDefiniteError for non-SPD S.
double wasserstein_robustness(const MatrixXd& S);
inline double wasserstein_robustness(const StationaryShape& shape) { return wasserstein_robustness(shape.S); }

/// lim sqrt(V(eps)) / eps = sqrt(Tr S): the transport distance W(mu_eps,
/// delta_x0) per unit eps in the Gaussian limit.
double displacement_slope(const MatrixXd& S);

/// Performance function p with p(x0) = 1 and 0 < p < 1 elsewhere.
struct PerformanceFunction {
  std::function<double(const Eigen::Ref<const VectorXd>&)> p;
  VectorXd x0;
  /// Set when p(x) = exp(-||x - x0||^2), which admits a Gaussian closed form.
  bool is_default_gaussian = false;

  double operator()(const Eigen::Ref<const VectorXd>& x) const { return p(x); }
};

/// p(x) = exp(-||x - x0||^2)
PerformanceFunction default_performance(const VectorXd& x0);

/// p == 1
PerformanceFunction unit_performance(const VectorXd& x0);

/// Sample mean of p over the ensemble (pairwise summation). Throws
/// InputMismatchError when the ensemble was drawn at a different eps.
double functional_robustness(const SampleEnsemble& samples, const PerformanceFunction& p, double eps);

/// E[p(X)] for X ~ N(x0, eps^2 S) with the default p: det(I + 2 eps^2 S)^(-1/2).
double functional_robustness_gaussian(const MatrixXd& S, double eps);

/// Strong Lyapunov function used by the uniform robustness index; only its
/// gradient enters the index.
struct LyapunovFunction {
  std::function<VectorXd(const Eigen::Ref<const VectorXd>&)> gradient;
};

/// U(x) = (x - x0)^T P (x - x0) with J^T P + P J = -I.
LyapunovFunction quadratic_lyapunov_function(const MatrixXd& J, const VectorXd& x0);

struct UniformIndexOptions {
  double region_radius = 1.0;
  /// Total grid points: shells x directions.
  int grid_density = 10000;
  int shells = 10;
  /// Inner shell radius as a fraction of region_radius.
  double inner_fraction = 0.1;
};

struct UniformIndexResult {
  double alpha = 0.0;  ///< clipped below at 0
  double raw_minimum = 0.0;
  int evaluated = 0;
  int skipped = 0;  ///< points where grad U vanished
  int shells = 0;
  int directions = 0;
};

/// alpha = min over grid x != x0 of -(grad U . f) / (|grad U| |x - x0|),
/// clipped at 0. The grid is `shells` geometric radii in
/// [inner_fraction r, r] times a Halton-based direction set.
UniformIndexResult uniform_robustness_index(const VectorField& field, const VectorXd& x0, const LyapunovFunction& u,
                                            const UniformIndexOptions& options = {});

/// Deterministic quasi-uniform unit directions in R^n.
MatrixXd direction_set(Index n, int count);

struct Displacement {
  double v = 0.0;               ///< mean ||x - x0||^2
  double v_over_eps2 = 0.0;     ///< NaN when eps == 0
};

/// V(eps) = mean ||x - x0||^2 over the ensemble.
Displacement mean_square_displacement(const SampleEnsemble& samples, const VectorXd& x0);

struct RobustnessReport {
  double wasserstein = 0.0;
  std::vector<std::pair<double, double>> functional;  ///< (eps, R_f)
  UniformIndexResult uniform;
  UniformIndexOptions uniform_options;
};

}  // namespace netmeasure
