#pragma once

#include "netmeasure/vector_field.hpp"

namespace netmeasure {

struct Equilibrium {
  VectorXd x0;
  MatrixXd jacobian;
  double spectral_abscissa = 0.0;
  double residual = 0.0;  ///< ||f(x0)||_inf
  int iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  /// Keep iterates in the closed positive orthant (mass-action fields).
  bool keep_nonnegative = false;
};

/// Damped Newton with Armijo backtracking on ||f||^2. Throws ConvergenceError
/// when the iteration stalls or the Newton matrix is singular.
Equilibrium find_equilibrium(const VectorField& field, const VectorXd& x_init, const NewtonOptions& options = {});

/// Analytic Jacobian when the field has one, otherwise central differences
/// with per-coordinate step max(1e-6, 1e-6 |x_i|).
MatrixXd jacobian(const VectorField& field, const VectorXd& x);

/// Central-difference Jacobian regardless of whether an analytic one exists.
MatrixXd finite_difference_jacobian(const VectorField& field, const VectorXd& x);

/// Largest real part over the spectrum of a square matrix.
double spectral_abscissa(const MatrixXd& m);

}  // namespace netmeasure
