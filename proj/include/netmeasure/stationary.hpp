#pragma once

#include "netmeasure/dynamics.hpp"
#include "netmeasure/lyapunov.hpp"

#include <functional>
#include <string>

namespace netmeasure {

/// Noise matrix x -> sigma(x), n x m with m >= n.
class NoiseModel {
 public:
  using Evaluator = std::function<MatrixXd(const Eigen::Ref<const VectorXd>&)>;

  NoiseModel(Index n, Evaluator sigma, std::string description, bool identity = false)
      : n_(n), sigma_(std::move(sigma)), description_(std::move(description)), identity_(identity) {}

  static NoiseModel identity(Index n);
  /// Constant sigma.
  static NoiseModel constant(const MatrixXd& sigma, std::string description = "constant");
  static NoiseModel diagonal(const VectorXd& d);

  Index dimension() const noexcept { return n_; }
  bool is_identity() const noexcept { return identity_; }
  const std::string& description() const noexcept { return description_; }
  MatrixXd operator()(const Eigen::Ref<const VectorXd>& x) const { return sigma_(x); }

  /// A(x) = sigma(x) sigma(x)^T
  MatrixXd diffusion(const Eigen::Ref<const VectorXd>& x) const;

 private:
  Index n_;
  Evaluator sigma_;
  std::string description_;
  bool identity_;
};

/// Small-noise stationary shape at a stable equilibrium: the Gaussian limit
/// of mu_eps has mean x0 and covariance eps^2 S.
struct StationaryShape {
  VectorXd x0;
  MatrixXd J;
  MatrixXd A;
  MatrixXd S;
  double spectral_abscissa = 0.0;
  double equilibrium_residual = 0.0;
  LyapunovDiagnostics lyapunov;

  Index dimension() const noexcept { return S.rows(); }
};

/// Shape from an equilibrium and a noise model. Throws InstabilityError when
/// J is not Hurwitz and NotPositiveDefiniteError when A(x0) is singular.
StationaryShape stationary_shape(const Equilibrium& eq, const NoiseModel& noise);

/// find_equilibrium followed by stationary_shape.
StationaryShape stationary_shape(const VectorField& field, const NoiseModel& noise, const VectorXd& x_init,
                                 const NewtonOptions& options = {});

}  // namespace netmeasure
