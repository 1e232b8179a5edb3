#include "netmeasure/stationary.hpp"

#include <sstream>

namespace netmeasure {

NoiseModel NoiseModel::identity(Index n) {
  return NoiseModel(
      n, [n](const Eigen::Ref<const VectorXd>&) { return MatrixXd::Identity(n, n); }, "identity", true);
}

NoiseModel NoiseModel::constant(const MatrixXd& sigma, std::string description) {
  if (sigma.cols() < sigma.rows()) throw InvalidArgument("noise matrix must be n x m with m >= n");
  return NoiseModel(
      sigma.rows(), [sigma](const Eigen::Ref<const VectorXd>&) { return sigma; }, std::move(description));
}

NoiseModel NoiseModel::diagonal(const VectorXd& d) {
  std::ostringstream os;
  os << "diag(";
  for (Index i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ")";
  return constant(d.asDiagonal().toDenseMatrix(), os.str());
}

MatrixXd NoiseModel::diffusion(const Eigen::Ref<const VectorXd>& x) const {
  if (identity_) return MatrixXd::Identity(n_, n_);
  const MatrixXd s = sigma_(x);
  return s * s.transpose();
}

StationaryShape stationary_shape(const Equilibrium& eq, const NoiseModel& noise) {
  const Index n = eq.x0.size();
  if (noise.dimension() != n) throw InvalidArgument("noise model dimension does not match the field");
  if (!(eq.spectral_abscissa < 0.0)) {
    std::ostringstream os;
    os << "equilibrium is not linearly stable; spectral abscissa = " << eq.spectral_abscissa;
    throw InstabilityError(os.str(), eq.spectral_abscissa);
  }
  StationaryShape shape;
  shape.x0 = eq.x0;
  shape.J = eq.jacobian;
  shape.A = noise.diffusion(eq.x0);
  shape.spectral_abscissa = eq.spectral_abscissa;
  shape.equilibrium_residual = eq.residual;
  if (Eigen::LLT<MatrixXd>(shape.A).info() != Eigen::Success)
    throw NotPositiveDefiniteError("diffusion matrix sigma sigma^T is singular at the equilibrium");
  shape.S = solve_lyapunov(shape.J, shape.A, LyapunovMethod::Automatic, &shape.lyapunov);
  return shape;
}

StationaryShape stationary_shape(const VectorField& field, const NoiseModel& noise, const VectorXd& x_init,
                                 const NewtonOptions& options) {
  return stationary_shape(find_equilibrium(field, x_init, options), noise);
}

}  // namespace netmeasure
