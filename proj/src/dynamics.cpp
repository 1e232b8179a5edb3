#include "netmeasure/dynamics.hpp"

#include "netmeasure/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace netmeasure {

VectorField perturbed(const VectorField& f, const VectorField& g, double delta) {
  if (f.dimension() != g.dimension()) throw InvalidArgument("perturbation dimension mismatch");
  VectorField::JacobianEvaluator df;
  if (f.has_jacobian() && g.has_jacobian()) {
    df = [f, g, delta](const Eigen::Ref<const VectorXd>& x, Eigen::Ref<MatrixXd> out) {
      MatrixXd jg(g.dimension(), g.dimension());
      f.analytic_jacobian(x, out);
      g.analytic_jacobian(x, jg);
      out += delta * jg;
    };
  }
  return VectorField(
      f.dimension(),
      [f, g, delta](const Eigen::Ref<const VectorXd>& x, Eigen::Ref<VectorXd> out) {
        VectorXd vg(g.dimension());
        f.evaluate(x, out);
        g.evaluate(x, vg);
        out += delta * vg;
      },
      std::move(df), f.description() + "+delta*" + g.description());
}

VectorField linear_field(const MatrixXd& m, std::string description) {
  if (m.rows() != m.cols()) throw InvalidArgument("linear field needs a square matrix");
  return VectorField(
      m.rows(), [m](const Eigen::Ref<const VectorXd>& x, Eigen::Ref<VectorXd> out) { out.noalias() = m * x; },
      [m](const Eigen::Ref<const VectorXd>&, Eigen::Ref<MatrixXd> out) { out = m; }, std::move(description));
}

MatrixXd finite_difference_jacobian(const VectorField& field, const VectorXd& x) {
  const Index n = field.dimension();
  MatrixXd out(n, n);
  VectorXd xp = x, xm = x, fp(n), fm(n);
  for (Index i = 0; i < n; ++i) {
    const double h = std::max(1e-6, 1e-6 * std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    field.evaluate(xp, fp);
    field.evaluate(xm, fm);
    out.col(i) = (fp - fm) / (xp[i] - xm[i]);
    xp[i] = xm[i] = x[i];
  }
  return out;
}

MatrixXd jacobian(const VectorField& field, const VectorXd& x) {
  if (!field.has_jacobian()) return finite_difference_jacobian(field, x);
  MatrixXd out(field.dimension(), field.dimension());
  field.analytic_jacobian(x, out);
  return out;
}

double spectral_abscissa(const MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("spectral abscissa needs a nonempty square matrix");
  if (!m.allFinite()) throw ConvergenceError("eigensolver failure: matrix has non-finite entries");
  Eigen::EigenSolver<MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("eigensolver failed to converge");
  return es.eigenvalues().real().maxCoeff();
}

Equilibrium find_equilibrium(const VectorField& field, const VectorXd& x_init, const NewtonOptions& options) {
  const Index n = field.dimension();
  if (x_init.size() != n) throw InvalidArgument("initial point has wrong dimension");
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");

  VectorXd x = x_init;
  VectorXd fx = field(x);
  double merit = 0.5 * fx.squaredNorm();
  int iter = 0;
  for (; iter < options.max_iterations && fx.lpNorm<Eigen::Infinity>() > options.tol; ++iter) {
    const MatrixXd jac = jacobian(field, x);
    Eigen::FullPivLU<MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "singular Newton step at iteration " << iter << " (rank " << lu.rank() << " of " << n
         << "); perturb the initial point";
      throw ConvergenceError(os.str());
    }
    VectorXd step = lu.solve(-fx);

    double lambda = 1.0;
    if (options.keep_nonnegative) {
      // Largest fraction of the step that stays in the closed orthant.
      for (Index i = 0; i < n; ++i)
        if (step[i] < 0.0 && x[i] + step[i] < 0.0) lambda = std::min(lambda, 0.99 * x[i] / -step[i]);
      lambda = std::max(lambda, 0.0);
    }
    // Armijo on 0.5||f||^2; the Newton direction has slope -||f||^2.
    constexpr double armijo = 1e-4;
    VectorXd trial(n), f_trial(n);
    bool accepted = false;
    for (int bt = 0; bt < 60 && lambda > 0.0; ++bt, lambda *= 0.5) {
      trial = x + lambda * step;
      field.evaluate(trial, f_trial);
      const double m = 0.5 * f_trial.squaredNorm();
      if (std::isfinite(m) && m <= (1.0 - 2.0 * armijo * lambda) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Near the solution roundoff can defeat the sufficient-decrease test;
      // accept a full step if it does not increase the residual.
      trial = x + step;
      field.evaluate(trial, f_trial);
      if (!(f_trial.lpNorm<Eigen::Infinity>() <= fx.lpNorm<Eigen::Infinity>()) ||
          (options.keep_nonnegative && (trial.array() < 0.0).any())) {
        std::ostringstream os;
        os << "line search failed at iteration " << iter << " with ||f||_inf = " << fx.lpNorm<Eigen::Infinity>();
        throw ConvergenceError(os.str());
      }
    }
    x = trial;
    fx = f_trial;
    merit = 0.5 * fx.squaredNorm();
  }
  const double residual = fx.lpNorm<Eigen::Infinity>();
  if (!(residual <= options.tol)) {
    std::ostringstream os;
    os << "Newton did not converge in " << options.max_iterations << " iterations (||f||_inf = " << residual << ")";
    throw ConvergenceError(os.str());
  }

  Equilibrium eq;
  eq.x0 = x;
  eq.jacobian = jacobian(field, x);
  eq.spectral_abscissa = spectral_abscissa(eq.jacobian);
  eq.residual = residual;
  eq.iterations = iter;
  return eq;
}

}  // namespace netmeasure
