#include "netmeasure/robustness.hpp"

#include <boost/math/special_functions/prime.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace netmeasure {

double wasserstein_robustness(const MatrixXd& S) {
  Eigen::LLT<MatrixXd> llt(S);
  if (S.rows() == 0 || llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError("Wasserstein robustness needs a positive definite S");
  const double trace_inv = llt.solve(MatrixXd::Identity(S.rows(), S.cols())).trace();
  return std::sqrt(2.0 / trace_inv);
}

double displacement_slope(const MatrixXd& S) {
  if (S.rows() == 0 || S.rows() != S.cols()) throw InvalidArgument("displacement slope needs a square S");
  return std::sqrt(S.trace());
}

PerformanceFunction default_performance(const VectorXd& x0) {
  return {[x0](const Eigen::Ref<const VectorXd>& x) { return std::exp(-(x - x0).squaredNorm()); }, x0, true};
}

PerformanceFunction unit_performance(const VectorXd& x0) {
  return {[](const Eigen::Ref<const VectorXd>&) { return 1.0; }, x0, false};
}

double functional_robustness(const SampleEnsemble& samples, const PerformanceFunction& p, double eps) {
  if (samples.size() == 0) throw InvalidArgument("functional robustness of an empty ensemble");
  if (std::abs(samples.eps - eps) > 1e-12 * std::max(1.0, std::abs(eps))) {
    std::ostringstream os;
    os << "ensemble was drawn at eps = " << samples.eps << ", requested eps = " << eps;
    throw InputMismatchError(os.str());
  }
  std::vector<double> values(static_cast<std::size_t>(samples.size()));
  for (Index r = 0; r < samples.size(); ++r) values[static_cast<std::size_t>(r)] = p(samples.points.row(r).transpose());
  return pairwise_sum(values.data(), values.size()) / static_cast<double>(values.size());
}

double functional_robustness_gaussian(const MatrixXd& S, double eps) {
  const MatrixXd m = MatrixXd::Identity(S.rows(), S.cols()) + 2.0 * eps * eps * S;
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("I + 2 eps^2 S is not positive definite");
  double logdet = 0.0;
  for (Index i = 0; i < m.rows(); ++i) logdet += 2.0 * std::log(llt.matrixLLT()(i, i));
  return std::exp(-0.5 * logdet);
}

LyapunovFunction quadratic_lyapunov_function(const MatrixXd& J, const VectorXd& x0) {
  // solve_lyapunov(J^T, I) returns P with P J + J^T P + I = 0.
  const MatrixXd P = solve_lyapunov(J.transpose(), MatrixXd::Identity(J.rows(), J.cols()));
  return {[P, x0](const Eigen::Ref<const VectorXd>& x) -> VectorXd { return 2.0 * P * (x - x0); }};
}

MatrixXd direction_set(Index n, int count) {
  if (n < 1 || count < 1) throw InvalidArgument("direction_set: need n >= 1 and count >= 1");
  MatrixXd dirs(n, count);
  if (n == 1) {
    for (int j = 0; j < count; ++j) dirs(0, j) = j % 2 == 0 ? 1.0 : -1.0;
    return dirs;
  }
  if (n == 2) {
    for (int j = 0; j < count; ++j) {
      const double t = 2.0 * std::numbers::pi * (j + 0.5) / count;
      dirs(0, j) = std::cos(t);
      dirs(1, j) = std::sin(t);
    }
    return dirs;
  }
  // Halton points pushed through Box-Muller give a quasi-random Gaussian
  // cloud; normalizing yields directions uniform on the sphere.
  const Index pairs = (n + 1) / 2;
  auto radical_inverse = [](unsigned index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
      f /= base;
      r += f * (index % base);
      index /= base;
    }
    return r;
  };
  for (int j = 0; j < count; ++j) {
    VectorXd g(2 * pairs);
    for (Index p = 0; p < pairs; ++p) {
      const double u1 = radical_inverse(static_cast<unsigned>(j + 1), boost::math::prime(static_cast<unsigned>(2 * p)));
      const double u2 = radical_inverse(static_cast<unsigned>(j + 1), boost::math::prime(static_cast<unsigned>(2 * p + 1)));
      const double radius = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      g[2 * p] = radius * std::cos(2.0 * std::numbers::pi * u2);
      g[2 * p + 1] = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    VectorXd d = g.head(n);
    const double norm = d.norm();
    dirs.col(j) = norm > 0.0 ? VectorXd(d / norm) : VectorXd(VectorXd::Unit(n, 0));
  }
  return dirs;
}

UniformIndexResult uniform_robustness_index(const VectorField& field, const VectorXd& x0, const LyapunovFunction& u,
                                            const UniformIndexOptions& options) {
  const Index n = field.dimension();
  if (x0.size() != n) throw InvalidArgument("uniform index: x0 has wrong dimension");
  if (!(options.region_radius > 0.0)) throw InvalidArgument("uniform index: region radius must be positive");
  if (!(options.inner_fraction > 0.0 && options.inner_fraction <= 1.0))
    throw InvalidArgument("uniform index: inner fraction must lie in (0, 1]");
  const int shells = std::max(1, options.shells);
  const int directions = std::max(1, options.grid_density / shells);
  const MatrixXd dirs = direction_set(n, directions);

  UniformIndexResult out;
  out.shells = shells;
  out.directions = directions;
  bool any = false;
  VectorXd fx(n);
  for (int s = 0; s < shells; ++s) {
    // Geometric spacing from inner_fraction * r up to r.
    const double t = shells == 1 ? 1.0 : static_cast<double>(s) / (shells - 1);
    const double radius = options.region_radius * std::pow(options.inner_fraction, 1.0 - t);
    for (int j = 0; j < directions; ++j) {
      const VectorXd x = x0 + radius * dirs.col(j);
      const VectorXd grad = u.gradient(x);
      const double gnorm = grad.norm();
      if (!(gnorm > 0.0) || !std::isfinite(gnorm)) {
        ++out.skipped;
        continue;
      }
      field.evaluate(x, fx);
      const double value = -grad.dot(fx) / (gnorm * radius);
      ++out.evaluated;
      if (!any || value < out.raw_minimum) out.raw_minimum = value;
      any = true;
    }
  }
  if (!any) throw InvalidArgument("uniform index: grad U vanished at every grid point");
  out.alpha = std::max(0.0, out.raw_minimum);
  return out;
}

Displacement mean_square_displacement(const SampleEnsemble& samples, const VectorXd& x0) {
  if (samples.size() == 0) throw InvalidArgument("mean square displacement of an empty ensemble");
  if (x0.size() != samples.dimension()) throw InvalidArgument("mean square displacement: x0 has wrong dimension");
  std::vector<double> d2(static_cast<std::size_t>(samples.size()));
  for (Index r = 0; r < samples.size(); ++r)
    d2[static_cast<std::size_t>(r)] = (samples.points.row(r).transpose() - x0).squaredNorm();
  Displacement out;
  out.v = pairwise_sum(d2.data(), d2.size()) / static_cast<double>(d2.size());
  out.v_over_eps2 = samples.eps > 0.0 ? out.v / (samples.eps * samples.eps) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace netmeasure
