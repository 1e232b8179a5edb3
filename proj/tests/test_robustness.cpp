#include "support.hpp"

#include "netmeasure/errors.hpp"
#include "netmeasure/robustness.hpp"

#include <doctest.h>

using namespace netmeasure;

namespace {

SampleEnsemble ou_ensemble(double eps, Index samples, std::uint64_t seed) {
  SimConfig cfg;
  cfg.dt = 5e-3;
  cfg.burn_in = 10.0;
  cfg.thin = 100;
  cfg.chains = 10;
  cfg.horizon = static_cast<double>(samples / cfg.chains * cfg.thin) * cfg.dt;
  cfg.seed = seed;
  return simulate(linear_field(-MatrixXd::Identity(1, 1)), NoiseModel::identity(1), eps, cfg, VectorXd::Zero(1));
}

LyapunovFunction half_square(const VectorXd& x0) {
  return {[x0](const Eigen::Ref<const VectorXd>& x) -> VectorXd { return x - x0; }};
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("Wasserstein robustness closed form") {
  CHECK(wasserstein_robustness(MatrixXd::Constant(1, 1, 0.5)) == doctest::Approx(1.0).epsilon(1e-15));
  for (Index n : {2, 5, 9}) {
    const MatrixXd S = solve_lyapunov(-MatrixXd::Identity(n, n), MatrixXd::Identity(n, n));
    CHECK(wasserstein_robustness(S) == doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(1e-14));
  }
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(1, 1) = -1;
  CHECK_THROWS_AS(wasserstein_robustness(bad), NotPositiveDefiniteError);
}

TEST_CASE("Wasserstein robustness is invariant under rotations") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 6;
    const MatrixXd J = testing::random_stable(rng, n);
    const MatrixXd A = testing::random_spd(rng, n);
    const MatrixXd Q = testing::random_orthogonal(rng, n);
    const double r = wasserstein_robustness(solve_lyapunov(J, A));
    const double rq = wasserstein_robustness(solve_lyapunov((Q * J * Q.transpose()).eval(), (Q * A * Q.transpose()).eval()));
    CHECK(std::abs(r - rq) <= 1e-10 * r);
  }
}

TEST_CASE("displacement slope is sqrt(Tr S)") {
  CHECK(displacement_slope(MatrixXd::Constant(1, 1, 0.5)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(displacement_slope(MatrixXd::Identity(4, 4)) == doctest::Approx(2.0));
}

TEST_CASE("unit performance gives R_f = 1") {
  const SampleEnsemble ens = ou_ensemble(0.1, 1000, 1);
  CHECK(functional_robustness(ens, unit_performance(VectorXd::Zero(1)), 0.1) == 1.0);
  CHECK_THROWS_AS(functional_robustness(ens, unit_performance(VectorXd::Zero(1)), 0.2), InputMismatchError);
}

TEST_CASE("OU functional robustness: simulation against the Gaussian integral") {
  const double eps = 0.1;
  const SampleEnsemble ens = ou_ensemble(eps, 100000, 2);
  const double closed = functional_robustness_gaussian(MatrixXd::Constant(1, 1, 0.5), eps);
  CHECK(closed == doctest::Approx(1.0 / std::sqrt(1.0 + eps * eps)).epsilon(1e-14));
  CHECK(testing::rel_err(functional_robustness(ens, default_performance(VectorXd::Zero(1)), eps), closed) <= 0.01);
}

TEST_CASE("1 - R_f scales like eps^2") {
  const MatrixXd S = MatrixXd::Constant(1, 1, 0.5);
  std::vector<double> lx, ly_closed, ly_sim;
  for (double eps : {0.05, 0.1, 0.2, 0.4}) {
    lx.push_back(std::log(eps));
    ly_closed.push_back(std::log(1.0 - functional_robustness_gaussian(S, eps)));
    const SampleEnsemble ens = ou_ensemble(eps, 20000, 3);
    ly_sim.push_back(std::log(1.0 - functional_robustness(ens, default_performance(VectorXd::Zero(1)), eps)));
  }
  CHECK(std::abs(fitted_slope(lx, ly_closed) - 2.0) <= 0.2);
  CHECK(std::abs(fitted_slope(lx, ly_sim) - 2.0) <= 0.2);
}

TEST_CASE("R_f is monotone in the performance function") {
  const SampleEnsemble ens = ou_ensemble(0.3, 5000, 4);
  const VectorXd x0 = VectorXd::Zero(1);
  const PerformanceFunction narrow{[](const Eigen::Ref<const VectorXd>& x) { return std::exp(-4.0 * x.squaredNorm()); },
                                   x0};
  CHECK(functional_robustness(ens, narrow, 0.3) <= functional_robustness(ens, default_performance(x0), 0.3));
}

TEST_CASE("uniform index of linear contractions") {
  for (Index n : {1, 2, 3}) {
    const VectorXd x0 = VectorXd::Zero(n);
    for (double rate : {1.0, 2.0}) {
      const VectorField f = linear_field(-rate * MatrixXd::Identity(n, n));
      const UniformIndexResult r = uniform_robustness_index(f, x0, half_square(x0));
      CHECK(r.alpha == doctest::Approx(rate).epsilon(1e-12));
      CHECK(r.skipped == 0);
      CHECK(r.evaluated == 10000);
    }
  }
}

TEST_CASE("uniform index of a symmetric contraction is the slowest rate") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXd Q = testing::random_orthogonal(rng, 2);
    const VectorXd lambda = (VectorXd(2) << -0.7, -2.5).finished();
    const MatrixXd J = Q * lambda.asDiagonal() * Q.transpose();
    const VectorXd x0 = VectorXd::Zero(2);
    const UniformIndexResult r = uniform_robustness_index(linear_field(J), x0, half_square(x0));
    CHECK(std::abs(r.alpha - 0.7) <= 1e-3);
  }
  const MatrixXd Q = testing::random_orthogonal(rng, 3);
  const MatrixXd J = Q * VectorXd(Eigen::Vector3d(-0.5, -1.0, -3.0)).asDiagonal() * Q.transpose();
  UniformIndexOptions opt;
  opt.grid_density = 200000;
  const UniformIndexResult r = uniform_robustness_index(linear_field(J), VectorXd::Zero(3), half_square(VectorXd::Zero(3)), opt);
  CHECK(r.alpha >= 0.5);
  CHECK(r.alpha - 0.5 <= 1e-2 * 2.5);
}

TEST_CASE("uniform index is non-increasing in the region radius") {
  // Contraction that weakens away from the origin: f_i = -a_i x_i + x_i |x|^2.
  const VectorField f(2, [](const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) {
    const double r2 = v.squaredNorm();
    out[0] = -1.0 * v[0] + v[0] * r2;
    out[1] = -3.0 * v[1] + v[1] * r2;
  });
  const VectorXd x0 = VectorXd::Zero(2);
  double previous = 1e300;
  for (double radius : {0.05, 0.2, 0.5, 0.8, 1.2}) {
    UniformIndexOptions opt;
    opt.region_radius = radius;
    const UniformIndexResult r = uniform_robustness_index(f, x0, half_square(x0), opt);
    CHECK(r.raw_minimum <= previous + 1e-12);
    CHECK(r.raw_minimum == doctest::Approx(1.0 - radius * radius).epsilon(1e-4));
    previous = r.raw_minimum;
  }
  UniformIndexOptions wide;
  wide.region_radius = 1.2;
  CHECK(uniform_robustness_index(f, x0, half_square(x0), wide).alpha == 0.0);
}

TEST_CASE("flat Lyapunov gradients are skipped and counted") {
  const LyapunovFunction flat_on_right{[](const Eigen::Ref<const VectorXd>& x) -> VectorXd {
    VectorXd g = x;
    if (x[0] > 0.0) g.setZero();
    return g;
  }};
  UniformIndexOptions opt;
  opt.grid_density = 40;
  opt.shells = 10;
  const UniformIndexResult r =
      uniform_robustness_index(linear_field(-MatrixXd::Identity(2, 2)), VectorXd::Zero(2), flat_on_right, opt);
  CHECK(r.skipped == 20);
  CHECK(r.evaluated == 20);
  CHECK(r.alpha == doctest::Approx(1.0));
}

TEST_CASE("mean square displacement") {
  SampleEnsemble still;
  still.points = MatrixXd::Constant(10, 2, 3.0);
  still.eps = 0.1;
  const Displacement d = mean_square_displacement(still, VectorXd::Constant(2, 3.0));
  CHECK(d.v == 0.0);
  CHECK(d.v_over_eps2 == 0.0);

  const SampleEnsemble ens = ou_ensemble(0.1, 100000, 6);
  CHECK(testing::rel_err(mean_square_displacement(ens, VectorXd::Zero(1)).v_over_eps2, 0.5) <= 0.03);
}

TEST_CASE("direction sets are unit vectors") {
  for (Index n : {1, 2, 3, 7}) {
    const MatrixXd d = direction_set(n, 257);
    for (Index j = 0; j < d.cols(); ++j) CHECK(d.col(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.rowwise().mean().norm() <= (n == 1 ? 0.01 : 0.2));
  }
}

TEST_CASE("quadratic Lyapunov function decreases along the flow") {
  std::mt19937_64 rng(27);
  const MatrixXd J = testing::random_stable(rng, 4);
  const VectorXd x0 = VectorXd::Zero(4);
  const LyapunovFunction u = quadratic_lyapunov_function(J, x0);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd x = testing::random_matrix(rng, 4, 1);
    // grad U . Jx = -|x|^2 for P solving J^T P + P J = -I.
    CHECK(u.gradient(x).dot(J * x) == doctest::Approx(-x.squaredNorm()).epsilon(1e-9));
  }
}
