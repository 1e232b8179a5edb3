#include "support.hpp"

#include "netmeasure/errors.hpp"
#include "netmeasure/knn_entropy.hpp"
#include "netmeasure/quadrature.hpp"
#include "netmeasure/systems.hpp"

#include <doctest.h>

#include <numbers>

using namespace netmeasure;

namespace {

const double kLog2PiE = std::log(2.0 * std::numbers::pi * std::numbers::e);

/// Independent draws from N(0, L L^T), row per sample.
MatrixXd gaussian_points(std::mt19937_64& rng, const MatrixXd& L, Index count) {
  std::normal_distribution<double> z;
  const MatrixXd w = MatrixXd::NullaryExpr(count, L.cols(), [&] { return z(rng); });
  return w * L.transpose();
}

SampleEnsemble as_ensemble(MatrixXd pts) {
  SampleEnsemble e;
  e.points = std::move(pts);
  return e;
}

}  // namespace

TEST_CASE("k-NN entropy of standard normals") {
  std::mt19937_64 rng(101);
  for (Index n : {1, 2, 3}) {
    const MatrixXd pts = gaussian_points(rng, MatrixXd::Identity(n, n), 20000);
    const double want = 0.5 * static_cast<double>(n) * kLog2PiE;
    KnnOptions raw;
    raw.whiten = false;
    CHECK(testing::rel_err(knn_entropy_detailed(pts, IndexSet::range(n), raw).value, want) <= 0.02);
    CHECK(testing::rel_err(knn_entropy_detailed(pts, IndexSet::range(n)).value, want) <= 0.02);
  }
}

TEST_CASE("k-NN entropy shifts by log|det| under linear maps") {
  std::mt19937_64 rng(102);
  const MatrixXd pts = gaussian_points(rng, MatrixXd::Identity(2, 2), 10000);
  const double base = knn_entropy_detailed(pts, IndexSet::range(2)).value;
  for (double c : {0.01, 3.0, 1000.0}) {
    const MatrixXd scaled = c * pts;
    CHECK(knn_entropy_detailed(scaled, IndexSet::range(2)).value ==
          doctest::Approx(base + 2.0 * std::log(c)).epsilon(1e-9));
  }
  // Whitening makes the estimate exactly affine-equivariant.
  MatrixXd M(2, 2);
  M << 2.0, 1.5, 0.0, 0.3;
  const MatrixXd mapped = pts * M.transpose();
  CHECK(knn_entropy_detailed(mapped, IndexSet::range(2)).value ==
        doctest::Approx(base + std::log(std::abs(M.determinant()))).epsilon(1e-9));
}

TEST_CASE("k-NN entropy ignores the coordinate order") {
  std::mt19937_64 rng(103);
  MatrixXd L(3, 3);
  L << 1.0, 0.0, 0.0, 0.4, 0.8, 0.0, -0.2, 0.3, 0.5;
  const MatrixXd pts = gaussian_points(rng, L, 5000);
  MatrixXd swapped(pts.rows(), 3);
  swapped << pts.col(2), pts.col(0), pts.col(1);
  KnnOptions raw;
  raw.whiten = false;
  CHECK(knn_entropy_detailed(pts, IndexSet::range(3), raw).value ==
        doctest::Approx(knn_entropy_detailed(swapped, IndexSet::range(3), raw).value).epsilon(1e-12));
  CHECK(knn_entropy_detailed(pts, IndexSet{0, 2}, raw).value ==
        doctest::Approx(knn_entropy_detailed(swapped, IndexSet{0, 1}, raw).value).epsilon(1e-12));
}

TEST_CASE("empirical mutual information") {
  std::mt19937_64 rng(104);
  SUBCASE("independent coordinates") {
    const SampleEnsemble ens = as_ensemble(gaussian_points(rng, MatrixXd::Identity(3, 3), 20000));
    const EntropyOracle h = empirical_oracle(ens);
    CHECK(std::abs(mutual_information(h, IndexSet{0}, IndexSet{1})) <= 0.01);
    // Mixed-dimension terms carry a larger finite-sample bias.
    CHECK(std::abs(mutual_information(h, IndexSet{0, 1}, IndexSet{2})) <= 0.03);
  }
  SUBCASE("correlated pair") {
    const double rho = 0.8;
    MatrixXd L(2, 2);
    L << 1.0, 0.0, rho, std::sqrt(1.0 - rho * rho);
    const SampleEnsemble ens = as_ensemble(gaussian_points(rng, L, 20000));
    const double want = -0.5 * std::log(1.0 - rho * rho);
    CHECK(testing::rel_err(mutual_information(empirical_oracle(ens), IndexSet{0}, IndexSet{1}), want) <= 0.05);
  }
}

TEST_CASE("kd-tree neighbor distances match brute force") {
  std::mt19937_64 rng(105);
  const MatrixXd pts = testing::random_matrix(rng, 3, 700);
  const KdTree tree(pts, 8);
  for (int k : {1, 4}) {
    const VectorXd got = tree.kth_neighbor_distances(k);
    for (Index i = 0; i < pts.cols(); i += 37) {
      std::vector<double> d;
      for (Index j = 0; j < pts.cols(); ++j)
        if (j != i) d.push_back((pts.col(i) - pts.col(j)).norm());
      std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
      CHECK(got[i] == doctest::Approx(d[static_cast<std::size_t>(k - 1)]).epsilon(1e-14));
    }
  }
}

TEST_CASE("duplicate points are jittered") {
  std::mt19937_64 rng(106);
  MatrixXd pts = gaussian_points(rng, MatrixXd::Identity(2, 2), 2000);
  pts.middleRows(1000, 20).rowwise() = pts.row(0);
  const KnnEntropyResult r = knn_entropy_detailed(pts, IndexSet::range(2));
  CHECK(r.jittered);
  CHECK(r.coincident > 0);
  CHECK(std::isfinite(r.value));
  KnnOptions no_jitter;
  no_jitter.jitter = 0.0;
  CHECK_THROWS_AS(knn_entropy_detailed(pts, IndexSet::range(2), no_jitter), InvalidArgument);
}

TEST_CASE("quadrature entropy of an indicator on the unit box") {
  for (Index n : {1, 2, 3}) {
    const auto indicator = [](const Eigen::Ref<const VectorXd>& x) {
      return (x.array() >= 0.0).all() && (x.array() <= 1.0).all() ? 1.0 : 0.0;
    };
    const QuadratureEntropy q = quadrature_entropy(indicator, {VectorXd::Zero(n), VectorXd::Ones(n)}, 20);
    CHECK(std::abs(q.value) <= 1e-12);
    CHECK(q.normalizer == doctest::Approx(1.0));
    CHECK(q.outside_mass == 0.0);
  }
}

TEST_CASE("quadrature entropy of normals") {
  for (Index n : {1, 2, 3}) {
    const auto density = [](const Eigen::Ref<const VectorXd>& x) { return std::exp(-0.5 * x.squaredNorm()); };
    const Index res = n == 3 ? 48 : 200;
    const QuadratureEntropy q = quadrature_entropy(density, {VectorXd::Constant(n, -8.0), VectorXd::Constant(n, 8.0)}, res);
    CHECK(std::abs(q.value - 0.5 * static_cast<double>(n) * kLog2PiE) <= 1e-4);
  }
}

TEST_CASE("quadrature refuses boxes that clip the mass") {
  const auto density = [](const Eigen::Ref<const VectorXd>& x) { return std::exp(-0.5 * x.squaredNorm()); };
  CHECK_THROWS_AS(quadrature_entropy(density, {VectorXd::Constant(1, -2.0), VectorXd::Constant(1, 2.0)}, 100),
                  InvalidArgument);
  CHECK_THROWS_AS(quadrature_entropy(density, {VectorXd::Constant(1, -8.0), VectorXd::Constant(1, 8.0)}, 7),
                  InvalidArgument);
}

TEST_CASE("limit-cycle entropy is stable across resolutions") {
  const System sys = limit_cycle_system();
  const double eps = 0.3;
  const auto density = [&](const Eigen::Ref<const VectorXd>& x) { return sys.stationary_density(x, eps); };
  const QuadratureEntropy coarse = quadrature_entropy(density, sys.density_box(eps), 80);
  const QuadratureEntropy fine = quadrature_entropy(density, sys.density_box(eps), 160);
  CHECK(std::abs(coarse.value - fine.value) <= 1e-3 * std::abs(fine.value));
}
