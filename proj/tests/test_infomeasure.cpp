#include "support.hpp"

#include "netmeasure/errors.hpp"
#include "netmeasure/infomeasure.hpp"

#include <doctest.h>

#include <numbers>

using namespace netmeasure;
using testing::random_spd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

/// Gaussian entropy through an LU determinant; a separate route from the
/// Cholesky log-determinants used by the library.
double lu_entropy(const MatrixXd& S, const IndexSet& idx, double eps = 1.0) {
  if (idx.empty()) return 0.0;
  MatrixXd sub(idx.size(), idx.size());
  for (Index i = 0; i < idx.size(); ++i)
    for (Index j = 0; j < idx.size(); ++j) sub(i, j) = eps * eps * S(idx[i], idx[j]);
  const double k = static_cast<double>(idx.size());
  return 0.5 * (k * std::log(2 * kPi * kE) + std::log(sub.partialPivLu().determinant()));
}

double lu_mi(const MatrixXd& S, const IndexSet& a, const IndexSet& b) {
  return lu_entropy(S, a) + lu_entropy(S, b) - lu_entropy(S, set_union(a, b));
}

double lu_mmi(const MatrixXd& S, const IndexSet& a, const IndexSet& b, const IndexSet& o) {
  return lu_mi(S, a, o) + lu_mi(S, b, o) - lu_mi(S, set_union(a, b), o);
}

/// Degeneracy and complexity of one output set by a direct loop over subsets.
std::pair<double, double> brute_measures(const MatrixXd& S, const IndexSet& o) {
  const Index n = S.rows();
  const IndexSet inputs = complement(o, n);
  const Index m = inputs.size();
  double d = 0.0, c = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Index> a, b;
    for (Index i = 0; i < m; ++i) ((mask >> i) & 1 ? a : b).push_back(inputs[i]);
    const double k = static_cast<double>(a.size());
    double binom = 1.0;
    for (double j = 1; j <= k; ++j) binom *= (static_cast<double>(m) - k + j) / j;
    const IndexSet ia(a), ib(b);
    d += std::max(lu_mmi(S, ia, ib, o), 0.0) / (2 * binom);
    c += lu_mi(S, ia, ib) / (2 * binom);
  }
  return {d, c};
}

MatrixXd enzyme_S() {
  NewtonOptions opt;
  opt.keep_nonnegative = true;
  return stationary_shape(mass_action_field(testing::enzyme()), NoiseModel::identity(7), VectorXd::Ones(7), opt).S;
}

/// Midpoint quadrature of -int u log u for a centred bivariate normal.
double quadrature_entropy_2d(const MatrixXd& cov) {
  const MatrixXd inv = cov.inverse();
  const double norm = 1.0 / (2 * kPi * std::sqrt(cov.determinant()));
  const double half = 9.0 * std::sqrt(cov.diagonal().maxCoeff());
  const int cells = 1200;
  const double h = 2 * half / cells;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = -half + (i + 0.5) * h;
    for (int j = 0; j < cells; ++j) {
      const double y = -half + (j + 0.5) * h;
      const double q = inv(0, 0) * x * x + 2 * inv(0, 1) * x * y + inv(1, 1) * y * y;
      const double u = norm * std::exp(-0.5 * q);
      if (u > 0) acc -= u * std::log(u);
    }
  }
  return acc * h * h;
}

}  // namespace

TEST_CASE("scalar normal entropy") {
  CHECK(gaussian_entropy(MatrixXd::Constant(1, 1, 0.5), IndexSet{0}, 1.0) ==
        doctest::Approx(0.5 * std::log(kPi * kE)).epsilon(1e-14));
}

TEST_CASE("entropy is additive across independent blocks") {
  std::mt19937_64 rng(8);
  MatrixXd S = MatrixXd::Zero(5, 5);
  S.topLeftCorner(2, 2) = random_spd(rng, 2);
  S.bottomRightCorner(3, 3) = random_spd(rng, 3);
  const IndexSet a{0, 1}, b{2, 4};
  CHECK(gaussian_entropy(S, set_union(a, b), 0.3) ==
        doctest::Approx(gaussian_entropy(S, a, 0.3) + gaussian_entropy(S, b, 0.3)).epsilon(1e-12));
}

TEST_CASE("bivariate entropy matches two-dimensional quadrature") {
  MatrixXd S(2, 2);
  S << 1.0, 0.5, 0.5, 1.0;
  const double eps = 0.1;
  const double want = quadrature_entropy_2d(eps * eps * S);
  CHECK(std::abs(gaussian_entropy(S, IndexSet{0, 1}, eps) - want) <= 1e-6);
}

TEST_CASE("mutual information closed forms") {
  const MatrixXd D = (VectorXd(3) << 1.0, 2.0, 0.5).finished().asDiagonal();
  const EntropyOracle hd = gaussian_oracle(D);
  CHECK(std::abs(mutual_information(hd, IndexSet{0}, IndexSet{1, 2})) <= 1e-14);
  for (double rho : {-0.9, -0.2, 0.3, 0.5, 0.99}) {
    MatrixXd S(2, 2);
    S << 1.0, rho, rho, 1.0;
    CHECK(mutual_information(gaussian_oracle(S), IndexSet{0}, IndexSet{1}) ==
          doctest::Approx(-0.5 * std::log(1 - rho * rho)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mutual_information(hd, IndexSet{0, 1}, IndexSet{1}), InvalidArgument);
}

TEST_CASE("enzyme pairwise and multivariate MI against an independent route") {
  const MatrixXd S = enzyme_S();
  const EntropyOracle h = gaussian_oracle(S);
  const IndexSet s1{0}, s2{1}, p{5, 6};
  CHECK(mutual_information(h, s1, s2) == doctest::Approx(lu_mi(S, s1, s2)).epsilon(1e-10));
  const double mmi = multivariate_mi(h, s1, s2, p);
  CHECK(mmi == doctest::Approx(lu_mmi(S, s1, s2, p)).epsilon(1e-10));
  CHECK(mmi == doctest::Approx(gaussian_multivariate_mi(S, s1, s2, p)).epsilon(1e-10));
  // Weak but positive: 0.0646 nats.
  CHECK(testing::rel_err(mmi, 0.0646) <= 0.01);
}

TEST_CASE("multivariate MI edge cases") {
  std::mt19937_64 rng(9);
  const MatrixXd S = random_spd(rng, 4);
  const EntropyOracle h = gaussian_oracle(S);
  CHECK(multivariate_mi(h, IndexSet{}, IndexSet{0, 1}, IndexSet{3}) == 0.0);
  const MatrixXd D = VectorXd::LinSpaced(4, 1.0, 4.0).asDiagonal();
  CHECK(std::abs(multivariate_mi(gaussian_oracle(D), IndexSet{0}, IndexSet{1, 2}, IndexSet{3})) <= 1e-14);
}

TEST_CASE("two-input degeneracy is half the clipped interaction") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXd S = random_spd(rng, 3);
    const EntropyOracle h = gaussian_oracle(S);
    const IndexSet o{2};
    const double mmi = multivariate_mi(h, IndexSet{0}, IndexSet{1}, o);
    CHECK(degeneracy_output(h, o) == doctest::Approx(0.5 * std::max(mmi, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("diagonal covariance has no degeneracy or complexity") {
  const MatrixXd D = VectorXd::LinSpaced(5, 0.5, 3.0).asDiagonal();
  const EntropyOracle h = gaussian_oracle(D);
  for (const auto& o : all_output_sets(5)) {
    CHECK(std::abs(degeneracy_output(h, o)) <= 1e-13);
    CHECK(std::abs(complexity_output(h, o)) <= 1e-13);
  }
  const DecompositionMeasures m = eps_sigma_measures(gaussian_oracle(MatrixXd::Identity(2, 2)), std::nullopt);
  CHECK(m.degeneracy == 0.0);
  CHECK(m.complexity == 0.0);
  CHECK_FALSE(m.truncated);
}

TEST_CASE("enzyme products: positive degeneracy below the complexity") {
  const EntropyOracle h = gaussian_oracle(enzyme_S());
  const IndexSet p{5, 6};
  const double d = degeneracy_output(h, p);
  const double c = complexity_output(h, p);
  CHECK(d > 0.0);
  CHECK(c >= d);
  const DecompositionMeasures m = eps_sigma_measures(h, std::vector<IndexSet>{p});
  REQUIRE(m.outputs.size() == 1);
  bool found = false;
  for (const auto& it : m.outputs[0].interactions)
    if (it.ik == IndexSet{0} && it.ikc == IndexSet{1, 2, 3, 4}) found = true;
  CHECK(found);
  CHECK(m.outputs[0].interactions.size() == 15);  // (2^5 - 2) / 2 unordered splits
}

TEST_CASE("maximum over all outputs equals a brute-force re-enumeration") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXd S = random_spd(rng, 5);
    const DecompositionMeasures m = eps_sigma_measures(gaussian_oracle(S), std::nullopt);
    double best_d = -1.0, best_c = -1e300;
    for (std::uint64_t mask = 1; mask < 31; ++mask) {
      const auto [d, c] = brute_measures(S, IndexSet::from_mask(mask));
      best_d = std::max(best_d, d);
      best_c = std::max(best_c, c);
    }
    CHECK(m.degeneracy == doctest::Approx(best_d).epsilon(1e-10));
    CHECK(m.complexity == doctest::Approx(best_c).epsilon(1e-10));
    CHECK(m.outputs.size() == 30);
  }
}

TEST_CASE("interaction information is bounded by every pairwise MI") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 3 + trial % 4;
    const MatrixXd S = random_spd(rng, n);
    const EntropyOracle h = gaussian_oracle(S);
    // Every assignment of coordinates to (Ik, Ikc, O, unused).
    std::uint64_t total = 1;
    for (Index i = 0; i < n; ++i) total *= 4;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<Index> part[4];
      std::uint64_t c = code;
      for (Index i = 0; i < n; ++i, c /= 4) part[c % 4].push_back(i);
      if (part[0].empty() || part[1].empty() || part[2].empty()) continue;
      const IndexSet a(part[0]), b(part[1]), o(part[2]);
      const double mmi = multivariate_mi(h, a, b, o);
      const double bound =
          std::min({mutual_information(h, a, b), mutual_information(h, a, o), mutual_information(h, b, o)});
      CHECK(mmi <= bound + 1e-9);
      CHECK(multivariate_mi(h, b, a, o) == mmi);
    }
  }
}

TEST_CASE("complexity dominates degeneracy for every output") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 5;
    const EntropyOracle h = gaussian_oracle(random_spd(rng, n));
    for (const auto& o : all_output_sets(n)) {
      const double d = degeneracy_output(h, o);
      CHECK(d >= 0.0);
      CHECK(complexity_output(h, o) >= d - 1e-12);
    }
  }
}

TEST_CASE("MI values do not depend on eps") {
  std::mt19937_64 rng(15);
  const MatrixXd S = random_spd(rng, 5);
  const IndexSet a{0}, b{1, 3}, o{4};
  const double ref = multivariate_mi(gaussian_oracle(S, 1.0), a, b, o);
  const double ref_mi = mutual_information(gaussian_oracle(S, 1.0), a, b);
  for (double eps : {0.01, 0.1}) {
    CHECK(std::abs(multivariate_mi(gaussian_oracle(S, eps), a, b, o) - ref) <= 1e-12);
    CHECK(std::abs(mutual_information(gaussian_oracle(S, eps), a, b) - ref_mi) <= 1e-12);
  }
}

TEST_CASE("measures are equivariant under coordinate permutations") {
  std::mt19937_64 rng(16);
  const Index n = 5;
  const MatrixXd S = random_spd(rng, n);
  std::vector<Index> perm{3, 0, 4, 1, 2};
  Eigen::PermutationMatrix<Eigen::Dynamic> P(n);
  for (Index i = 0; i < n; ++i) P.indices()[i] = static_cast<int>(perm[static_cast<std::size_t>(i)]);
  // Coordinate i of S moves to perm[i].
  const MatrixXd Sp = P * S * P.transpose();
  auto map = [&](const IndexSet& s) {
    std::vector<Index> out;
    for (Index i : s) out.push_back(perm[static_cast<std::size_t>(i)]);
    return IndexSet(out);
  };
  const EntropyOracle h = gaussian_oracle(S), hp = gaussian_oracle(Sp);
  for (const auto& o : all_output_sets(n)) {
    CHECK(std::abs(degeneracy_output(h, o) - degeneracy_output(hp, map(o))) <= 1e-10);
    CHECK(std::abs(complexity_output(h, o) - complexity_output(hp, map(o))) <= 1e-10);
  }
  CHECK(std::abs(multivariate_mi(h, IndexSet{0}, IndexSet{1}, IndexSet{2, 3}) -
                 multivariate_mi(hp, map(IndexSet{0}), map(IndexSet{1}), map(IndexSet{2, 3}))) <= 1e-10);
}

TEST_CASE("ALL above the exhaustive limit falls back to singletons") {
  const Index n = 13;
  const DecompositionMeasures m = eps_sigma_measures(gaussian_oracle(MatrixXd::Identity(n, n)), std::nullopt);
  CHECK(m.truncated);
  CHECK(m.outputs.size() == static_cast<std::size_t>(n));
}

TEST_CASE("enumeration cap") {
  const EntropyOracle h = gaussian_oracle(MatrixXd::Identity(6, 6));
  EnumerationOptions opt;
  opt.max_inputs = 3;
  CHECK_THROWS_AS(degeneracy_output(h, IndexSet{0}, opt), EnumerationCapError);
  CHECK_NOTHROW(degeneracy_output(h, IndexSet{0, 1, 2}, opt));
  CHECK_THROWS_AS(degeneracy_output(h, IndexSet{0, 1, 2, 3, 4, 5}), InvalidArgument);
}

TEST_CASE("entropy oracle conventions") {
  int calls = 0;
  const EntropyOracle h(
      3,
      [&](const IndexSet& s) {
        ++calls;
        return static_cast<double>(s.size());
      },
      EntropyProvenance::Empirical);
  CHECK(h(IndexSet{}) == 0.0);
  CHECK(h(IndexSet{0, 2}) == 2.0);
  CHECK(h(IndexSet{0, 2}) == 2.0);
  CHECK(calls == 1);
  CHECK(to_string(h.provenance()) == "empirical");
}
