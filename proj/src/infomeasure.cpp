#include "netmeasure/infomeasure.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace netmeasure {

std::string to_string(EntropyProvenance p) {
  switch (p) {
    case EntropyProvenance::Gaussian: return "gaussian";
    case EntropyProvenance::Empirical: return "empirical";
    case EntropyProvenance::Quadrature: return "quadrature";
  }
  return "unknown";
}

struct EntropyOracle::Cache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, double> values;
};

EntropyOracle::EntropyOracle(Index dimension, Function h, EntropyProvenance provenance)
    : dimension_(dimension), h_(std::move(h)), provenance_(provenance), cache_(std::make_shared<Cache>()) {
  if (dimension < 1 || dimension > 63) throw InvalidArgument("entropy oracle dimension must be in 1..63");
}

double EntropyOracle::operator()(const IndexSet& idx) const {
  if (idx.empty()) return 0.0;
  if (idx.max_index() >= dimension_) throw InvalidArgument("index set " + idx.to_string() + " out of range");
  const std::uint64_t key = idx.mask();
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  const double value = h_(idx);
  std::lock_guard lock(cache_->mutex);
  cache_->values.emplace(key, value);
  return value;
}

double gaussian_entropy(const MatrixXd& S, const IndexSet& idx, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("gaussian_entropy: eps must be positive");
  if (idx.empty()) return 0.0;
  const double k = static_cast<double>(idx.size());
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  return 0.5 * (k * std::log(two_pi_e) + 2.0 * k * std::log(eps) + principal_logdet(S, idx));
}

EntropyOracle gaussian_oracle(const MatrixXd& S, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("gaussian_oracle: eps must be positive");
  return EntropyOracle(
      S.rows(), [S, eps](const IndexSet& idx) { return gaussian_entropy(S, idx, eps); }, EntropyProvenance::Gaussian);
}

double mutual_information(const EntropyOracle& h, const IndexSet& a, const IndexSet& b) {
  if (!disjoint(a, b)) throw InvalidArgument("mutual_information: index sets " + a.to_string() + " and " +
                                             b.to_string() + " overlap");
  if (a.empty() || b.empty()) return 0.0;
  return h(a) + h(b) - h(set_union(a, b));
}

double multivariate_mi(const EntropyOracle& h, const IndexSet& ik, const IndexSet& ikc, const IndexSet& o) {
  if (!disjoint(ik, ikc) || !disjoint(ik, o) || !disjoint(ikc, o))
    throw InvalidArgument("multivariate_mi: index sets must be pairwise disjoint");
  return mutual_information(h, ik, o) + mutual_information(h, ikc, o) - mutual_information(h, set_union(ik, ikc), o);
}

double gaussian_multivariate_mi(const MatrixXd& S, const IndexSet& i1, const IndexSet& i2, const IndexSet& o) {
  if (!disjoint(i1, i2) || !disjoint(i1, o) || !disjoint(i2, o))
    throw InvalidArgument("gaussian_multivariate_mi: index sets must be pairwise disjoint");
  auto ld = [&](const IndexSet& s) { return principal_logdet(S, s); };
  const double numerator = ld(i1) + ld(i2) + ld(o) + ld(set_union(set_union(i1, i2), o));
  const double denominator = ld(set_union(i1, i2)) + ld(set_union(i1, o)) + ld(set_union(i2, o));
  return 0.5 * (numerator - denominator);
}

namespace {

struct OutputSums {
  double degeneracy = 0.0;
  double complexity = 0.0;
  std::vector<Interaction> interactions;
};

IndexSet subset_of(const IndexSet& base, std::uint64_t local_mask) {
  std::vector<Index> out;
  for (Index i = 0; i < base.size(); ++i)
    if (local_mask & (std::uint64_t{1} << i)) out.push_back(base[i]);
  return IndexSet(std::move(out));
}

OutputSums enumerate_output(const EntropyOracle& h, const IndexSet& output, const EnumerationOptions& options,
                            bool keep_interactions) {
  const Index n = h.dimension();
  if (output.empty() || output.size() >= n || output.max_index() >= n)
    throw InvalidArgument("output set " + output.to_string() + " must be a proper nonempty subset of the coordinates");
  const IndexSet inputs = complement(output, n);
  const Index m = inputs.size();
  if (m > options.max_inputs)
    throw EnumerationCapError("input set has " + std::to_string(m) + " coordinates, above the enumeration cap of " +
                              std::to_string(options.max_inputs) + "; restrict the output set");

  OutputSums sums;
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    const int k = std::popcount(mask);
    const double weight = 1.0 / (2.0 * boost::math::binomial_coefficient<double>(static_cast<unsigned>(m), k));
    const IndexSet ik = subset_of(inputs, mask);
    const IndexSet ikc = subset_of(inputs, full & ~mask);
    const double mmi = multivariate_mi(h, ik, ikc, output);
    const double pair = mutual_information(h, ik, ikc);
    sums.degeneracy += weight * std::max(mmi, 0.0);
    sums.complexity += weight * pair;
    if (keep_interactions && mask != 0 && mask != full && mask < (full & ~mask))
      sums.interactions.push_back({ik, ikc, mmi, pair});
  }
  return sums;
}

}  // namespace

double degeneracy_output(const EntropyOracle& h, const IndexSet& output, const EnumerationOptions& options) {
  return enumerate_output(h, output, options, false).degeneracy;
}

double complexity_output(const EntropyOracle& h, const IndexSet& output, const EnumerationOptions& options) {
  return enumerate_output(h, output, options, false).complexity;
}

std::vector<IndexSet> all_output_sets(Index n) {
  std::vector<IndexSet> out;
  if (n < 2) return out;
  if (n > 30) throw EnumerationCapError("cannot enumerate all output sets for n = " + std::to_string(n));
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (int size = 1; size < n; ++size)
    for (std::uint64_t mask = 1; mask < full; ++mask)
      if (std::popcount(mask) == size) out.push_back(IndexSet::from_mask(mask));
  return out;
}

DecompositionMeasures eps_sigma_measures(const EntropyOracle& h, const std::optional<std::vector<IndexSet>>& outputs,
                                         const MeasureOptions& options) {
  DecompositionMeasures result;
  result.provenance = h.provenance();
  const Index n = h.dimension();
  std::vector<IndexSet> sets;
  if (outputs) {
    sets = *outputs;
  } else if (n <= options.exhaustive_limit) {
    sets = all_output_sets(n);
  } else {
    result.truncated = true;
    for (Index i = 0; i < n; ++i) sets.push_back(IndexSet{i});
  }
  if (sets.empty()) throw InvalidArgument("no output sets to evaluate");

  bool first = true;
  for (const auto& o : sets) {
    OutputSums sums = enumerate_output(h, o, options.enumeration, options.keep_interactions);
    if (first || sums.degeneracy > result.degeneracy) {
      result.degeneracy = sums.degeneracy;
      result.degeneracy_argmax = o;
    }
    if (first || sums.complexity > result.complexity) {
      result.complexity = sums.complexity;
      result.complexity_argmax = o;
    }
    first = false;
    result.outputs.push_back({o, sums.degeneracy, sums.complexity, std::move(sums.interactions)});
  }
  return result;
}

DecompositionMeasures eps_sigma_measures(const StationaryShape& shape,
                                         const std::optional<std::vector<IndexSet>>& outputs,
                                         const MeasureOptions& options) {
  return eps_sigma_measures(gaussian_oracle(shape.S, 1.0), outputs, options);
}

}  // namespace netmeasure
