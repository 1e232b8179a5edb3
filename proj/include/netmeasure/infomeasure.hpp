#pragma once

#include "netmeasure/index_set.hpp"
#include "netmeasure/stationary.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace netmeasure {

enum class EntropyProvenance { Gaussian, Empirical, Quadrature };

std::string to_string(EntropyProvenance p);

/// Projected differential entropy idx -> H(idx) in nats.
///
/// H of the empty set is 0 regardless of the wrapped function. Values are
/// memoized per index set; lookups are safe from concurrent callers.
class EntropyOracle {
 public:
  using Function = std::function<double(const IndexSet&)>;

  EntropyOracle(Index dimension, Function h, EntropyProvenance provenance);

  double operator()(const IndexSet& idx) const;
  Index dimension() const noexcept { return dimension_; }
  EntropyProvenance provenance() const noexcept { return provenance_; }

 private:
  struct Cache;
  Index dimension_;
  Function h_;
  EntropyProvenance provenance_;
  std::shared_ptr<Cache> cache_;
};

/// 1/2 log((2 pi e)^k |eps^2 S(idx)|)
double gaussian_entropy(const MatrixXd& S, const IndexSet& idx, double eps);

/// Oracle for the Gaussian with covariance eps^2 S.
EntropyOracle gaussian_oracle(const MatrixXd& S, double eps = 1.0);

/// H(a) + H(b) - H(a u b); `a` and `b` must be disjoint.
double mutual_information(const EntropyOracle& h, const IndexSet& a, const IndexSet& b);

/// MI(ik; o) + MI(ikc; o) - MI(ik u ikc; o) for pairwise disjoint sets.
double multivariate_mi(const EntropyOracle& h, const IndexSet& ik, const IndexSet& ikc, const IndexSet& o);

/// The seven-determinant closed form of the Gaussian-limit multivariate MI.
/// Independent of the entropy route; used to cross-check it.
double gaussian_multivariate_mi(const MatrixXd& S, const IndexSet& i1, const IndexSet& i2, const IndexSet& o);

struct EnumerationOptions {
  /// Largest input set |I| whose 2^|I| subsets are enumerated.
  Index max_inputs = 20;
};

/// Degeneracy D(O): sum over every Ik subset of I = complement(O) of
/// max{MI(Ik; I\Ik; O), 0} / (2 C(|I|, k)).
double degeneracy_output(const EntropyOracle& h, const IndexSet& output, const EnumerationOptions& options = {});

/// Complexity C(O): same weights applied to MI(Ik; I\Ik), without clipping.
double complexity_output(const EntropyOracle& h, const IndexSet& output, const EnumerationOptions& options = {});

struct Interaction {
  IndexSet ik;
  IndexSet ikc;
  double multivariate_mi = 0.0;  ///< MI(Ik; Ikc; O)
  double pair_mi = 0.0;          ///< MI(Ik; Ikc)
};

struct OutputMeasures {
  IndexSet output;
  double degeneracy = 0.0;
  double complexity = 0.0;
  /// One entry per unordered {Ik, Ikc} split with both sides nonempty.
  std::vector<Interaction> interactions;
};

struct DecompositionMeasures {
  std::vector<OutputMeasures> outputs;
  double degeneracy = 0.0;  ///< max over outputs of D(O)
  double complexity = 0.0;  ///< max over outputs of C(O)
  IndexSet degeneracy_argmax;
  IndexSet complexity_argmax;
  /// ALL was requested but the dimension exceeded the exhaustive limit, so
  /// only singleton output sets were evaluated.
  bool truncated = false;
  EntropyProvenance provenance = EntropyProvenance::Gaussian;
};

struct MeasureOptions {
  EnumerationOptions enumeration;
  /// ALL enumerates every proper nonempty O up to this dimension.
  Index exhaustive_limit = 12;
  bool keep_interactions = true;
};

/// Every proper nonempty subset of {0..n-1}, ordered by size then mask.
std::vector<IndexSet> all_output_sets(Index n);

/// D(O), C(O) for the requested outputs (nullopt = ALL) and their maxima.
DecompositionMeasures eps_sigma_measures(const EntropyOracle& h, const std::optional<std::vector<IndexSet>>& outputs,
                                         const MeasureOptions& options = {});

/// Gaussian-limit measures of a stationary shape; independent of eps.
DecompositionMeasures eps_sigma_measures(const StationaryShape& shape,
                                         const std::optional<std::vector<IndexSet>>& outputs,
                                         const MeasureOptions& options = {});

}  // namespace netmeasure
