#pragma once

#include "netmeasure/infomeasure.hpp"
#include "netmeasure/sampling.hpp"

#include <cstdint>
#include <vector>

namespace netmeasure {

/// Static kd-tree over the columns of a d x N matrix, Euclidean metric.
class KdTree {
 public:
  explicit KdTree(MatrixXd points, Index leaf_size = 16);

  Index size() const noexcept { return points_.cols(); }
  Index dimension() const noexcept { return points_.rows(); }

  /// Distance from every stored point to its k-th nearest other point.
  VectorXd kth_neighbor_distances(int k) const;

 private:
  struct Node {
    Index begin, end;   // range into order_
    Index left = -1, right = -1;
    int axis = -1;
    double split = 0.0;
    VectorXd lo{}, hi{};  // bounding box
  };
  Index build(Index begin, Index end);
  void search(Index node, Index self, const Eigen::Ref<const VectorXd>& q, std::vector<double>& best) const;

  MatrixXd points_;
  Index leaf_size_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
};

struct KnnOptions {
  int k = 4;
  /// Whiten the margin with its sample covariance before the neighbor search
  /// and add back the log-Jacobian. Exact for the entropy, and it removes most
  /// of the anisotropy bias of the raw estimator on correlated margins.
  bool whiten = true;
  /// Relative jitter applied when coincident points are detected.
  double jitter = 1e-12;
  std::uint64_t jitter_seed = 0x6a09e667f3bcc909ULL;
};

struct KnnEntropyResult {
  double value = 0.0;   ///< nats
  bool jittered = false;
  Index coincident = 0;  ///< points whose k-th neighbor was at distance 0
};

/// Kozachenko-Leonenko estimate of the differential entropy of the idx-margin
/// of `points` (N x n):
///   psi(N) - psi(k) + log V_d + (d / N) sum_i log r_i
/// with r_i the distance to the k-th nearest neighbor and V_d the unit-ball
/// volume.
KnnEntropyResult knn_entropy_detailed(const MatrixXd& points, const IndexSet& idx, const KnnOptions& options = {});

double knn_entropy(const SampleEnsemble& ens, const IndexSet& idx, int k = 4);
double knn_entropy(const SampleEnsemble& ens, const IndexSet& idx, const KnnOptions& options);

/// Memoizing k-NN entropy oracle over the ensemble's coordinates.
EntropyOracle empirical_oracle(const SampleEnsemble& ens, int k = 4);
EntropyOracle empirical_oracle(const SampleEnsemble& ens, const KnnOptions& options);

}  // namespace netmeasure
