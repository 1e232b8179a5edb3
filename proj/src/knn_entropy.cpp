#include "netmeasure/knn_entropy.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>

namespace netmeasure {

KdTree::KdTree(MatrixXd points, Index leaf_size) : points_(std::move(points)), leaf_size_(std::max<Index>(1, leaf_size)) {
  order_.resize(static_cast<std::size_t>(points_.cols()));
  std::iota(order_.begin(), order_.end(), Index{0});
  if (points_.cols() > 0) build(0, points_.cols());
}

Index KdTree::build(Index begin, Index end) {
  const Index id = static_cast<Index>(nodes_.size());
  nodes_.push_back({begin, end});
  VectorXd lo = VectorXd::Constant(dimension(), std::numeric_limits<double>::infinity());
  VectorXd hi = -lo;
  for (Index i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_.col(order_[static_cast<std::size_t>(i)]));
    hi = hi.cwiseMax(points_.col(order_[static_cast<std::size_t>(i)]));
  }
  if (end - begin > leaf_size_) {
    Index axis = 0;
    (hi - lo).maxCoeff(&axis);
    const Index mid = begin + (end - begin) / 2;
    auto first = order_.begin() + begin;
    std::nth_element(first, order_.begin() + mid, order_.begin() + end,
                     [&](Index a, Index b) { return points_(axis, a) < points_(axis, b); });
    nodes_[static_cast<std::size_t>(id)].axis = static_cast<int>(axis);
    nodes_[static_cast<std::size_t>(id)].split = points_(axis, order_[static_cast<std::size_t>(mid)]);
    const Index left = build(begin, mid);
    const Index right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
  }
  nodes_[static_cast<std::size_t>(id)].lo = std::move(lo);
  nodes_[static_cast<std::size_t>(id)].hi = std::move(hi);
  return id;
}

// `best` holds the k smallest squared distances seen so far, ascending.
void KdTree::search(Index node_id, Index self, const Eigen::Ref<const VectorXd>& q, std::vector<double>& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  double box = 0.0;
  for (Index d = 0; d < dimension(); ++d) {
    const double gap = std::max({node.lo[d] - q[d], 0.0, q[d] - node.hi[d]});
    box += gap * gap;
  }
  if (box >= best.back()) return;
  if (node.left < 0) {
    for (Index i = node.begin; i < node.end; ++i) {
      const Index p = order_[static_cast<std::size_t>(i)];
      if (p == self) continue;
      const double d2 = (points_.col(p) - q).squaredNorm();
      if (d2 < best.back()) {
        auto pos = std::upper_bound(best.begin(), best.end(), d2);
        best.insert(pos, d2);
        best.pop_back();
      }
    }
    return;
  }
  const bool go_left = q[node.axis] < node.split;
  search(go_left ? node.left : node.right, self, q, best);
  search(go_left ? node.right : node.left, self, q, best);
}

VectorXd KdTree::kth_neighbor_distances(int k) const {
  if (k < 1 || k >= size()) throw InvalidArgument("k-th neighbor needs 1 <= k < N");
  VectorXd out(size());
  std::vector<double> best;
  for (Index i = 0; i < size(); ++i) {
    best.assign(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
    search(0, i, points_.col(i), best);
    out[i] = std::sqrt(best.back());
  }
  return out;
}

namespace {

double log_unit_ball_volume(Index d) {
  const double half = 0.5 * static_cast<double>(d);
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double kl_estimate(const MatrixXd& margin_t, int k, Index& coincident) {
  const Index n = margin_t.cols();
  const Index d = margin_t.rows();
  const VectorXd r = KdTree(margin_t).kth_neighbor_distances(k);
  coincident = (r.array() <= 0.0).count();
  if (coincident > 0) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> logs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) logs[static_cast<std::size_t>(i)] = std::log(r[i]);
  const double mean_log = pairwise_sum(logs.data(), logs.size()) / static_cast<double>(n);
  return boost::math::digamma(static_cast<double>(n)) - boost::math::digamma(static_cast<double>(k)) +
         log_unit_ball_volume(d) + static_cast<double>(d) * mean_log;
}

}  // namespace

KnnEntropyResult knn_entropy_detailed(const MatrixXd& points, const IndexSet& idx, const KnnOptions& options) {
  if (idx.empty()) throw InvalidArgument("knn_entropy needs a nonempty index set");
  if (idx.max_index() >= points.cols()) throw InvalidArgument("index set " + idx.to_string() + " out of range");
  const Index n = points.rows();
  if (options.k < 1 || n <= options.k)
    throw InvalidArgument("knn_entropy needs N > k >= 1 (N = " + std::to_string(n) + ", k = " +
                          std::to_string(options.k) + ")");
  if (!points.allFinite()) throw InvalidArgument("knn_entropy: samples contain non-finite values");

  MatrixXd margin = points(Eigen::all, idx.indices()).transpose();  // d x N
  double log_jacobian = 0.0;
  if (options.whiten && n > margin.rows()) {
    const VectorXd mean = margin.rowwise().mean();
    margin.colwise() -= mean;
    const MatrixXd cov = margin * margin.transpose() / static_cast<double>(n - 1);
    Eigen::LLT<MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all()) {
      margin = llt.matrixL().solve(margin);
      log_jacobian = llt.matrixLLT().diagonal().array().log().sum();
    }
  }

  KnnEntropyResult out;
  out.value = kl_estimate(margin, options.k, out.coincident);
  if (out.coincident > 0) {
    out.jittered = true;
    std::mt19937_64 rng(options.jitter_seed);
    std::normal_distribution<double> normal;
    const VectorXd scale = margin.cwiseAbs().rowwise().maxCoeff().cwiseMax(1.0);
    for (Index c = 0; c < margin.cols(); ++c)
      for (Index r = 0; r < margin.rows(); ++r) margin(r, c) += options.jitter * scale[r] * normal(rng);
    Index remaining = 0;
    out.value = kl_estimate(margin, options.k, remaining);
    if (remaining > 0)
      throw InvalidArgument("knn_entropy: " + std::to_string(remaining) + " points remain coincident after jitter");
  }
  out.value += log_jacobian;
  return out;
}

double knn_entropy(const SampleEnsemble& ens, const IndexSet& idx, int k) {
  KnnOptions options;
  options.k = k;
  return knn_entropy(ens, idx, options);
}

double knn_entropy(const SampleEnsemble& ens, const IndexSet& idx, const KnnOptions& options) {
  return knn_entropy_detailed(ens.points, idx, options).value;
}

EntropyOracle empirical_oracle(const SampleEnsemble& ens, int k) {
  KnnOptions options;
  options.k = k;
  return empirical_oracle(ens, options);
}

EntropyOracle empirical_oracle(const SampleEnsemble& ens, const KnnOptions& options) {
  if (ens.size() <= options.k) throw InvalidArgument("empirical_oracle: ensemble too small for k");
  auto points = std::make_shared<const MatrixXd>(ens.points);
  return EntropyOracle(
      ens.dimension(), [points, options](const IndexSet& idx) { return knn_entropy_detailed(*points, idx, options).value; },
      EntropyProvenance::Empirical);
}

}  // namespace netmeasure
