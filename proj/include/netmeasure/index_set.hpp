#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace netmeasure {

/// Sorted, duplicate-free set of coordinate indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<Eigen::Index> idx) : IndexSet(std::vector<Eigen::Index>(idx)) {}
  explicit IndexSet(std::vector<Eigen::Index> idx) : idx_(std::move(idx)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  }

  static IndexSet from_mask(std::uint64_t mask) {
    IndexSet out;
    for (Eigen::Index i = 0; mask; ++i, mask >>= 1)
      if (mask & 1u) out.idx_.push_back(i);
    return out;
  }

  /// {0, ..., n-1}
  static IndexSet range(Eigen::Index n) {
    IndexSet out;
    for (Eigen::Index i = 0; i < n; ++i) out.idx_.push_back(i);
    return out;
  }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (auto i : idx_) m |= std::uint64_t{1} << i;
    return m;
  }

  bool empty() const noexcept { return idx_.empty(); }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(idx_.size()); }
  Eigen::Index operator[](Eigen::Index i) const { return idx_[static_cast<std::size_t>(i)]; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }
  const std::vector<Eigen::Index>& indices() const noexcept { return idx_; }
  Eigen::Index max_index() const { return idx_.empty() ? -1 : idx_.back(); }

  bool contains(Eigen::Index i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

  bool operator==(const IndexSet&) const = default;
  auto operator<=>(const IndexSet&) const = default;

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < idx_.size(); ++i) s += (i ? "," : "") + std::to_string(idx_[i]);
    return s + "}";
  }

 private:
  std::vector<Eigen::Index> idx_;
};

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  std::vector<Eigen::Index> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  std::vector<Eigen::Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

inline bool disjoint(const IndexSet& a, const IndexSet& b) {
  std::vector<Eigen::Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.empty();
}

/// Complement of `a` in {0, ..., n-1}.
inline IndexSet complement(const IndexSet& a, Eigen::Index n) { return set_difference(IndexSet::range(n), a); }

}  // namespace netmeasure
