#pragma once

// Indexed partial-sum tree over bond slots: O(log) rate update and
// proportional sampling. Parents are recomputed from children on every
// update, so the root is always a freshly rounded sum of the current leaves.

#include <cstddef>
#include <vector>

namespace fluctlab {

class EventTree {
 public:
  explicit EventTree(std::size_t leaf_count) {
    leaves_ = 1;
    while (leaves_ < leaf_count) leaves_ <<= 1;
    tree_.assign(2 * leaves_, 0.0);
    count_ = leaf_count;
  }

  std::size_t leaf_count() const { return count_; }

  double get(std::size_t i) const { return tree_[leaves_ + i]; }

  void set(std::size_t i, double v) {
    std::size_t node = leaves_ + i;
    tree_[node] = v;
    for (node >>= 1; node >= 1; node >>= 1)
      tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
  }

  void assign(const std::vector<double>& values) {
    for (std::size_t i = 0; i < leaves_; ++i)
      tree_[leaves_ + i] = (i < values.size()) ? values[i] : 0.0;
    for (std::size_t node = leaves_ - 1; node >= 1; --node)
      tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
  }

  double total() const { return tree_[1]; }

  // Leaf index with cumulative weight bracketing u in [0, total).
  std::size_t sample(double u) const {
    std::size_t node = 1;
    while (node < leaves_) {
      const double left = tree_[2 * node];
      if (u < left) {
        node = 2 * node;
      } else {
        u -= left;
        node = 2 * node + 1;
      }
    }
    std::size_t leaf = node - leaves_;
    // guard the zero-rate edge reachable by floating roundoff at boundaries
    while (tree_[leaves_ + leaf] <= 0.0 && leaf > 0) --leaf;
    while (tree_[leaves_ + leaf] <= 0.0 && leaf + 1 < count_) ++leaf;
    return leaf;
  }

 private:
  std::size_t leaves_ = 1;
  std::size_t count_ = 0;
  std::vector<double> tree_;
};

}  // namespace fluctlab
