#pragma once

#include <cstddef>
#include <vector>

namespace superstar {

/// Complete binary tree of partial sums over a fixed number of
/// non-negative weights. Every internal node is recomputed from its two
/// children on update, so an all-zero subtree sums to exactly zero and
/// find() never lands on a zero-weight slot.
template <class T>
class SumTree {
 public:
  SumTree() = default;
  explicit SumTree(std::size_t slots) { reset(slots); }

  void reset(std::size_t slots) {
    slots_ = slots;
    base_ = 1;
    while (base_ < slots) base_ <<= 1;
    nodes_.assign(2 * base_, T{});
  }

  std::size_t size() const noexcept { return slots_; }
  const T& total() const noexcept { return nodes_[1]; }
  const T& weight(std::size_t slot) const noexcept { return nodes_[base_ + slot]; }

  void set(std::size_t slot, const T& w) {
    std::size_t node = base_ + slot;
    nodes_[node] = w;
    for (node >>= 1; node > 0; node >>= 1) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
  }

  /// Bulk load followed by one bottom-up pass.
  template <class Range>
  void assign(const Range& weights) {
    std::size_t i = 0;
    for (const auto& w : weights) nodes_[base_ + i++] = w;
    for (std::size_t node = base_ - 1; node > 0; --node) {
      nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
    }
  }

  /// Slot whose cumulative interval contains `u`, for 0 <= u < total().
  /// Requires total() > 0.
  std::size_t find(T u) const {
    std::size_t node = 1;
    while (node < base_) {
      const std::size_t left = 2 * node;
      if (u < nodes_[left] || nodes_[left + 1] == T{}) {
        node = left;
      } else {
        u -= nodes_[left];
        node = left + 1;
      }
    }
    return node - base_;
  }

 private:
  std::size_t slots_ = 0;
  std::size_t base_ = 1;
  std::vector<T> nodes_ = std::vector<T>(2);
};

}  // namespace superstar
