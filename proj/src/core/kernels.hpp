#pragma once

// Low-level set kernels on flat row storage.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/padic.hpp"

namespace dlab::kernels {

/// Inclusive integer box, one [lo, hi] per coordinate.
struct Box {
  std::vector<i64> lo;
  std::vector<i64> hi;

  bool contains(std::span<const i64> row) const;
  /// Number of lattice points, saturating at 2^62.
  i64 volume() const;
};

Box bounding_box(std::span<const i64> flat, int width);

/// Collects rows, compacting (sort + dedupe) as the buffer grows. Throws
/// BudgetExceeded once the number of distinct rows exceeds `budget`.
class RowAccumulator {
 public:
  RowAccumulator(int width, std::size_t budget);
  void push(std::span<const i64> row) {
    buf_.insert(buf_.end(), row.begin(), row.end());
    if (buf_.size() >= limit_) compact();
  }
  std::vector<i64> finish();

 private:
  void compact();

  int width_;
  std::size_t budget_;
  std::size_t limit_;
  std::vector<i64> buf_;
};

/// Whether the bitmap kernel applies: estimated bitmap size for `box`
/// stays under the memory cap.
bool dense_feasible(const Box& box);

/// Sorted distinct rows of {a + sign * b} ∩ box for integer rows of width d.
/// Rows are bitmaps along the last coordinate; each (a, row of b) pair is a
/// shifted word-wise OR into the target row.
std::vector<i64> dense_sum(std::span<const i64> a, std::span<const i64> b, int d, int sign,
                           const Box& box, std::size_t budget);

}  // namespace dlab::kernels
