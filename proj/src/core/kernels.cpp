#include "core/kernels.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <unordered_map>

#include "core/dset.hpp"
#include "core/error.hpp"

namespace dlab::kernels {

namespace {

constexpr i64 kVolumeCap = i64{1} << 62;
// Bitmap cap: 2^31 bits (256 MiB) of target rows.
constexpr i64 kDenseBitCap = i64{1} << 31;
// Prefix tables larger than this go to a hash map.
constexpr i64 kDensePrefixCap = i64{1} << 22;

struct RowGroup {
  std::vector<i64> prefix;
  i64 first = 0;  // last-coordinate value of bit 0
  std::vector<std::uint64_t> bits;
  i64 nbits = 0;
};

std::vector<RowGroup> group_rows(const std::vector<i64>& sorted, int d) {
  std::vector<RowGroup> groups;
  const std::size_t n = sorted.size() / d;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    auto same_prefix = [&](std::size_t x, std::size_t y) {
      return std::equal(sorted.begin() + x * d, sorted.begin() + x * d + d - 1,
                        sorted.begin() + y * d);
    };
    while (j < n && same_prefix(i, j)) ++j;
    RowGroup g;
    g.prefix.assign(sorted.begin() + i * d, sorted.begin() + i * d + d - 1);
    g.first = sorted[i * d + d - 1];
    g.nbits = sorted[(j - 1) * d + d - 1] - g.first + 1;
    g.bits.assign((g.nbits + 63) / 64, 0);
    for (std::size_t t = i; t < j; ++t) {
      const i64 off = sorted[t * d + d - 1] - g.first;
      g.bits[off >> 6] |= std::uint64_t{1} << (off & 63);
    }
    groups.push_back(std::move(g));
    i = j;
  }
  return groups;
}

// target |= src << shift, clipped to [0, target bits).
void or_shifted(std::uint64_t* target, i64 target_words, const std::vector<std::uint64_t>& src,
                i64 shift) {
  const i64 word_shift = shift >= 0 ? shift / 64 : -((-shift + 63) / 64);
  const int bit_shift = static_cast<int>(shift - word_shift * 64);
  const i64 n = static_cast<i64>(src.size());
  const i64 begin = std::max<i64>(0, -word_shift - 1);
  const i64 end = std::min<i64>(n, target_words - word_shift);
  for (i64 i = begin; i < end; ++i) {
    const std::uint64_t w = src[i];
    if (w == 0) continue;
    const i64 q = i + word_shift;
    if (bit_shift == 0) {
      if (q >= 0) target[q] |= w;
      continue;
    }
    if (q >= 0) target[q] |= w << bit_shift;
    if (q + 1 >= 0 && q + 1 < target_words) target[q + 1] |= w >> (64 - bit_shift);
  }
}

}  // namespace

bool Box::contains(std::span<const i64> row) const {
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (row[j] < lo[j] || row[j] > hi[j]) return false;
  }
  return true;
}

i64 Box::volume() const {
  i128 v = 1;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (hi[j] < lo[j]) return 0;
    v *= static_cast<i128>(hi[j] - lo[j] + 1);
    if (v > kVolumeCap) return kVolumeCap;
  }
  return static_cast<i64>(v);
}

Box bounding_box(std::span<const i64> flat, int width) {
  Box box;
  box.lo.assign(width, std::numeric_limits<i64>::max());
  box.hi.assign(width, std::numeric_limits<i64>::min());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const int j = static_cast<int>(i % width);
    box.lo[j] = std::min(box.lo[j], flat[i]);
    box.hi[j] = std::max(box.hi[j], flat[i]);
  }
  return box;
}

RowAccumulator::RowAccumulator(int width, std::size_t budget)
    : width_(width), budget_(budget) {
  limit_ = std::max<std::size_t>(std::size_t{1} << 22, 2 * budget_ * width_ / 4) * width_;
}

void RowAccumulator::compact() {
  sort_unique_rows(buf_, width_);
  if (buf_.size() / width_ > budget_) {
    fail(Errc::BudgetExceeded, "set operation exceeded the point budget (" +
                                   std::to_string(buf_.size() / width_) + " > " +
                                   std::to_string(budget_) + " points)");
  }
  limit_ = std::max(limit_, 2 * buf_.size());
}

std::vector<i64> RowAccumulator::finish() {
  compact();
  return std::move(buf_);
}

bool dense_feasible(const Box& box) {
  const int d = static_cast<int>(box.lo.size());
  if (d == 0) return false;
  const i64 vol = box.volume();
  if (vol >= kVolumeCap) return false;
  const i64 width = box.hi[d - 1] - box.lo[d - 1] + 1;
  const i64 words = (width + 63) / 64;
  const i64 rows = vol / width;
  return static_cast<i128>(rows) * words * 64 <= kDenseBitCap;
}

std::vector<i64> dense_sum(std::span<const i64> a, std::span<const i64> b, int d, int sign,
                           const Box& box, std::size_t budget) {
  std::vector<i64> bs(b.begin(), b.end());
  if (sign < 0) {
    for (auto& c : bs) c = -c;
    sort_unique_rows(bs, d);
  }
  const auto groups = group_rows(bs, d);

  // Mixed-radix index of the target prefix within the box.
  std::vector<i64> extent(d);
  for (int j = 0; j < d; ++j) extent[j] = box.hi[j] - box.lo[j] + 1;
  if (extent[d - 1] <= 0) return {};
  i64 prefix_count = 1;
  for (int j = 0; j + 1 < d; ++j) {
    if (extent[j] <= 0) return {};
    prefix_count *= extent[j];
  }
  const i64 words = (extent[d - 1] + 63) / 64;
  const bool dense_table = prefix_count <= kDensePrefixCap;
  std::vector<std::uint64_t> table;
  std::unordered_map<i64, std::vector<std::uint64_t>> sparse;
  if (dense_table) table.assign(static_cast<std::size_t>(prefix_count * words), 0);

  const std::size_t na = a.size() / d;
  std::vector<i64> target_prefix(d > 1 ? d - 1 : 0);
  for (std::size_t i = 0; i < na; ++i) {
    const i64* pa = a.data() + i * d;
    // Groups are sorted by prefix, so the first coordinate bounds a range.
    auto gbegin = groups.begin(), gend = groups.end();
    if (d > 1) {
      gbegin = std::partition_point(groups.begin(), groups.end(), [&](const RowGroup& g) {
        return pa[0] + g.prefix[0] < box.lo[0];
      });
      gend = std::partition_point(gbegin, groups.end(), [&](const RowGroup& g) {
        return pa[0] + g.prefix[0] <= box.hi[0];
      });
    }
    for (auto g = gbegin; g != gend; ++g) {
      i64 key = 0;
      bool inside = true;
      for (int j = 0; j + 1 < d; ++j) {
        const i64 c = pa[j] + g->prefix[j];
        if (c < box.lo[j] || c > box.hi[j]) {
          inside = false;
          break;
        }
        key = key * extent[j] + (c - box.lo[j]);
      }
      if (!inside) continue;
      const i64 shift = pa[d - 1] + g->first - box.lo[d - 1];
      if (shift >= extent[d - 1] || shift + g->nbits <= 0) continue;
      std::uint64_t* row;
      if (dense_table) {
        row = table.data() + key * words;
      } else {
        auto& v = sparse[key];
        if (v.empty()) v.assign(words, 0);
        row = v.data();
      }
      or_shifted(row, words, g->bits, shift);
    }
  }

  std::vector<i64> out;
  std::vector<i64> prefix(d);
  auto emit_row = [&](i64 key, const std::uint64_t* row) {
    i64 rest = key;
    for (int j = d - 2; j >= 0; --j) {
      prefix[j] = box.lo[j] + rest % extent[j];
      rest /= extent[j];
    }
    for (i64 w = 0; w < words; ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        const int t = std::countr_zero(bits);
        bits &= bits - 1;
        const i64 off = w * 64 + t;
        if (off >= extent[d - 1]) break;
        prefix[d - 1] = box.lo[d - 1] + off;
        out.insert(out.end(), prefix.begin(), prefix.end());
      }
    }
    if (out.size() / d > budget) {
      fail(Errc::BudgetExceeded, "set operation exceeded the point budget (" +
                                     std::to_string(budget) + " points)");
    }
  };
  if (dense_table) {
    for (i64 key = 0; key < prefix_count; ++key) emit_row(key, table.data() + key * words);
  } else {
    std::vector<i64> keys;
    keys.reserve(sparse.size());
    for (const auto& kv : sparse) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    for (i64 key : keys) emit_row(key, sparse[key].data());
  }
  return out;
}

}  // namespace dlab::kernels
