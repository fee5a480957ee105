#include "core/dset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace dlab {

namespace {

template <int W>
void sort_unique_fixed(std::vector<i64>& flat) {
  const std::size_t n = flat.size() / W;
  std::vector<std::array<i64, W>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(flat.begin() + i * W, W, rows[i].begin());
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  flat.resize(rows.size() * W);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(rows[i].begin(), W, flat.begin() + i * W);
  }
}

template <int... Ws>
bool dispatch_sort(std::vector<i64>& flat, int width,
                   std::integer_sequence<int, Ws...>) {
  return ((width == Ws + 1 ? (sort_unique_fixed<Ws + 1>(flat), true) : false) || ...);
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool real_fits(std::span<const i64> flat, int m, int r) {
  const i128 bound = i128{1} << (m + r);
  return std::all_of(flat.begin(), flat.end(), [bound](i64 c) {
    return c <= bound && -static_cast<i128>(c) <= bound;
  });
}

}  // namespace

void sort_unique_rows(std::vector<i64>& flat, int width) {
  if (width <= 0 || flat.empty()) return;
  if (dispatch_sort(flat, width, std::make_integer_sequence<int, 16>{})) return;
  // Wide rows: sort an index permutation.
  const std::size_t n = flat.size() / width;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(flat.begin() + a * width, flat.begin() + (a + 1) * width,
                                        flat.begin() + b * width, flat.begin() + (b + 1) * width);
  };
  std::sort(idx.begin(), idx.end(), row_less);
  std::vector<i64> out;
  out.reserve(flat.size());
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = idx[t];
    if (t > 0 && std::equal(flat.begin() + i * width, flat.begin() + (i + 1) * width,
                            flat.begin() + idx[t - 1] * width)) {
      continue;
    }
    out.insert(out.end(), flat.begin() + i * width, flat.begin() + (i + 1) * width);
  }
  flat = std::move(out);
}

PointSet::PointSet(AlgebraPtr alg, int scale_exp, int radius_exp, int width,
                   std::vector<i64> flat, bool grow_radius)
    : alg_(std::move(alg)), m_(scale_exp), r_(radius_exp), width_(width), flat_(std::move(flat)) {
  if (!alg_) fail(Errc::InvalidArgument, "point set needs an algebra");
  if (m_ < 0) fail(Errc::ScaleOutOfRange, "scale exponent must be non-negative");
  if (r_ < 0) fail(Errc::InvalidArgument, "radius exponent must be non-negative");
  if (flat_.size() % width_ != 0) {
    fail(Errc::InvalidArgument, "flat point storage is not a multiple of the width");
  }
  if (alg_->base() == Base::Real) {
    if (grow_radius) {
      while (!real_fits(flat_, m_, r_)) {
        ++r_;
        if (m_ + r_ > 60) fail(Errc::RangeError, "coordinates exceed the representable range");
      }
    } else if (!real_fits(flat_, m_, r_)) {
      fail(Errc::InvalidArgument, "point outside the ball B(0, 2^" + std::to_string(r_) + ")");
    }
  } else {
    const i64 mod = modulus();
    for (i64 c : flat_) {
      if (c < 0 || c >= mod) fail(Errc::InvalidArgument, "p-adic residue out of range");
    }
  }
  sort_unique_rows(flat_, width_);
}

i64 PointSet::modulus() const {
  return alg_->base() == Base::Padic ? padic::ipow(alg_->prime(), m_ + r_) : 0;
}

bool PointSet::operator==(const PointSet& other) const {
  return alg_->same_kind(*other.alg_) && m_ == other.m_ && r_ == other.r_ &&
         width_ == other.width_ && flat_ == other.flat_;
}

DSet::DSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat, bool grow)
    : PointSet(alg, scale_exp, radius_exp, alg ? alg->dim() : 1, std::move(flat), grow) {}

DSet::DSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat)
    : DSet(std::move(alg), scale_exp, radius_exp, std::move(flat), false) {}

DSet DSet::fit(AlgebraPtr alg, int scale_exp, int min_radius_exp, std::vector<i64> flat) {
  return DSet(std::move(alg), scale_exp, min_radius_exp, std::move(flat), true);
}

PairSet::PairSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat, bool grow)
    : PointSet(alg, scale_exp, radius_exp, alg ? 2 * alg->dim() : 2, std::move(flat), grow) {}

PairSet::PairSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat)
    : PairSet(std::move(alg), scale_exp, radius_exp, std::move(flat), false) {}

PairSet PairSet::fit(AlgebraPtr alg, int scale_exp, int min_radius_exp, std::vector<i64> flat) {
  return PairSet(std::move(alg), scale_exp, min_radius_exp, std::move(flat), true);
}

std::ptrdiff_t find_point(const PointSet& a, std::span<const i64> row) {
  std::size_t lo = 0, hi = a.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto pt = a.point(mid);
    if (std::lexicographical_compare(pt.begin(), pt.end(), row.begin(), row.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < a.size() && std::equal(row.begin(), row.end(), a.point(lo).begin())) {
    return static_cast<std::ptrdiff_t>(lo);
  }
  return -1;
}

i64 cell_coord(const PointSet& a, i64 c, int k) {
  const int m = a.scale_exp();
  if (k >= m) return c;
  if (a.algebra().base() == Base::Padic) {
    return c % padic::ipow(a.algebra().prime(), k + a.radius_exp());
  }
  // Half-open cells [q 2^-k, (q+1) 2^-k); the closed upper face of the
  // coordinate box joins the last cell.
  const int r = a.radius_exp();
  if (static_cast<i128>(c) == (i128{1} << (m + r))) return (i64{1} << (k + r)) - 1;
  return floor_div(c, i64{1} << (m - k));
}

namespace {

std::vector<i64> cells_at(const PointSet& a, int k) {
  std::vector<i64> cells(a.flat().size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = cell_coord(a, a.flat()[i], k);
  return cells;
}

struct LevelMax {
  std::size_t count = 0;
  std::size_t witness = 0;  // index of the smallest point in the heaviest cell
};

// Heaviest cell at level k. Points are sorted, so ties resolve to the cell
// whose smallest member comes first.
LevelMax heaviest_cell(const PointSet& a, int k) {
  const int w = a.width();
  const std::size_t n = a.size();
  const auto cells = cells_at(a, k);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto cell_less = [&](std::size_t x, std::size_t y) {
    const auto bx = cells.begin() + x * w, by = cells.begin() + y * w;
    if (std::equal(bx, bx + w, by)) return x < y;
    return std::lexicographical_compare(bx, bx + w, by, by + w);
  };
  std::sort(idx.begin(), idx.end(), cell_less);
  LevelMax best;
  std::size_t run_start = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    const bool boundary =
        t == n || !std::equal(cells.begin() + idx[t] * w, cells.begin() + (idx[t] + 1) * w,
                              cells.begin() + idx[run_start] * w);
    if (!boundary) continue;
    const std::size_t count = t - run_start;
    const std::size_t first = idx[run_start];
    if (count > best.count || (count == best.count && first < best.witness)) {
      best.count = count;
      best.witness = first;
    }
    run_start = t;
  }
  return best;
}

}  // namespace

std::size_t covering_number(const PointSet& a, int k) {
  if (k < 0 || k > a.scale_exp()) {
    fail(Errc::ScaleOutOfRange, "covering scale k=" + std::to_string(k) + " outside [0, m]");
  }
  if (a.empty()) return 0;
  if (k == a.scale_exp()) return a.size();
  auto cells = cells_at(a, k);
  sort_unique_rows(cells, a.width());
  return cells.size() / a.width();
}

NCReport is_nonconcentrated(const PointSet& a, double s, double C) {
  NCReport rep;
  rep.s = s;
  rep.C = C;
  if (a.empty()) fail(Errc::EmptyInput, "non-concentration needs a nonempty set");
  const double radix = static_cast<double>(a.algebra().radix());
  const double n = static_cast<double>(a.size());
  rep.best_C = -1;
  for (int k = 0; k <= a.scale_exp(); ++k) {
    const LevelMax lm = heaviest_cell(a, k);
    const double r_s = std::pow(radix, -k * s);
    const double ratio = static_cast<double>(lm.count) / (r_s * n);
    if (ratio > rep.best_C) {
      rep.best_C = ratio;
      rep.worst_count = lm.count;
      rep.worst_radius_exp = k;
      const auto pt = a.point(lm.witness);
      rep.worst_center.assign(pt.begin(), pt.end());
    }
  }
  rep.pass = rep.best_C <= C;
  return rep;
}

double verified_exponent(const PointSet& a, double C) {
  if (a.empty()) fail(Errc::EmptyInput, "exponent of an empty set");
  const double log_radix = std::log(static_cast<double>(a.algebra().radix()));
  const double n = static_cast<double>(a.size());
  double s = a.width();
  if (heaviest_cell(a, 0).count > C * n) return 0.0;
  for (int k = 1; k <= a.scale_exp(); ++k) {
    const double count = static_cast<double>(heaviest_cell(a, k).count);
    s = std::min(s, std::log(C * n / count) / (k * log_radix));
  }
  return std::max(0.0, s);
}

DSet neighborhood(const DSet& a, int k, std::size_t budget) {
  const int m = a.scale_exp();
  if (k < 0 || k > m) fail(Errc::ScaleOutOfRange, "neighbourhood scale outside [0, m]");
  const int d = a.dim();
  const Algebra& alg = a.algebra();
  std::vector<i64> out;
  if (alg.base() == Base::Real) {
    const i64 reach = i64{1} << (m - k);
    const i64 side = 2 * reach + 1;
    i128 per_point = 1;
    for (int j = 0; j < d; ++j) per_point *= side;
    if (per_point * static_cast<i128>(a.size()) > static_cast<i128>(budget)) {
      fail(Errc::BudgetExceeded, "neighbourhood would exceed the point budget");
    }
    const i128 bound = i128{1} << (m + a.radius_exp());
    std::vector<i64> offset(d);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pt = a.point(i);
      std::fill(offset.begin(), offset.end(), -reach);
      while (true) {
        bool inside = true;
        for (int j = 0; j < d; ++j) {
          const i128 c = static_cast<i128>(pt[j]) + offset[j];
          if (c > bound || -c > bound) inside = false;
        }
        if (inside) {
          for (int j = 0; j < d; ++j) out.push_back(pt[j] + offset[j]);
        }
        int j = d - 1;
        while (j >= 0 && offset[j] == reach) offset[j--] = -reach;
        if (j < 0) break;
        ++offset[j];
      }
    }
    return DSet(a.algebra_ptr(), m, a.radius_exp(), std::move(out));
  }
  // Padic: replace the digits beyond level k by every possible value.
  const i64 p = alg.prime();
  const int r = a.radius_exp();
  const i64 low = padic::ipow(p, k + r);
  const i64 per_coord = padic::ipow(p, m - k);
  i128 per_point = 1;
  for (int j = 0; j < d; ++j) per_point *= per_coord;
  if (per_point * static_cast<i128>(a.size()) > static_cast<i128>(budget)) {
    fail(Errc::BudgetExceeded, "neighbourhood would exceed the point budget");
  }
  std::vector<i64> digit(d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pt = a.point(i);
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      for (int j = 0; j < d; ++j) out.push_back(pt[j] % low + digit[j] * low);
      int j = d - 1;
      while (j >= 0 && digit[j] == per_coord - 1) digit[j--] = 0;
      if (j < 0) break;
      ++digit[j];
    }
  }
  return DSet(a.algebra_ptr(), m, r, std::move(out));
}

int stage_count(int m, int levels_per_stage) {
  if (levels_per_stage < 1) fail(Errc::InvalidArgument, "stage size must be positive");
  return (m + levels_per_stage - 1) / levels_per_stage;
}

namespace {

// Stage boundary levels m' - jT clipped to [0, m], where m' pads m up to a
// multiple of T (levels finer than m hold single points).
int stage_level(int m, int T, int j) {
  const int padded = stage_count(m, T) * T;
  return std::clamp(padded - j * T, 0, m);
}

struct CellGroups {
  // For each point (in set order): index of its parent group.
  std::vector<std::size_t> group_of;
  // Per group: number of distinct child cells and number of points.
  std::vector<std::size_t> branching;
  std::vector<std::size_t> mass;
};

CellGroups group_by_parent(const DSet& a, int child_level, int parent_level) {
  const int w = a.width();
  const std::size_t n = a.size();
  const auto parents = cells_at(a, parent_level);
  const auto children = cells_at(a, child_level);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t x, std::size_t y) {
    const auto px = parents.begin() + x * w, py = parents.begin() + y * w;
    if (!std::equal(px, px + w, py)) return std::lexicographical_compare(px, px + w, py, py + w);
    const auto cx = children.begin() + x * w, cy = children.begin() + y * w;
    return std::lexicographical_compare(cx, cx + w, cy, cy + w);
  };
  std::sort(idx.begin(), idx.end(), less);
  CellGroups g;
  g.group_of.assign(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = idx[t];
    const bool new_parent =
        t == 0 || !std::equal(parents.begin() + i * w, parents.begin() + (i + 1) * w,
                              parents.begin() + idx[t - 1] * w);
    const bool new_child =
        new_parent || !std::equal(children.begin() + i * w, children.begin() + (i + 1) * w,
                                  children.begin() + idx[t - 1] * w);
    if (new_parent) {
      g.branching.push_back(0);
      g.mass.push_back(0);
    }
    if (new_child) ++g.branching.back();
    ++g.mass.back();
    g.group_of[i] = g.branching.size() - 1;
  }
  return g;
}

int branching_class(std::size_t branching, i64 radix) {
  int cls = 1;
  std::size_t bound = static_cast<std::size_t>(radix);
  while (branching >= bound) {
    ++cls;
    bound *= static_cast<std::size_t>(radix);
  }
  return cls;
}

}  // namespace

DSet uniform_subset(const DSet& a, int levels_per_stage) {
  if (a.empty()) fail(Errc::EmptyInput, "uniform_subset needs a nonempty set");
  const int m = a.scale_exp();
  const int stages = stage_count(m, levels_per_stage);
  const i64 radix = a.algebra().radix();
  DSet cur = a;
  for (int j = 0; j < stages; ++j) {
    const int child = stage_level(m, levels_per_stage, j);
    const int parent = stage_level(m, levels_per_stage, j + 1);
    const CellGroups g = group_by_parent(cur, child, parent);
    std::map<int, std::size_t> class_mass;
    std::vector<int> group_class(g.branching.size());
    for (std::size_t gi = 0; gi < g.branching.size(); ++gi) {
      group_class[gi] = branching_class(g.branching[gi], radix);
      class_mass[group_class[gi]] += g.mass[gi];
    }
    int chosen = class_mass.begin()->first;
    std::size_t best = 0;
    for (const auto& [cls, mass] : class_mass) {
      if (mass > best) {
        best = mass;
        chosen = cls;
      }
    }
    std::vector<i64> kept;
    kept.reserve(cur.flat().size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (group_class[g.group_of[i]] != chosen) continue;
      const auto pt = cur.point(i);
      kept.insert(kept.end(), pt.begin(), pt.end());
    }
    cur = DSet(a.algebra_ptr(), m, a.radius_exp(), std::move(kept));
  }
  return cur;
}

UniformityAudit uniformity_audit(const DSet& a, int levels_per_stage) {
  UniformityAudit audit;
  const int m = a.scale_exp();
  audit.stages = stage_count(m, levels_per_stage);
  if (a.empty()) return audit;
  const double limit = std::pow(static_cast<double>(a.algebra().radix()), levels_per_stage);
  for (int j = 0; j < audit.stages; ++j) {
    const CellGroups g = group_by_parent(a, stage_level(m, levels_per_stage, j),
                                         stage_level(m, levels_per_stage, j + 1));
    const auto [lo, hi] = std::minmax_element(g.branching.begin(), g.branching.end());
    audit.worst_ratio = std::max(audit.worst_ratio, static_cast<double>(*hi) / *lo);
  }
  audit.pass = audit.worst_ratio <= limit;
  return audit;
}

DSet remove_ball(const DSet& a, std::span<const i64> center, int k) {
  if (static_cast<int>(center.size()) != a.dim()) {
    fail(Errc::InvalidArgument, "centre dimension does not match the set");
  }
  const int m = a.scale_exp();
  std::vector<i64> kept;
  if (a.algebra().base() == Base::Real) {
    // Keep |x - c| >= 2^-k, i.e. squared grid distance >= 2^(2(m-k)).
    const i128 threshold = k <= m ? (i128{1} << (2 * (m - k))) : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pt = a.point(i);
      i128 d2 = 0;
      for (int j = 0; j < a.dim(); ++j) {
        const i128 diff = static_cast<i128>(pt[j]) - center[j];
        d2 += diff * diff;
      }
      if (d2 >= threshold) kept.insert(kept.end(), pt.begin(), pt.end());
    }
  } else {
    // |x - c| < p^-k  <=>  the stored residues agree mod p^(k+1+R).
    const i64 mod = padic::ipow(a.algebra().prime(), std::min(k + 1, m) + a.radius_exp());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pt = a.point(i);
      bool inside = true;
      for (int j = 0; j < a.dim(); ++j) {
        if (padic::reduce(static_cast<i128>(pt[j]) - center[j], mod) != 0) inside = false;
      }
      if (!inside) kept.insert(kept.end(), pt.begin(), pt.end());
    }
  }
  return DSet(a.algebra_ptr(), m, a.radius_exp(), std::move(kept));
}

DSet intersect_unit_ball(const DSet& a) {
  const int m = a.scale_exp();
  std::vector<i64> kept;
  if (a.algebra().base() == Base::Real) {
    const i128 bound = i128{1} << (2 * m);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pt = a.point(i);
      if (norm2_units(pt) <= bound) kept.insert(kept.end(), pt.begin(), pt.end());
    }
    return DSet(a.algebra_ptr(), m, 0, std::move(kept));
  }
  const i64 p = a.algebra().prime();
  const i64 shrink = padic::ipow(p, a.radius_exp());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pt = a.point(i);
    if (std::all_of(pt.begin(), pt.end(), [shrink](i64 c) { return c % shrink == 0; })) {
      for (i64 c : pt) kept.push_back(c / shrink);
    }
  }
  return DSet(a.algebra_ptr(), m, 0, std::move(kept));
}

}  // namespace dlab
