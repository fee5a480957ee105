#pragma once

// delta-discretised sets on the radix grid.
//
// Real points are integer coordinate vectors in units of 2^-m, contained in
// the coordinate box |c_j| <= 2^(m+R). Padic points are residues
// y in [0, p^(m+R)) standing for the value p^-R * y, so a set with R > 0
// lives in the ball B(0, p^R).

#include <cstddef>
#include <span>
#include <vector>

#include "core/algebra.hpp"

namespace dlab {

/// Storage shared by DSet (points of E) and PairSet (points of E x E).
class PointSet {
 public:
  const Algebra& algebra() const { return *alg_; }
  const AlgebraPtr& algebra_ptr() const { return alg_; }
  int scale_exp() const { return m_; }
  int radius_exp() const { return r_; }
  /// Integers per point: d for DSet, 2d for PairSet.
  int width() const { return width_; }
  std::size_t size() const { return width_ == 0 ? 0 : flat_.size() / width_; }
  bool empty() const { return flat_.empty(); }
  std::span<const i64> point(std::size_t i) const {
    return {flat_.data() + i * width_, static_cast<std::size_t>(width_)};
  }
  const std::vector<i64>& flat() const { return flat_; }
  bool operator==(const PointSet& other) const;

  /// Padic storage modulus p^(m+R).
  i64 modulus() const;

 protected:
  PointSet(AlgebraPtr alg, int scale_exp, int radius_exp, int width,
           std::vector<i64> flat, bool grow_radius);

 private:
  AlgebraPtr alg_;
  int m_ = 0;
  int r_ = 0;
  int width_ = 1;
  std::vector<i64> flat_;
};

class DSet : public PointSet {
 public:
  /// Canonicalises (sorts, deduplicates) and validates the ball bound.
  DSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat);
  /// As above but grows radius_exp (Real) until every point fits.
  static DSet fit(AlgebraPtr alg, int scale_exp, int min_radius_exp,
                  std::vector<i64> flat);
  int dim() const { return width(); }

 private:
  DSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat, bool grow);
};

class PairSet : public PointSet {
 public:
  PairSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat);
  static PairSet fit(AlgebraPtr alg, int scale_exp, int min_radius_exp,
                     std::vector<i64> flat);
  int dim() const { return width() / 2; }
  std::span<const i64> first(std::size_t i) const { return point(i).first(dim()); }
  std::span<const i64> second(std::size_t i) const { return point(i).last(dim()); }

 private:
  PairSet(AlgebraPtr alg, int scale_exp, int radius_exp, std::vector<i64> flat, bool grow);
};

/// Sorts rows of `width` integers lexicographically and removes duplicates.
void sort_unique_rows(std::vector<i64>& flat, int width);

/// Index of `row` in the sorted point list, or -1.
std::ptrdiff_t find_point(const PointSet& a, std::span<const i64> row);

/// Cell of one coordinate at level k (cell side radix^-k).
i64 cell_coord(const PointSet& a, i64 c, int k);

std::size_t covering_number(const PointSet& a, int k);

struct NCReport {
  bool pass = false;
  double s = 0;
  double C = 0;
  std::vector<i64> worst_center;
  int worst_radius_exp = 0;
  std::size_t worst_count = 0;
  double best_C = 0;
};

/// Checks N(A ∩ B(x,r)) <= C r^s |A| over centres x in A and radii
/// r = radix^-k, 0 <= k <= m, using the radix cell containing x as the ball.
NCReport is_nonconcentrated(const PointSet& a, double s, double C);

/// Largest s for which is_nonconcentrated(a, s, C) passes, capped at the
/// ambient dimension.
double verified_exponent(const PointSet& a, double C);

/// All grid points within radix^-k of A (Real: l-infinity box; Padic: the
/// same radix^-k cell), intersected with A's coordinate box.
DSet neighborhood(const DSet& a, int k, std::size_t budget);

struct UniformityAudit {
  int stages = 0;
  double worst_ratio = 1;  // max / min branching over all stages
  bool pass = true;
};

/// Up-the-tree pigeonholing refinement with T levels per stage.
DSet uniform_subset(const DSet& a, int levels_per_stage = 1);
UniformityAudit uniformity_audit(const DSet& a, int levels_per_stage = 1);
int stage_count(int m, int levels_per_stage);

/// Points at distance >= radix^-k from `center` (the open ball is removed).
DSet remove_ball(const DSet& a, std::span<const i64> center, int k);

/// Points of A inside the closed unit ball of the algebra norm.
DSet intersect_unit_ball(const DSet& a);

}  // namespace dlab
