#pragma once

// Set calculus on discretised sets: sums, products, projections, quotient
// sets and linear changes of coordinates.

#include <array>
#include <cstddef>
#include <vector>

#include "core/algebra.hpp"
#include "core/dset.hpp"

namespace dlab {

/// Point cap for set operations: DLAB_BUDGET_POINTS if set, else 10^7.
std::size_t point_budget();
/// Overrides the cap for this process (0 restores the default lookup).
void set_point_budget(std::size_t points);

DSet sumset(const DSet& a, const DSet& b);
DSet difference_set(const DSet& a, const DSet& b);
/// Left: {ab}; Right: {ba}.
DSet product_set(const DSet& a, const DSet& b, Side side = Side::Left);

/// n_sum (A^(n_prod) - A^(n_prod)) ∩ B(0,1). Partial sums are pruned to the
/// box that can still reach the unit ball.
DSet iterated(const DSet& a, int n_sum, int n_prod);

/// Left: {xa}; Right: {ax}. x is an element of the set's algebra at the
/// algebra's own precision.
DSet scalar_image(const Element& x, const DSet& a, Side side = Side::Left);

/// Cartesian product A x B as a pair set.
PairSet cartesian(const DSet& a, const DSet& b);

/// {a + x b : (a, b) in G}.
DSet project(const Element& x, const PairSet& g);

struct QuotientSet {
  DSet set;  // scale m - 3r, radius exponent >= r
  int rho_exp = 0;
  Side side = Side::Left;
  /// Per point of `set`: indices (a, b, c, d) into the input set with
  /// (a-b)(c-d)^-1 (Left) or (c-d)^-1 (a-b) (Right) in that cell; the
  /// lexicographically smallest such tuple.
  std::vector<std::array<std::size_t, 4>> witness;
};

/// Q = {(a-b)(c-d)^-1 : |c-d| > rho} on the grid of scale Delta = delta/rho^3
/// with rho = radix^-rho_exp.
QuotientSet quotient_set(const DSet& a, int rho_exp, Side side = Side::Left);

/// One quotient cell on the Delta grid (the same rounding quotient_set uses).
/// `u`, `v` are grid points of the input scale m and radius exponent r_in.
std::vector<i64> quotient_cell(const Algebra& alg, int m, int r_in, std::span<const i64> u,
                               std::span<const i64> v, int rho_exp, int out_radius_exp,
                               Side side);

/// 2x2 matrix over E, row-major: (a, b) -> (L11 a + L12 b, L21 a + L22 b).
struct LinearMap {
  std::array<Element, 4> entry;
};

LinearMap identity_map(const Algebra& alg);
/// Determinant of the induced 2d x 2d map over the base field (Real: signed
/// real number; Padic: p-adic absolute value).
double linear_map_det(const Algebra& alg, const LinearMap& l);

PairSet apply_linear_map(const LinearMap& l, const PairSet& g);
/// x -> (L11 + L12 x)^-1 (L21 + L22 x). For commutative E,
/// pi_x(L^T g) = (L11 + x L12) pi_{dual(x)}(g).
DSet apply_dual(const LinearMap& l, const DSet& x);
/// Transpose of a 2x2 map (entries are not conjugated).
LinearMap transpose(const LinearMap& l);

/// Element of the algebra (at the set's working precision) for point i.
/// Padic points of radius exponent R become elements with shift R at
/// precision m + R.
Element element_of(const PointSet& a, std::span<const i64> point);
/// Algebra at the working precision used by element_of.
Algebra working_algebra(const PointSet& a);

}  // namespace dlab
