#pragma once

// Integer and residue-ring helpers shared by the p-adic code paths.

#include <cstdint>
#include <optional>
#include <vector>

namespace dlab {

using i64 = std::int64_t;
using i128 = __int128;

namespace padic {

/// p^e, throwing RangeError if the result would exceed 2^62.
i64 ipow(i64 base, int e);

bool is_prime(i64 n);

/// Canonical residue in [0, modulus).
inline i64 reduce(i128 v, i64 modulus) {
  i128 r = v % modulus;
  if (r < 0) r += modulus;
  return static_cast<i64>(r);
}

inline i64 mulmod(i64 a, i64 b, i64 modulus) {
  return reduce(static_cast<i128>(a) * b, modulus);
}

/// Largest v <= cap with p^v | x. valuation(0) == cap.
int valuation(i64 x, i64 p, int cap);

/// Inverse of a unit modulo `modulus` (extended Euclid).
i64 inverse_mod(i64 a, i64 modulus);

/// Polynomials over F_p are coefficient vectors, lowest degree first.
bool is_irreducible(const std::vector<i64>& poly, i64 p);

/// Smallest monic irreducible polynomial of degree d over F_p, ordering
/// candidates by the integer sum c_i p^i of their lower coefficients.
/// Returned vector has d+1 entries with leading coefficient 1.
std::vector<i64> smallest_irreducible(i64 p, int d);

/// Valuation of the determinant of an n x n matrix over Z/p^k (row-major),
/// computed by full-pivot elimination. std::nullopt means the determinant
/// vanishes at this precision.
std::optional<int> det_valuation(std::vector<i64> mat, int n, i64 p, int k);

/// Solves mat * x = rhs over Z/p^k for a matrix that is invertible mod p.
/// Returns std::nullopt if the matrix is singular mod p.
std::optional<std::vector<i64>> solve_unimodular(std::vector<i64> mat,
                                                 std::vector<i64> rhs, int n,
                                                 i64 p, int k);

}  // namespace padic
}  // namespace dlab
