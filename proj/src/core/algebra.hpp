#pragma once

// Exact arithmetic in the normed division algebras R, C, H and the
// unramified extensions Q_{p^d}, all at a fixed working precision m.
//
// Real elements are integer coordinate vectors in units of 2^-m. Padic
// elements are residues mod p^m in the power basis 1, z, ..., z^{d-1} of
// Z_p[z]/(f), optionally scaled by p^-shift so that inverses of non-units
// stay representable.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/padic.hpp"

namespace dlab {

enum class Base { Real, Padic };
enum class AlgebraKind { R, C, H, Qp, QpExt };
enum class Side { Left, Right };

struct Element {
  std::vector<i64> coords;
  int shift = 0;  // Padic only: value is p^-shift * sum coords[j] e_j.

  bool operator==(const Element&) const = default;
};

class Algebra {
 public:
  /// Builds a descriptor and verifies its invariants (identity, associativity
  /// on all basis triples, irreducibility of the defining polynomial).
  /// `defining_poly` is only consulted for QpExt: lowest degree first, monic,
  /// d+1 entries. When empty the smallest irreducible polynomial is used.
  static Algebra make(AlgebraKind kind, i64 p, int d, int m,
                      std::vector<i64> defining_poly = {});

  /// Same algebra at a different precision.
  Algebra with_precision(int m) const;

  AlgebraKind kind() const { return kind_; }
  Base base() const { return base_; }
  i64 prime() const { return p_; }
  int dim() const { return d_; }
  int precision() const { return m_; }
  i64 radix() const { return base_ == Base::Real ? 2 : p_; }
  /// p^m for Padic algebras, 2^m for Real ones.
  i64 scale() const { return scale_; }
  const std::vector<i64>& defining_poly() const { return poly_; }
  bool commutative() const { return kind_ != AlgebraKind::H; }
  std::string name() const;

  /// Coefficient of e_k in e_i * e_j (reduced mod p^m for Padic).
  i64 structure(int i, int j, int k) const {
    return table_[(static_cast<std::size_t>(i) * d_ + j) * d_ + k];
  }

  /// Same base, prime, dimension and multiplication table; precision may differ.
  bool same_kind(const Algebra& other) const;
  bool operator==(const Algebra& other) const {
    return same_kind(other) && m_ == other.m_;
  }

  Element zero() const;
  Element one() const;
  Element basis(int j) const;
  /// Real: nearest grid point to the given coordinate values.
  Element from_values(std::span<const double> values) const;
  /// Integer coordinate values (not grid units): Real scales by 2^m, Padic
  /// reduces mod p^m.
  Element from_integers(std::span<const i64> values) const;
  bool valid(const Element& x) const;

 private:
  AlgebraKind kind_ = AlgebraKind::R;
  Base base_ = Base::Real;
  i64 p_ = 2;
  int d_ = 1;
  int m_ = 0;
  i64 scale_ = 1;
  std::vector<i64> poly_;
  std::vector<i64> table_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

inline AlgebraPtr share(Algebra alg) {
  return std::make_shared<const Algebra>(std::move(alg));
}

// Round-half-away-from-zero of v / 2^s.
i128 round_shift(i128 v, int s);
// Round-half-away-from-zero of num / den for den > 0.
i128 round_div(i128 num, i128 den);

/// Bilinear product of coordinate vectors without any rescaling. Real
/// results are in units of 2^-2m; Padic results are reduced mod `modulus`.
void mul_coords(const Algebra& alg, std::span<const i64> x,
                std::span<const i64> y, std::span<i128> out, i64 modulus);

Element add(const Algebra& alg, const Element& x, const Element& y);
Element sub(const Algebra& alg, const Element& x, const Element& y);
Element neg(const Algebra& alg, const Element& x);
Element mul(const Algebra& alg, const Element& x, const Element& y);
Element inv(const Algebra& alg, const Element& x);
/// Quaternion/complex conjugate (Real only).
Element conj(const Algebra& alg, const Element& x);

/// Real: Euclidean norm. Padic: p^-(v - shift) with v the minimal coordinate
/// valuation; 0 for elements that vanish at this precision.
double norm(const Algebra& alg, const Element& x);
/// Padic: minimal coordinate valuation minus shift (capped at m for zero).
int valuation(const Algebra& alg, const Element& x);
/// Real: squared norm in grid units (exact).
i128 norm2_units(std::span<const i64> coords);

/// Inversion floor: norm(x) must be at least radix^-floor(m/2).
bool invertible(const Algebra& alg, const Element& x);

/// Determinant of the coordinate matrix of d elements. Real: signed and
/// normalised so the standard basis gives 1. Padic: p-adic absolute value.
double det_basis(const Algebra& alg, std::span<const Element> v);

}  // namespace dlab
