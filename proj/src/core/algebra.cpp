#include "core/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dlab {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonPrime: return "NonPrime";
    case Errc::UnsupportedRealDim: return "UnsupportedRealDim";
    case Errc::ReduciblePoly: return "ReduciblePoly";
    case Errc::DivisionByNegligible: return "DivisionByNegligible";
    case Errc::ScaleOutOfRange: return "ScaleOutOfRange";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::AlgebraMismatch: return "AlgebraMismatch";
    case Errc::ScaleMismatch: return "ScaleMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NoAdmissiblePairs: return "NoAdmissiblePairs";
    case Errc::SingularMap: return "SingularMap";
    case Errc::SubAlgebraTrapped: return "SubAlgebraTrapped";
    case Errc::NotRealBase: return "NotRealBase";
    case Errc::RangeError: return "RangeError";
    case Errc::GenerationFailed: return "GenerationFailed";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::TrappedInput: return "TrappedInput";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

i128 round_shift(i128 v, int s) {
  if (s <= 0) return v << (-s);
  const i128 half = i128{1} << (s - 1);
  if (v >= 0) return (v + half) >> s;
  return -((-v + half) >> s);
}

i128 round_div(i128 num, i128 den) {
  const bool negative = num < 0;
  const i128 a = negative ? -num : num;
  const i128 q = (2 * a + den) / (2 * den);
  return negative ? -q : q;
}

namespace {

// Standard quaternion table on the basis 1, i, j, k.
void fill_quaternion(std::vector<i64>& table) {
  // products[a][b] = (sign, index) of e_a * e_b.
  constexpr int kIndex[4][4] = {
      {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  constexpr int kSign[4][4] = {
      {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      table[(a * 4 + b) * 4 + kIndex[a][b]] = kSign[a][b];
    }
  }
}

// Power basis table of Z/p^m[z]/(f).
void fill_power_basis(std::vector<i64>& table, const std::vector<i64>& poly,
                      int d, i64 modulus) {
  // powers[n] = coordinates of z^n for n < 2d-1.
  std::vector<std::vector<i64>> powers(2 * d - 1, std::vector<i64>(d, 0));
  for (int n = 0; n < d; ++n) powers[n][n] = 1;
  for (int n = d; n < 2 * d - 1; ++n) {
    // z^n = z * z^{n-1}; shift up and fold the z^d term with z^d = -sum c_i z^i.
    const auto& prev = powers[n - 1];
    std::vector<i64> next(d, 0);
    const i64 top = prev[d - 1];
    for (int i = d - 1; i >= 1; --i) next[i] = prev[i - 1];
    for (int i = 0; i < d; ++i) {
      next[i] = padic::reduce(next[i] - static_cast<i128>(top) * poly[i], modulus);
    }
    powers[n] = std::move(next);
  }
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int k = 0; k < d; ++k) {
        table[(a * d + b) * d + k] = padic::reduce(powers[a + b][k], modulus);
      }
    }
  }
}

}  // namespace

Algebra Algebra::make(AlgebraKind kind, i64 p, int d, int m,
                      std::vector<i64> defining_poly) {
  if (m < 0) fail(Errc::InvalidArgument, "precision must be non-negative");
  Algebra a;
  a.kind_ = kind;
  a.m_ = m;
  switch (kind) {
    case AlgebraKind::R:
    case AlgebraKind::C:
    case AlgebraKind::H: {
      const int expected = kind == AlgebraKind::R ? 1 : kind == AlgebraKind::C ? 2 : 4;
      if (d == 0) d = expected;
      if (d != expected) {
        fail(Errc::UnsupportedRealDim,
             "real algebra " + std::to_string(expected) +
                 "-dimensional, got d=" + std::to_string(d));
      }
      if (m > 28) fail(Errc::RangeError, "real precision is limited to m <= 28");
      a.base_ = Base::Real;
      a.p_ = 2;
      a.d_ = d;
      a.scale_ = i64{1} << m;
      a.table_.assign(static_cast<std::size_t>(d) * d * d, 0);
      if (d == 1) {
        a.table_[0] = 1;
      } else if (d == 2) {
        a.table_[(0 * 2 + 0) * 2 + 0] = 1;
        a.table_[(0 * 2 + 1) * 2 + 1] = 1;
        a.table_[(1 * 2 + 0) * 2 + 1] = 1;
        a.table_[(1 * 2 + 1) * 2 + 0] = -1;
      } else {
        fill_quaternion(a.table_);
      }
      break;
    }
    case AlgebraKind::Qp:
    case AlgebraKind::QpExt: {
      if (!padic::is_prime(p)) {
        fail(Errc::NonPrime, std::to_string(p) + " is not prime");
      }
      if (kind == AlgebraKind::Qp) {
        if (d != 1 && d != 0) fail(Errc::InvalidArgument, "Qp has dimension 1");
        d = 1;
      }
      if (d < 1) fail(Errc::InvalidArgument, "dimension must be positive");
      a.base_ = Base::Padic;
      a.p_ = p;
      a.d_ = d;
      a.scale_ = padic::ipow(p, m);
      if (d == 1) {
        a.poly_ = {0, 1};
      } else if (defining_poly.empty()) {
        a.poly_ = padic::smallest_irreducible(p, d);
      } else {
        if (static_cast<int>(defining_poly.size()) != d + 1 ||
            padic::reduce(defining_poly.back(), p) != 1) {
          fail(Errc::InvalidArgument, "defining polynomial must be monic of degree d");
        }
        for (auto& c : defining_poly) c = padic::reduce(c, p);
        if (!padic::is_irreducible(defining_poly, p)) {
          fail(Errc::ReduciblePoly, "defining polynomial is reducible mod p");
        }
        a.poly_ = std::move(defining_poly);
      }
      a.table_.assign(static_cast<std::size_t>(d) * d * d, 0);
      fill_power_basis(a.table_, a.poly_, d, std::max<i64>(a.scale_, 1));
      break;
    }
  }

  // e_1 is the identity.
  for (int j = 0; j < a.d_; ++j) {
    for (int k = 0; k < a.d_; ++k) {
      const i64 want = j == k ? 1 % std::max<i64>(a.scale_, 2) : 0;
      if (a.structure(0, j, k) != want || a.structure(j, 0, k) != want) {
        fail(Errc::InvalidArgument, "e_1 is not the identity");
      }
    }
  }
  // Associativity on basis triples is associativity everywhere (bilinearity).
  const i64 modulus = a.base_ == Base::Padic ? a.scale_ : 0;
  for (int i = 0; i < a.d_; ++i) {
    for (int j = 0; j < a.d_; ++j) {
      for (int k = 0; k < a.d_; ++k) {
        for (int out = 0; out < a.d_; ++out) {
          i128 lhs = 0, rhs = 0;
          for (int t = 0; t < a.d_; ++t) {
            lhs += static_cast<i128>(a.structure(i, j, t)) * a.structure(t, k, out);
            rhs += static_cast<i128>(a.structure(j, k, t)) * a.structure(i, t, out);
          }
          if (modulus > 0) {
            lhs = padic::reduce(lhs, modulus);
            rhs = padic::reduce(rhs, modulus);
          }
          if (lhs != rhs) fail(Errc::InvalidArgument, "multiplication is not associative");
        }
      }
    }
  }
  return a;
}

Algebra Algebra::with_precision(int m) const {
  return make(kind_, p_, d_, m, base_ == Base::Padic && d_ > 1 ? poly_ : std::vector<i64>{});
}

std::string Algebra::name() const {
  switch (kind_) {
    case AlgebraKind::R: return "R";
    case AlgebraKind::C: return "C";
    case AlgebraKind::H: return "H";
    case AlgebraKind::Qp: return "Qp";
    case AlgebraKind::QpExt: return "Qp_ext";
  }
  return "?";
}

bool Algebra::same_kind(const Algebra& other) const {
  if (base_ != other.base_ || d_ != other.d_) return false;
  if (base_ == Base::Real) return true;
  return p_ == other.p_ && poly_ == other.poly_;
}

Element Algebra::zero() const { return Element{std::vector<i64>(d_, 0), 0}; }

Element Algebra::one() const { return basis(0); }

Element Algebra::basis(int j) const {
  Element e = zero();
  e.coords[j] = base_ == Base::Real ? scale_ : 1 % scale_;
  return e;
}

Element Algebra::from_values(std::span<const double> values) const {
  if (static_cast<int>(values.size()) != d_) {
    fail(Errc::InvalidArgument, "coordinate count does not match dimension");
  }
  if (base_ != Base::Real) fail(Errc::NotRealBase, "from_values needs a real algebra");
  Element e = zero();
  for (int j = 0; j < d_; ++j) {
    e.coords[j] = std::llround(std::ldexp(values[j], m_));
  }
  return e;
}

Element Algebra::from_integers(std::span<const i64> values) const {
  if (static_cast<int>(values.size()) != d_) {
    fail(Errc::InvalidArgument, "coordinate count does not match dimension");
  }
  Element e = zero();
  for (int j = 0; j < d_; ++j) {
    e.coords[j] = base_ == Base::Real ? values[j] * scale_
                                      : padic::reduce(values[j], scale_);
  }
  return e;
}

bool Algebra::valid(const Element& x) const {
  if (static_cast<int>(x.coords.size()) != d_) return false;
  if (base_ == Base::Real) return x.shift == 0;
  if (x.shift < 0) return false;
  return std::all_of(x.coords.begin(), x.coords.end(),
                     [this](i64 c) { return c >= 0 && c < scale_; });
}

void mul_coords(const Algebra& alg, std::span<const i64> x,
                std::span<const i64> y, std::span<i128> out, i64 modulus) {
  const int d = alg.dim();
  std::fill(out.begin(), out.end(), i128{0});
  if (alg.base() == Base::Real) {
    for (int i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < d; ++j) {
        if (y[j] == 0) continue;
        const i128 prod = static_cast<i128>(x[i]) * y[j];
        for (int k = 0; k < d; ++k) {
          const i64 c = alg.structure(i, j, k);
          if (c != 0) out[k] += c * prod;
        }
      }
    }
    return;
  }
  for (int i = 0; i < d; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (y[j] == 0) continue;
      const i64 prod = padic::mulmod(x[i], y[j], modulus);
      for (int k = 0; k < d; ++k) {
        const i64 c = alg.structure(i, j, k);
        if (c != 0) {
          out[k] = padic::reduce(out[k] + static_cast<i128>(padic::mulmod(prod, c, modulus)),
                                 modulus);
        }
      }
    }
  }
}

namespace {

void check_same_dim(const Algebra& alg, const Element& x) {
  if (static_cast<int>(x.coords.size()) != alg.dim()) {
    fail(Errc::InvalidArgument, "element dimension does not match algebra");
  }
}

// Rescales a Padic element to a larger shift (losing top digits).
std::vector<i64> lift_shift(const Algebra& alg, const Element& x, int shift) {
  const i64 factor = padic::ipow(alg.prime(), std::min(shift - x.shift, alg.precision()));
  std::vector<i64> out(x.coords.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = padic::mulmod(x.coords[j], factor, alg.scale());
  }
  return out;
}

Element combine(const Algebra& alg, const Element& x, const Element& y, int sign) {
  check_same_dim(alg, x);
  check_same_dim(alg, y);
  Element r;
  if (alg.base() == Base::Real) {
    r.coords.resize(x.coords.size());
    for (std::size_t j = 0; j < r.coords.size(); ++j) {
      r.coords[j] = x.coords[j] + sign * y.coords[j];
    }
    return r;
  }
  r.shift = std::max(x.shift, y.shift);
  const auto xs = lift_shift(alg, x, r.shift);
  const auto ys = lift_shift(alg, y, r.shift);
  r.coords.resize(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    r.coords[j] = padic::reduce(static_cast<i128>(xs[j]) + sign * ys[j], alg.scale());
  }
  return r;
}

}  // namespace

Element add(const Algebra& alg, const Element& x, const Element& y) {
  return combine(alg, x, y, 1);
}

Element sub(const Algebra& alg, const Element& x, const Element& y) {
  return combine(alg, x, y, -1);
}

Element neg(const Algebra& alg, const Element& x) {
  return sub(alg, alg.zero(), x);
}

Element mul(const Algebra& alg, const Element& x, const Element& y) {
  check_same_dim(alg, x);
  check_same_dim(alg, y);
  std::vector<i128> raw(alg.dim());
  Element r;
  r.coords.resize(alg.dim());
  if (alg.base() == Base::Real) {
    mul_coords(alg, x.coords, y.coords, raw, 0);
    for (int k = 0; k < alg.dim(); ++k) {
      r.coords[k] = static_cast<i64>(round_shift(raw[k], alg.precision()));
    }
    return r;
  }
  mul_coords(alg, x.coords, y.coords, raw, alg.scale());
  for (int k = 0; k < alg.dim(); ++k) r.coords[k] = static_cast<i64>(raw[k]);
  r.shift = x.shift + y.shift;
  return r;
}

Element conj(const Algebra& alg, const Element& x) {
  if (alg.base() != Base::Real) fail(Errc::NotRealBase, "conjugation needs a real algebra");
  Element r = x;
  for (int j = 1; j < alg.dim(); ++j) r.coords[j] = -r.coords[j];
  return r;
}

i128 norm2_units(std::span<const i64> coords) {
  i128 s = 0;
  for (i64 c : coords) s += static_cast<i128>(c) * c;
  return s;
}

int valuation(const Algebra& alg, const Element& x) {
  if (alg.base() != Base::Padic) fail(Errc::InvalidArgument, "valuation needs a p-adic algebra");
  int v = alg.precision();
  for (i64 c : x.coords) v = std::min(v, padic::valuation(c, alg.prime(), alg.precision()));
  return v - x.shift;
}

double norm(const Algebra& alg, const Element& x) {
  check_same_dim(alg, x);
  if (alg.base() == Base::Real) {
    const long double n2 = static_cast<long double>(norm2_units(x.coords));
    return static_cast<double>(std::sqrt(n2) / std::ldexp(1.0L, alg.precision()));
  }
  if (std::all_of(x.coords.begin(), x.coords.end(), [](i64 c) { return c == 0; })) {
    return 0.0;
  }
  return std::pow(static_cast<double>(alg.prime()), -valuation(alg, x));
}

bool invertible(const Algebra& alg, const Element& x) {
  const int floor_exp = alg.precision() / 2;
  if (alg.base() == Base::Real) {
    const int e = alg.precision() - floor_exp;
    return norm2_units(x.coords) >= (i128{1} << (2 * e));
  }
  if (std::all_of(x.coords.begin(), x.coords.end(), [](i64 c) { return c == 0; })) {
    return false;
  }
  return valuation(alg, x) <= floor_exp;
}

Element inv(const Algebra& alg, const Element& x) {
  check_same_dim(alg, x);
  if (!invertible(alg, x)) {
    fail(Errc::DivisionByNegligible, "norm below the inversion floor radix^-floor(m/2)");
  }
  const int d = alg.dim();
  if (alg.base() == Base::Real) {
    // x^-1 = conj(x) / |x|^2; in grid units conj(c) * 2^2m / sum c^2.
    const i128 n2 = norm2_units(x.coords);
    Element r = conj(alg, x);
    for (int j = 0; j < d; ++j) {
      r.coords[j] = static_cast<i64>(
          round_div(static_cast<i128>(r.coords[j]) << (2 * alg.precision()), n2));
    }
    return r;
  }
  // x = p^-shift * p^v * w with w a unit known mod p^(m-v).
  const i64 p = alg.prime();
  int v = alg.precision();
  for (i64 c : x.coords) v = std::min(v, padic::valuation(c, p, alg.precision()));
  const int k = alg.precision() - v;
  const i64 pv = padic::ipow(p, v);
  std::vector<i64> w(d);
  for (int j = 0; j < d; ++j) w[j] = x.coords[j] / pv;
  // Solve (multiplication by w) * y = e_1 over Z/p^k.
  std::vector<i64> mat(static_cast<std::size_t>(d) * d, 0);
  const i64 mod_k = padic::ipow(p, k);
  for (int col = 0; col < d; ++col) {
    for (int row = 0; row < d; ++row) {
      i128 acc = 0;
      for (int i = 0; i < d; ++i) {
        acc += static_cast<i128>(w[i]) * alg.structure(i, col, row);
        acc = padic::reduce(acc, mod_k);
      }
      mat[row * d + col] = static_cast<i64>(acc);
    }
  }
  std::vector<i64> rhs(d, 0);
  rhs[0] = 1 % mod_k;
  auto y = padic::solve_unimodular(std::move(mat), std::move(rhs), d, p, k);
  if (!y) fail(Errc::DivisionByNegligible, "element is not invertible mod p");
  // x^-1 = p^(shift - v) * y.
  Element r;
  r.coords = std::move(*y);
  const int net = x.shift - v;
  if (net >= 0) {
    const i64 factor = padic::ipow(p, std::min(net, alg.precision()));
    for (auto& c : r.coords) c = padic::mulmod(c, factor, alg.scale());
    r.shift = 0;
  } else {
    r.shift = -net;
  }
  return r;
}

double det_basis(const Algebra& alg, std::span<const Element> v) {
  const int d = alg.dim();
  if (static_cast<int>(v.size()) != d) {
    fail(Errc::InvalidArgument, "det_basis needs exactly d elements");
  }
  if (alg.base() == Base::Real) {
    std::vector<long double> a(static_cast<std::size_t>(d) * d);
    const long double unit = std::ldexp(1.0L, -alg.precision());
    for (int r = 0; r < d; ++r) {
      check_same_dim(alg, v[r]);
      for (int c = 0; c < d; ++c) a[r * d + c] = v[r].coords[c] * unit;
    }
    long double det = 1;
    for (int col = 0; col < d; ++col) {
      int pivot = col;
      for (int r = col + 1; r < d; ++r) {
        if (std::fabs(a[r * d + col]) > std::fabs(a[pivot * d + col])) pivot = r;
      }
      if (a[pivot * d + col] == 0) return 0.0;
      if (pivot != col) {
        for (int c = 0; c < d; ++c) std::swap(a[pivot * d + c], a[col * d + c]);
        det = -det;
      }
      det *= a[col * d + col];
      for (int r = col + 1; r < d; ++r) {
        const long double f = a[r * d + col] / a[col * d + col];
        for (int c = col; c < d; ++c) a[r * d + c] -= f * a[col * d + c];
      }
    }
    return static_cast<double>(det);
  }
  std::vector<i64> mat(static_cast<std::size_t>(d) * d);
  int shifts = 0;
  for (int r = 0; r < d; ++r) {
    check_same_dim(alg, v[r]);
    shifts += v[r].shift;
    for (int c = 0; c < d; ++c) mat[r * d + c] = v[r].coords[c];
  }
  const auto val = padic::det_valuation(std::move(mat), d, alg.prime(), alg.precision());
  if (!val) return 0.0;
  return std::pow(static_cast<double>(alg.prime()), -(*val - shifts));
}

}  // namespace dlab
