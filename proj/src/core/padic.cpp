#include "core/padic.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "core/error.hpp"

namespace dlab::padic {

i64 ipow(i64 base, int e) {
  constexpr i64 kLimit = i64{1} << 62;
  i64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kLimit / base) {
      fail(Errc::RangeError, "integer power " + std::to_string(base) + "^" +
                                 std::to_string(e) + " exceeds 2^62");
    }
    r *= base;
  }
  return r;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

int valuation(i64 x, i64 p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

i64 inverse_mod(i64 a, i64 modulus) {
  i128 old_r = reduce(a, modulus), r = modulus;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) fail(Errc::DivisionByNegligible, "element is not a unit");
  return reduce(old_s, modulus);
}

namespace {

using Poly = std::vector<i64>;

// Remainder of f modulo a monic g over F_p; result has deg(g) coefficients.
Poly poly_rem(Poly f, const Poly& g, i64 p) {
  const std::size_t dg = g.size() - 1;
  for (auto& c : f) c = reduce(c, p);
  for (std::size_t top = f.size(); top-- > dg;) {
    const i64 lead = f[top];
    if (lead == 0) continue;
    const std::size_t shift = top - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = reduce(f[shift + i] - static_cast<i128>(lead) * g[i], p);
    }
  }
  f.resize(dg);
  return f;
}

}  // namespace

bool is_irreducible(const std::vector<i64>& poly, i64 p) {
  Poly f = poly;
  for (auto& c : f) c = reduce(c, p);
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  // Make monic so trial division only needs monic candidates.
  const i64 inv_lead = inverse_mod(f.back(), p);
  for (auto& c : f) c = mulmod(c, inv_lead, p);
  for (int e = 1; e <= deg / 2; ++e) {
    const i64 count = ipow(p, e);
    for (i64 code = 0; code < count; ++code) {
      Poly g(e + 1, 0);
      i64 rest = code;
      for (int i = 0; i < e; ++i) {
        g[i] = rest % p;
        rest /= p;
      }
      g[e] = 1;
      const Poly r = poly_rem(f, g, p);
      if (std::all_of(r.begin(), r.end(), [](i64 c) { return c == 0; })) {
        return false;
      }
    }
  }
  return true;
}

std::vector<i64> smallest_irreducible(i64 p, int d) {
  if (d == 1) return {0, 1};
  const i64 count = ipow(p, d);
  for (i64 code = 0; code < count; ++code) {
    Poly f(d + 1, 0);
    i64 rest = code;
    for (int i = 0; i < d; ++i) {
      f[i] = rest % p;
      rest /= p;
    }
    f[d] = 1;
    if (is_irreducible(f, p)) return f;
  }
  fail(Errc::ReduciblePoly, "no irreducible polynomial found");
}

std::optional<int> det_valuation(std::vector<i64> mat, int n, i64 p, int k) {
  const i64 modulus = ipow(p, k);
  for (auto& x : mat) x = reduce(x, modulus);
  std::vector<bool> row_used(n, false), col_used(n, false);
  int total = 0;
  for (int step = 0; step < n; ++step) {
    int best_v = k, br = -1, bc = -1;
    for (int r = 0; r < n; ++r) {
      if (row_used[r]) continue;
      for (int c = 0; c < n; ++c) {
        if (col_used[c]) continue;
        const int v = valuation(mat[r * n + c], p, k);
        if (v < best_v) {
          best_v = v;
          br = r;
          bc = c;
        }
      }
    }
    if (br < 0) return std::nullopt;
    total += best_v;
    const i64 scale = ipow(p, best_v);
    const i64 unit_inv =
        inverse_mod(mat[br * n + bc] / scale, modulus);
    for (int r = 0; r < n; ++r) {
      if (row_used[r] || r == br) continue;
      const i64 entry = mat[r * n + bc];
      if (entry == 0) continue;
      const i64 factor = mulmod(entry / scale, unit_inv, modulus);
      for (int c = 0; c < n; ++c) {
        mat[r * n + c] = reduce(
            mat[r * n + c] - static_cast<i128>(factor) * mat[br * n + c],
            modulus);
      }
    }
    row_used[br] = true;
    col_used[bc] = true;
  }
  if (total >= k) return std::nullopt;
  return total;
}

std::optional<std::vector<i64>> solve_unimodular(std::vector<i64> mat,
                                                 std::vector<i64> rhs, int n,
                                                 i64 p, int k) {
  const i64 modulus = ipow(p, k);
  for (auto& x : mat) x = reduce(x, modulus);
  for (auto& x : rhs) x = reduce(x, modulus);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (mat[r * n + col] % p != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(mat[pivot * n + c], mat[col * n + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    const i64 inv = inverse_mod(mat[col * n + col], modulus);
    for (int c = 0; c < n; ++c) mat[col * n + c] = mulmod(mat[col * n + c], inv, modulus);
    rhs[col] = mulmod(rhs[col], inv, modulus);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const i64 factor = mat[r * n + col];
      if (factor == 0) continue;
      for (int c = 0; c < n; ++c) {
        mat[r * n + c] = reduce(
            mat[r * n + c] - static_cast<i128>(factor) * mat[col * n + c], modulus);
      }
      rhs[r] = reduce(rhs[r] - static_cast<i128>(factor) * rhs[col], modulus);
    }
  }
  return rhs;
}

}  // namespace dlab::padic
