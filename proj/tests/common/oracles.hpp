#pragma once

// Brute-force reference counts shared by the unit and acceptance tests.
// These enumerate tuples directly and use only Element-level arithmetic, so
// they exercise none of the hashing/sorting machinery of the engines.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "core/algebra.hpp"
#include "core/dset.hpp"
#include "core/setops.hpp"

namespace oracle {

using dlab::Algebra;
using dlab::DSet;
using dlab::Element;
using dlab::i128;
using dlab::i64;

inline std::vector<i64> row(const dlab::PointSet& a, std::size_t i) {
  auto p = a.point(i);
  return {p.begin(), p.end()};
}

inline i64 mod_reduce(i128 v, i64 mod) {
  i128 r = v % mod;
  if (r < 0) r += mod;
  return static_cast<i64>(r);
}

inline i128 half_away(i128 v, int s) {
  if (s == 0) return v;
  const i128 h = i128{1} << (s - 1);
  return v >= 0 ? (v + h) >> s : -((-v + h) >> s);
}

// Exact product of two coordinate vectors in C or R (units 2^-2m), written
// out by hand rather than through the structure table.
inline std::vector<i128> real_mul_raw(int d, const std::vector<i64>& x, const std::vector<i64>& y) {
  if (d == 1) return {static_cast<i128>(x[0]) * y[0]};
  if (d == 2) {
    return {static_cast<i128>(x[0]) * y[0] - static_cast<i128>(x[1]) * y[1],
            static_cast<i128>(x[0]) * y[1] + static_cast<i128>(x[1]) * y[0]};
  }
  // Hamilton product (a1 + b1 i + c1 j + d1 k)(a2 + b2 i + c2 j + d2 k).
  const i128 a1 = x[0], b1 = x[1], c1 = x[2], d1 = x[3];
  const i128 a2 = y[0], b2 = y[1], c2 = y[2], d2 = y[3];
  return {a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2, a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
          a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2, a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2};
}

inline std::uint64_t energy(const DSet& a, const DSet& b) {
  const bool real = a.algebra().base() == dlab::Base::Real;
  const i64 mod = real ? 0 : a.modulus();
  std::uint64_t e = 0;
  const int d = a.dim();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t l = 0; l < b.size(); ++l) {
          bool eq = true;
          for (int c = 0; c < d && eq; ++c) {
            const i128 lhs = static_cast<i128>(a.point(i)[c]) + b.point(j)[c];
            const i128 rhs = static_cast<i128>(a.point(k)[c]) + b.point(l)[c];
            eq = real ? lhs == rhs : mod_reduce(lhs - rhs, mod) == 0;
          }
          e += eq;
        }
  return e;
}

// Same-cell quintuple count. Real sets only use R and C here; Padic sets
// must have radius exponent 0.
inline std::uint64_t quintuple(const DSet& a, const DSet& x, bool symmetric) {
  const Algebra& alg = a.algebra();
  const int d = a.dim();
  const int m = a.scale_exp();
  const bool real = alg.base() == dlab::Base::Real;
  const i64 mod = real ? 0 : alg.scale();
  std::uint64_t total = 0;
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    std::vector<std::vector<i64>> xb(a.size());
    for (std::size_t b = 0; b < a.size(); ++b) {
      if (real) {
        const auto raw = real_mul_raw(d, row(x, xi), row(a, b));
        for (int c = 0; c < d; ++c) xb[b].push_back(static_cast<i64>(half_away(raw[c], m)));
      } else {
        xb[b] = dlab::mul(alg, Element{row(x, xi), 0}, Element{row(a, b), 0}).coords;
      }
    }
    for (std::size_t ia = 0; ia < a.size(); ++ia)
      for (std::size_t ib = 0; ib < a.size(); ++ib)
        for (std::size_t ic = 0; ic < a.size(); ++ic)
          for (std::size_t id = 0; id < a.size(); ++id) {
            bool eq = true;
            for (int c = 0; c < d && eq; ++c) {
              const i128 lhs = static_cast<i128>(a.point(ia)[c]) + xb[ib][c];
              const i128 rhs = static_cast<i128>(a.point(ic)[c]) +
                               (symmetric ? xb[id][c] : -static_cast<i128>(xb[id][c]));
              eq = real ? lhs == rhs : mod_reduce(lhs - rhs, mod) == 0;
            }
            total += eq;
          }
  }
  return total;
}

// #{(a1,a2,a3,a4) : round(a1 q + a3 p) == round(a2 q + a4 p)}; p, q have
// shift 0 and the set radius exponent 0 when Padic.
inline std::uint64_t quadruple(const DSet& a, const Element& p, const Element& q) {
  const Algebra& alg = a.algebra();
  const int d = a.dim();
  const int m = a.scale_exp();
  const bool real = alg.base() == dlab::Base::Real;
  const std::size_t n = a.size();
  std::vector<std::vector<i64>> val(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (real) {
        const auto r1 = real_mul_raw(d, row(a, i), q.coords);
        const auto r2 = real_mul_raw(d, row(a, j), p.coords);
        for (int c = 0; c < d; ++c) val[i * n + j].push_back(static_cast<i64>(half_away(r1[c] + r2[c], m)));
      } else {
        val[i * n + j] = dlab::add(alg, dlab::mul(alg, Element{row(a, i), 0}, q),
                                   dlab::mul(alg, Element{row(a, j), 0}, p))
                             .coords;
      }
    }
  std::uint64_t total = 0;
  for (std::size_t a1 = 0; a1 < n; ++a1)
    for (std::size_t a2 = 0; a2 < n; ++a2)
      for (std::size_t a3 = 0; a3 < n; ++a3)
        for (std::size_t a4 = 0; a4 < n; ++a4) total += val[a1 * n + a3] == val[a2 * n + a4];
  return total;
}

// Quotient set and lexicographically smallest witnesses by direct scan.
struct QuotientScan {
  std::set<std::vector<i64>> cells;
  std::map<std::vector<i64>, std::array<std::size_t, 4>> witness;
};

inline bool far_apart(const DSet& a, std::size_t c, std::size_t d, int rho_exp) {
  const Algebra& alg = a.algebra();
  const int m = a.scale_exp();
  if (alg.base() == dlab::Base::Real) {
    i128 n2 = 0;
    for (int k = 0; k < a.dim(); ++k) {
      const i128 v = static_cast<i128>(a.point(c)[k]) - a.point(d)[k];
      n2 += v * v;
    }
    return n2 > (i128{1} << (2 * (m - rho_exp)));
  }
  int v = m + a.radius_exp();
  for (int k = 0; k < a.dim(); ++k) {
    i64 diff = mod_reduce(static_cast<i128>(a.point(c)[k]) - a.point(d)[k], a.modulus());
    int vk = 0;
    if (diff == 0) {
      vk = m + a.radius_exp();
    } else {
      while (diff % alg.prime() == 0) {
        diff /= alg.prime();
        ++vk;
      }
    }
    v = std::min(v, vk);
  }
  return v - a.radius_exp() < rho_exp;
}

// Round-half-away of num / den, den > 0.
inline i64 div_half_away(i128 num, i128 den) {
  const i128 q = (2 * (num < 0 ? -num : num) + den) / (2 * den);
  return static_cast<i64>(num < 0 ? -q : q);
}

// u v^-1 (Left) or v^-1 u (Right) on the grid 2^-delta_exp, via
// v^-1 = conj(v) / |v|^2.
inline std::vector<i64> real_quotient_cell(int d, int delta_exp, const std::vector<i64>& u,
                                           const std::vector<i64>& v, dlab::Side side) {
  std::vector<i64> vc = v;
  for (int k = 1; k < d; ++k) vc[k] = -vc[k];
  const auto raw = side == dlab::Side::Left ? real_mul_raw(d, u, vc) : real_mul_raw(d, vc, u);
  i128 n2 = 0;
  for (i64 c : v) n2 += static_cast<i128>(c) * c;
  std::vector<i64> out(d);
  for (int k = 0; k < d; ++k) out[k] = div_half_away(raw[k] * (i128{1} << delta_exp), n2);
  return out;
}

inline QuotientScan quotient(const DSet& a, int rho_exp, dlab::Side side, int out_radius_exp) {
  QuotientScan out;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          if (!far_apart(a, k, l, rho_exp)) continue;
          std::vector<i64> u(a.dim()), v(a.dim());
          for (int c = 0; c < a.dim(); ++c) {
            u[c] = a.point(i)[c] - a.point(j)[c];
            v[c] = a.point(k)[c] - a.point(l)[c];
          }
          if (a.algebra().base() == dlab::Base::Padic) {
            for (int c = 0; c < a.dim(); ++c) {
              u[c] = mod_reduce(u[c], a.modulus());
              v[c] = mod_reduce(v[c], a.modulus());
            }
          }
          auto cell = a.algebra().base() == dlab::Base::Real
                          ? real_quotient_cell(a.dim(), a.scale_exp() - 3 * rho_exp, u, v, side)
                          : dlab::quotient_cell(a.algebra(), a.scale_exp(), a.radius_exp(), u, v,
                                                rho_exp, out_radius_exp, side);
          if (out.cells.insert(cell).second) out.witness[cell] = {i, j, k, l};
        }
  return out;
}

}  // namespace oracle
