#include "core/setops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <unordered_map>

#include "core/kernels.hpp"

namespace dlab {

namespace {

std::size_t g_budget_override = 0;

void check_compatible(const PointSet& a, const PointSet& b) {
  if (!a.algebra().same_kind(b.algebra())) {
    fail(Errc::AlgebraMismatch, "operands live in different algebras (" + a.algebra().name() +
                                    " vs " + b.algebra().name() + ")");
  }
  if (a.scale_exp() != b.scale_exp()) {
    fail(Errc::ScaleMismatch, "operands have different scale exponents (" +
                                  std::to_string(a.scale_exp()) + " vs " +
                                  std::to_string(b.scale_exp()) + ")");
  }
}

Algebra at_precision(const Algebra& alg, int m) {
  return alg.precision() == m ? alg : alg.with_precision(m);
}

// Residues of `flat` (radius exponent r) rewritten for radius exponent R >= r.
std::vector<i64> lift_radius(const PointSet& a, int r_target) {
  const i64 p = a.algebra().prime();
  const i64 factor = padic::ipow(p, r_target - a.radius_exp());
  const i64 mod = padic::ipow(p, a.scale_exp() + r_target);
  std::vector<i64> out(a.flat());
  if (factor != 1) {
    for (auto& c : out) c = padic::mulmod(c, factor, mod);
  }
  return out;
}

i64 max_abs(std::span<const i64> flat) {
  i64 best = 0;
  for (i64 c : flat) best = std::max(best, c < 0 ? -c : c);
  return best;
}

std::vector<i64> pairwise_sum(std::span<const i64> a, std::span<const i64> b, int d, int sign,
                              const kernels::Box* box, std::size_t budget) {
  kernels::RowAccumulator acc(d, budget);
  std::vector<i64> row(d);
  const std::size_t na = a.size() / d, nb = b.size() / d;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (int k = 0; k < d; ++k) row[k] = a[i * d + k] + sign * b[j * d + k];
      if (box && !box->contains(row)) continue;
      acc.push(row);
    }
  }
  return acc.finish();
}

// Real {a + sign b}, optionally restricted to a box of grid coordinates.
std::vector<i64> real_sum(const DSet& a, const DSet& b, int sign, const kernels::Box* window) {
  const int d = a.dim();
  const std::size_t budget = point_budget();
  if (a.empty() || b.empty()) return {};
  kernels::Box box = kernels::bounding_box(a.flat(), d);
  const kernels::Box bb = kernels::bounding_box(b.flat(), d);
  for (int j = 0; j < d; ++j) {
    const i64 lo = sign > 0 ? bb.lo[j] : -bb.hi[j];
    const i64 hi = sign > 0 ? bb.hi[j] : -bb.lo[j];
    box.lo[j] += lo;
    box.hi[j] += hi;
    if (window) {
      box.lo[j] = std::max(box.lo[j], window->lo[j]);
      box.hi[j] = std::min(box.hi[j], window->hi[j]);
    }
  }
  if (box.volume() == 0) return {};
  const double pairs = static_cast<double>(a.size()) * static_cast<double>(b.size());
  if (pairs >= 65536.0 && kernels::dense_feasible(box)) {
    return kernels::dense_sum(a.flat(), b.flat(), d, sign, box, budget);
  }
  return pairwise_sum(a.flat(), b.flat(), d, sign, window ? &box : nullptr, budget);
}

DSet padic_sum(const DSet& a, const DSet& b, int sign) {
  const int r = std::max(a.radius_exp(), b.radius_exp());
  const int d = a.dim();
  const i64 mod = padic::ipow(a.algebra().prime(), a.scale_exp() + r);
  const auto fa = lift_radius(a, r);
  const auto fb = lift_radius(b, r);
  kernels::RowAccumulator acc(d, point_budget());
  std::vector<i64> row(d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      for (int k = 0; k < d; ++k) {
        row[k] = padic::reduce(static_cast<i128>(fa[i * d + k]) + sign * fb[j * d + k], mod);
      }
      acc.push(row);
    }
  }
  return DSet(a.algebra_ptr(), a.scale_exp(), r, acc.finish());
}

DSet add_sets(const DSet& a, const DSet& b, int sign, const kernels::Box* window) {
  check_compatible(a, b);
  if (a.algebra().base() == Base::Padic) return padic_sum(a, b, sign);
  return DSet::fit(a.algebra_ptr(), a.scale_exp(), std::max(a.radius_exp(), b.radius_exp()),
                   real_sum(a, b, sign, window));
}

// Strip common factors of p from a shifted element.
void normalize_shift(Element& e, i64 p) {
  while (e.shift > 0 &&
         std::all_of(e.coords.begin(), e.coords.end(), [p](i64 c) { return c % p == 0; })) {
    for (auto& c : e.coords) c /= p;
    --e.shift;
  }
}

// Stored residues p^r * value mod p^(m + r) for a shifted element.
std::vector<i64> padic_point(const Element& e, i64 p, int m, int r) {
  if (e.shift > r) {
    fail(Errc::RangeError, "value outside the ball B(0, p^" + std::to_string(r) + ")");
  }
  const i64 mod = padic::ipow(p, m + r);
  const i64 factor = padic::ipow(p, r - e.shift);
  std::vector<i64> out(e.coords.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = padic::mulmod(e.coords[j], factor, mod);
  return out;
}

}  // namespace

std::size_t point_budget() {
  if (g_budget_override) return g_budget_override;
  if (const char* env = std::getenv("DLAB_BUDGET_POINTS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

void set_point_budget(std::size_t points) { g_budget_override = points; }

Algebra working_algebra(const PointSet& a) {
  const int m = a.algebra().base() == Base::Padic ? a.scale_exp() + a.radius_exp()
                                                  : a.scale_exp();
  return at_precision(a.algebra(), m);
}

Element element_of(const PointSet& a, std::span<const i64> point) {
  Element e;
  e.coords.assign(point.begin(), point.end());
  if (a.algebra().base() == Base::Padic) e.shift = a.radius_exp();
  return e;
}

DSet sumset(const DSet& a, const DSet& b) { return add_sets(a, b, +1, nullptr); }

DSet difference_set(const DSet& a, const DSet& b) { return add_sets(a, b, -1, nullptr); }

DSet product_set(const DSet& a, const DSet& b, Side side) {
  check_compatible(a, b);
  const int d = a.dim();
  const int m = a.scale_exp();
  kernels::RowAccumulator acc(d, point_budget());
  std::vector<i128> raw(d);
  std::vector<i64> row(d);
  auto multiply = [&](const Algebra& alg, std::span<const i64> x, std::span<const i64> y,
                      i64 mod) {
    if (side == Side::Left) {
      mul_coords(alg, x, y, raw, mod);
    } else {
      mul_coords(alg, y, x, raw, mod);
    }
  };
  if (a.algebra().base() == Base::Real) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        multiply(a.algebra(), a.point(i), b.point(j), 0);
        for (int k = 0; k < d; ++k) row[k] = static_cast<i64>(round_shift(raw[k], m));
        acc.push(row);
      }
    }
    return DSet::fit(a.algebra_ptr(), m, a.radius_exp() + b.radius_exp(), acc.finish());
  }
  const int r = a.radius_exp() + b.radius_exp();
  const Algebra work = at_precision(a.algebra(), m + r);
  const i64 mod = work.scale();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      multiply(work, a.point(i), b.point(j), mod);
      for (int k = 0; k < d; ++k) row[k] = static_cast<i64>(raw[k]);
      acc.push(row);
    }
  }
  return DSet(a.algebra_ptr(), m, r, acc.finish());
}

DSet iterated(const DSet& a, int n_sum, int n_prod) {
  if (n_sum < 1 || n_prod < 1) fail(Errc::InvalidArgument, "n_sum and n_prod must be >= 1");
  if (a.empty()) return a;
  DSet power = a;
  for (int k = 1; k < n_prod; ++k) power = product_set(power, a, Side::Left);
  const DSet diff = difference_set(power, power);
  if (a.algebra().base() == Base::Padic) {
    DSet acc = diff;
    for (int k = 1; k < n_sum; ++k) acc = sumset(acc, diff);
    return intersect_unit_ball(acc);
  }
  // A partial sum with `remaining` summands left can only reach the unit
  // ball if every coordinate is within 2^m + remaining * max|D|.
  const int d = a.dim();
  const i64 unit = i64{1} << a.scale_exp();
  const i64 step = max_abs(diff.flat());
  DSet acc = diff;
  for (int k = 1; k < n_sum; ++k) {
    const i64 reach = unit + static_cast<i64>(n_sum - 1 - k) * step;
    kernels::Box window{std::vector<i64>(d, -reach), std::vector<i64>(d, reach)};
    try {
      acc = add_sets(acc, diff, +1, &window);
    } catch (const Error& e) {
      if (e.code() != Errc::BudgetExceeded) throw;
      fail(Errc::BudgetExceeded, std::string(e.what()) + "; partial sizes |A^(n)|=" +
                                     std::to_string(power.size()) + " |D|=" +
                                     std::to_string(diff.size()) + " |partial|=" +
                                     std::to_string(acc.size()) + " at summand " +
                                     std::to_string(k + 1));
    }
  }
  return intersect_unit_ball(acc);
}

DSet scalar_image(const Element& x, const DSet& a, Side side) {
  const Algebra& alg = a.algebra();
  if (x.coords.size() != static_cast<std::size_t>(alg.dim())) {
    fail(Errc::AlgebraMismatch, "scalar is not an element of " + alg.name());
  }
  const int d = a.dim();
  const int m = a.scale_exp();
  std::vector<i128> raw(d);
  std::vector<i64> out;
  out.reserve(a.flat().size());
  if (alg.base() == Base::Real) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (side == Side::Left) {
        mul_coords(alg, x.coords, a.point(i), raw, 0);
      } else {
        mul_coords(alg, a.point(i), x.coords, raw, 0);
      }
      for (int k = 0; k < d; ++k) out.push_back(static_cast<i64>(round_shift(raw[k], alg.precision())));
    }
    return DSet::fit(a.algebra_ptr(), m, a.radius_exp(), std::move(out));
  }
  const int r = a.radius_exp() + x.shift;
  const Algebra work = at_precision(alg, m + r);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (side == Side::Left) {
      mul_coords(work, x.coords, a.point(i), raw, work.scale());
    } else {
      mul_coords(work, a.point(i), x.coords, raw, work.scale());
    }
    for (int k = 0; k < d; ++k) out.push_back(static_cast<i64>(raw[k]));
  }
  return DSet(a.algebra_ptr(), m, r, std::move(out));
}

PairSet cartesian(const DSet& a, const DSet& b) {
  check_compatible(a, b);
  const int d = a.dim();
  const int r = std::max(a.radius_exp(), b.radius_exp());
  std::vector<i64> fa = a.flat(), fb = b.flat();
  if (a.algebra().base() == Base::Padic) {
    fa = lift_radius(a, r);
    fb = lift_radius(b, r);
  }
  std::vector<i64> flat;
  flat.reserve(a.size() * b.size() * 2 * d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      flat.insert(flat.end(), fa.begin() + i * d, fa.begin() + (i + 1) * d);
      flat.insert(flat.end(), fb.begin() + j * d, fb.begin() + (j + 1) * d);
    }
  }
  return PairSet(a.algebra_ptr(), a.scale_exp(), r, std::move(flat));
}

DSet project(const Element& x, const PairSet& g) {
  const Algebra& alg = g.algebra();
  if (x.coords.size() != static_cast<std::size_t>(alg.dim())) {
    fail(Errc::AlgebraMismatch, "direction is not an element of " + alg.name());
  }
  const int d = g.dim();
  const int m = g.scale_exp();
  std::vector<i128> raw(d);
  std::vector<i64> out;
  out.reserve(g.size() * d);
  if (alg.base() == Base::Real) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      mul_coords(alg, x.coords, g.second(i), raw, 0);
      const auto first = g.first(i);
      for (int k = 0; k < d; ++k) {
        out.push_back(first[k] + static_cast<i64>(round_shift(raw[k], alg.precision())));
      }
    }
    return DSet::fit(g.algebra_ptr(), m, g.radius_exp(), std::move(out));
  }
  const int r = g.radius_exp() + x.shift;
  const Algebra work = at_precision(alg, m + r);
  const i64 mod = work.scale();
  const i64 lift = padic::ipow(alg.prime(), x.shift);
  for (std::size_t i = 0; i < g.size(); ++i) {
    mul_coords(work, x.coords, g.second(i), raw, mod);
    const auto first = g.first(i);
    for (int k = 0; k < d; ++k) {
      out.push_back(padic::reduce(static_cast<i128>(first[k]) * lift + raw[k], mod));
    }
  }
  return DSet(g.algebra_ptr(), m, r, std::move(out));
}

std::vector<i64> quotient_cell(const Algebra& alg, int m, int r_in, std::span<const i64> u,
                               std::span<const i64> v, int rho_exp, int out_radius_exp,
                               Side side) {
  const int d = alg.dim();
  const int delta_exp = m - 3 * rho_exp;
  std::vector<i64> out(d);
  if (alg.base() == Base::Real) {
    std::vector<i64> vc(v.begin(), v.end());
    for (int j = 1; j < d; ++j) vc[j] = -vc[j];
    std::vector<i128> raw(d);
    if (side == Side::Left) {
      mul_coords(alg, u, vc, raw, 0);
    } else {
      mul_coords(alg, vc, u, raw, 0);
    }
    const i128 n2 = norm2_units(v);
    for (int k = 0; k < d; ++k) {
      out[k] = static_cast<i64>(round_div(raw[k] * (i128{1} << delta_exp), n2));
    }
    return out;
  }
  const Algebra work = at_precision(alg, m + r_in);
  Element eu{std::vector<i64>(u.begin(), u.end()), r_in};
  Element ev{std::vector<i64>(v.begin(), v.end()), r_in};
  const Element vi = inv(work, ev);
  Element q = side == Side::Left ? mul(work, eu, vi) : mul(work, vi, eu);
  normalize_shift(q, alg.prime());
  return padic_point(q, alg.prime(), delta_exp, out_radius_exp);
}

QuotientSet quotient_set(const DSet& a, int rho_exp, Side side) {
  const Algebra& alg = a.algebra();
  const int m = a.scale_exp();
  const int d = a.dim();
  const int r_in = a.radius_exp();
  if (rho_exp < 0 || 3 * rho_exp >= m) {
    fail(Errc::ScaleOutOfRange, "quotient scale needs 0 <= 3 rho_exp < m");
  }
  if (a.empty()) fail(Errc::EmptyInput, "quotient set of an empty set");
  const std::size_t n = a.size();

  // Distinct differences, each with its smallest (a, b) witness.
  struct Diff {
    std::size_t row;  // offset into `vals`
    std::size_t ia, ib;
  };
  std::vector<i64> vals;
  vals.reserve(n * n * d);
  const i64 mod = alg.base() == Base::Padic ? a.modulus() : 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto pa = a.point(i), pb = a.point(j);
      for (int k = 0; k < d; ++k) {
        vals.push_back(mod ? padic::reduce(static_cast<i128>(pa[k]) - pb[k], mod)
                           : pa[k] - pb[k]);
      }
    }
  }
  std::vector<std::size_t> order(n * n);
  std::iota(order.begin(), order.end(), 0);
  auto row_of = [&](std::size_t t) { return std::span<const i64>(vals.data() + t * d, d); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto rx = row_of(x), ry = row_of(y);
    return std::lexicographical_compare(rx.begin(), rx.end(), ry.begin(), ry.end());
  });
  std::vector<Diff> diffs;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (t > 0) {
      const auto cur = row_of(order[t]), prev = row_of(order[t - 1]);
      if (std::equal(cur.begin(), cur.end(), prev.begin())) continue;
    }
    diffs.push_back({order[t] * d, order[t] / n, order[t] % n});
  }

  auto admissible = [&](std::span<const i64> v) {
    if (alg.base() == Base::Real) {
      return norm2_units(v) > (i128{1} << (2 * (m - rho_exp)));
    }
    int val = m + r_in;
    for (i64 c : v) val = std::min(val, padic::valuation(c, alg.prime(), m + r_in));
    return val - r_in < rho_exp;
  };
  std::vector<std::size_t> denominators;
  for (std::size_t t = 0; t < diffs.size(); ++t) {
    if (admissible(std::span<const i64>(vals.data() + diffs[t].row, d))) denominators.push_back(t);
  }
  if (denominators.empty()) {
    fail(Errc::NoAdmissiblePairs, "no pair c, d with |c - d| > rho");
  }

  // Padic numerators only matter modulo p^(R + m - 2 rho - 1): an admissible
  // denominator has |v^-1| <= p^(rho-1), so congruent numerators share a
  // Delta-cell. Each class keeps its smallest (a, b) witness.
  std::vector<Diff> numerators;
  if (alg.base() == Base::Padic) {
    const i64 cmod = padic::ipow(alg.prime(), std::max(0, r_in + m - 2 * rho_exp - 1));
    std::vector<std::pair<std::vector<i64>, std::size_t>> keyed;
    keyed.reserve(diffs.size());
    for (std::size_t t = 0; t < diffs.size(); ++t) {
      std::vector<i64> key(d);
      for (int k = 0; k < d; ++k) key[k] = vals[diffs[t].row + k] % cmod;
      keyed.emplace_back(std::move(key), t);
    }
    std::sort(keyed.begin(), keyed.end(), [&](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return std::pair(diffs[x.second].ia, diffs[x.second].ib) <
             std::pair(diffs[y.second].ia, diffs[y.second].ib);
    });
    for (std::size_t t = 0; t < keyed.size(); ++t) {
      if (t == 0 || keyed[t].first != keyed[t - 1].first) numerators.push_back(diffs[keyed[t].second]);
    }
  } else {
    numerators = diffs;
  }

  const double work = static_cast<double>(numerators.size()) * denominators.size();
  if (work > 10.0 * static_cast<double>(point_budget())) {
    fail(Errc::BudgetExceeded, "quotient set needs " + std::to_string(static_cast<long long>(work)) +
                                   " divisions, above the budget");
  }

  const int r_out = rho_exp + r_in;
  // Distinct cells (d <= 4 coordinates) with their smallest witness.
  using Key = std::array<i64, 4>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (i64 c : k) h = (h ^ static_cast<std::uint64_t>(c)) * 0xff51afd7ed558ccdull;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };
  std::unordered_map<Key, std::array<std::size_t, 4>, KeyHash> found;
  auto emit = [&found](const Key& cell, const std::array<std::size_t, 4>& w) {
    auto [it, fresh] = found.try_emplace(cell, w);
    if (!fresh && w < it->second) it->second = w;
  };
  Key key{};
  if (alg.base() == Base::Padic) {
    const Algebra w = at_precision(alg, m + r_in);
    std::vector<Element> inverses;
    inverses.reserve(denominators.size());
    for (std::size_t t : denominators) {
      const i64* row = vals.data() + diffs[t].row;
      inverses.push_back(inv(w, Element{std::vector<i64>(row, row + d), r_in}));
    }
    for (const auto& u : numerators) {
      const Element eu{std::vector<i64>(vals.data() + u.row, vals.data() + u.row + d), r_in};
      for (std::size_t k = 0; k < denominators.size(); ++k) {
        Element q = side == Side::Left ? mul(w, eu, inverses[k]) : mul(w, inverses[k], eu);
        normalize_shift(q, alg.prime());
        const auto cell = padic_point(q, alg.prime(), m - 3 * rho_exp, r_out);
        std::copy(cell.begin(), cell.end(), key.begin());
        const Diff& v = diffs[denominators[k]];
        emit(key, {u.ia, u.ib, v.ia, v.ib});
      }
    }
  } else {
    // Same rounding as quotient_cell, with conj(v), |v|^2 hoisted and 64-bit
    // division whenever raw * 2^Delta provably fits.
    const int delta_exp = m - 3 * rho_exp;
    i64 maxabs = 0;
    for (i64 c : vals) maxabs = std::max(maxabs, c < 0 ? -c : c);
    const bool narrow = static_cast<i128>(d) * maxabs * maxabs < (i128{1} << (60 - delta_exp));
    std::vector<i64> conj(denominators.size() * d);
    std::vector<i128> norms(denominators.size());
    for (std::size_t k = 0; k < denominators.size(); ++k) {
      const std::span<const i64> pv(vals.data() + diffs[denominators[k]].row, d);
      for (int j = 0; j < d; ++j) conj[k * d + j] = j == 0 ? pv[j] : -pv[j];
      norms[k] = norm2_units(pv);
    }
    std::vector<i128> raw(d);
    for (const auto& u : numerators) {
      const std::span<const i64> pu(vals.data() + u.row, d);
      for (std::size_t k = 0; k < denominators.size(); ++k) {
        const std::span<const i64> vc(conj.data() + k * d, d);
        if (side == Side::Left) {
          mul_coords(alg, pu, vc, raw, 0);
        } else {
          mul_coords(alg, vc, pu, raw, 0);
        }
        for (int j = 0; j < d; ++j) {
          if (narrow) {
            const i64 num = static_cast<i64>(raw[j]) * (i64{1} << delta_exp);
            const i64 den = static_cast<i64>(norms[k]);
            const i64 q = (2 * (num < 0 ? -num : num) + den) / (2 * den);
            key[j] = num < 0 ? -q : q;
          } else {
            key[j] = static_cast<i64>(round_div(raw[j] * (i128{1} << delta_exp), norms[k]));
          }
        }
        const Diff& v = diffs[denominators[k]];
        emit(key, {u.ia, u.ib, v.ia, v.ib});
      }
    }
  }
  std::vector<std::pair<Key, std::array<std::size_t, 4>>> sorted(found.begin(), found.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<i64> flat;
  std::vector<std::array<std::size_t, 4>> best;
  flat.reserve(sorted.size() * d);
  best.reserve(sorted.size());
  for (const auto& [cell, w] : sorted) {
    flat.insert(flat.end(), cell.begin(), cell.begin() + d);
    best.push_back(w);
  }
  const int delta_exp = m - 3 * rho_exp;
  QuotientSet q{alg.base() == Base::Real
                    ? DSet::fit(a.algebra_ptr(), delta_exp, r_out, std::move(flat))
                    : DSet(a.algebra_ptr(), delta_exp, r_out, std::move(flat)),
                rho_exp, side, std::move(best)};
  // Canonical order is preserved: flat was emitted in sorted cell order.
  return q;
}

LinearMap identity_map(const Algebra& alg) {
  return LinearMap{{alg.one(), alg.zero(), alg.zero(), alg.one()}};
}

LinearMap transpose(const LinearMap& l) {
  return LinearMap{{l.entry[0], l.entry[2], l.entry[1], l.entry[3]}};
}

double linear_map_det(const Algebra& alg, const LinearMap& l) {
  const int d = alg.dim();
  const int n = 2 * d;
  int smax = 0;
  for (const auto& e : l.entry) smax = std::max(smax, e.shift);
  const Algebra work = at_precision(alg, alg.precision() + smax);
  const i64 mod = alg.base() == Base::Padic ? work.scale() : 0;
  // Column (t, j): image of e_j placed in slot t.
  std::vector<i128> cols(static_cast<std::size_t>(n) * n);
  std::vector<i128> raw(d);
  for (int t = 0; t < 2; ++t) {
    for (int j = 0; j < d; ++j) {
      std::vector<i64> ej(d, 0);
      ej[j] = 1;
      for (int s = 0; s < 2; ++s) {
        const Element& e = l.entry[s * 2 + t];
        std::vector<i64> c = e.coords;
        if (mod) {
          const i64 lift = padic::ipow(alg.prime(), smax - e.shift);
          for (auto& x : c) x = padic::mulmod(x, lift, mod);
        }
        mul_coords(work, c, ej, raw, mod);
        for (int k = 0; k < d; ++k) cols[static_cast<std::size_t>(s * d + k) * n + t * d + j] = raw[k];
      }
    }
  }
  if (alg.base() == Base::Real) {
    std::vector<long double> a(cols.size());
    const long double unit = std::ldexp(1.0L, -alg.precision());
    for (std::size_t i = 0; i < cols.size(); ++i) a[i] = static_cast<long double>(cols[i]) * unit;
    long double det = 1;
    for (int col = 0; col < n; ++col) {
      int pivot = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::fabs(a[r * n + col]) > std::fabs(a[pivot * n + col])) pivot = r;
      }
      if (a[pivot * n + col] == 0) return 0.0;
      if (pivot != col) {
        for (int c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
        det = -det;
      }
      det *= a[col * n + col];
      for (int r = col + 1; r < n; ++r) {
        const long double f = a[r * n + col] / a[col * n + col];
        for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      }
    }
    return static_cast<double>(det);
  }
  std::vector<i64> mat(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) mat[i] = static_cast<i64>(cols[i]);
  const auto val = padic::det_valuation(std::move(mat), n, alg.prime(), work.precision());
  if (!val) return 0.0;
  return std::pow(static_cast<double>(alg.prime()), -(*val - n * smax));
}

namespace {

void check_map(const Algebra& alg, const LinearMap& l) {
  for (const auto& e : l.entry) {
    if (e.coords.size() != static_cast<std::size_t>(alg.dim())) {
      fail(Errc::AlgebraMismatch, "map entry is not an element of " + alg.name());
    }
  }
  const double det = std::fabs(linear_map_det(alg, l));
  const double floor = std::pow(static_cast<double>(alg.radix()), -(alg.precision() / 2));
  if (det < floor) fail(Errc::SingularMap, "linear map determinant below the inversion floor");
}

}  // namespace

PairSet apply_linear_map(const LinearMap& l, const PairSet& g) {
  const Algebra& alg = g.algebra();
  check_map(alg, l);
  const int d = g.dim();
  const int m = g.scale_exp();
  std::vector<i128> raw(d), acc(d);
  std::vector<i64> out;
  out.reserve(g.flat().size());
  if (alg.base() == Base::Real) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int s = 0; s < 2; ++s) {
        std::fill(acc.begin(), acc.end(), 0);
        for (int t = 0; t < 2; ++t) {
          mul_coords(alg, l.entry[s * 2 + t].coords, t == 0 ? g.first(i) : g.second(i), raw, 0);
          for (int k = 0; k < d; ++k) acc[k] += raw[k];
        }
        for (int k = 0; k < d; ++k) out.push_back(static_cast<i64>(round_shift(acc[k], alg.precision())));
      }
    }
    return PairSet::fit(g.algebra_ptr(), m, g.radius_exp(), std::move(out));
  }
  int smax = 0;
  for (const auto& e : l.entry) smax = std::max(smax, e.shift);
  const int r = g.radius_exp() + smax;
  const Algebra work = at_precision(alg, m + r);
  const i64 mod = work.scale();
  std::array<std::vector<i64>, 4> lifted;
  for (int e = 0; e < 4; ++e) {
    lifted[e] = l.entry[e].coords;
    const i64 lift = padic::ipow(alg.prime(), smax - l.entry[e].shift);
    for (auto& c : lifted[e]) c = padic::mulmod(c, lift, mod);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int s = 0; s < 2; ++s) {
      std::fill(acc.begin(), acc.end(), 0);
      for (int t = 0; t < 2; ++t) {
        mul_coords(work, lifted[s * 2 + t], t == 0 ? g.first(i) : g.second(i), raw, mod);
        for (int k = 0; k < d; ++k) acc[k] += raw[k];
      }
      for (int k = 0; k < d; ++k) out.push_back(padic::reduce(acc[k], mod));
    }
  }
  return PairSet(g.algebra_ptr(), m, r, std::move(out));
}

DSet apply_dual(const LinearMap& l, const DSet& x) {
  const Algebra& alg = x.algebra();
  check_map(alg, l);
  if (alg.base() == Base::Real && x.scale_exp() != alg.precision()) {
    fail(Errc::ScaleMismatch, "direction set scale differs from the algebra precision");
  }
  const Algebra work = working_algebra(x);
  const int m = x.scale_exp();
  std::vector<Element> images;
  images.reserve(x.size());
  int r_out = x.radius_exp();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Element ex = element_of(x, x.point(i));
    const Element den = add(work, l.entry[0], mul(work, l.entry[1], ex));
    const Element num = add(work, l.entry[2], mul(work, l.entry[3], ex));
    if (!invertible(work, den)) {
      fail(Errc::SingularMap, "direction " + std::to_string(i) + " maps outside the chart");
    }
    Element y = mul(work, inv(work, den), num);
    if (alg.base() == Base::Padic) {
      normalize_shift(y, alg.prime());
      r_out = std::max(r_out, y.shift);
    }
    images.push_back(std::move(y));
  }
  std::vector<i64> out;
  out.reserve(x.flat().size());
  for (const auto& y : images) {
    if (alg.base() == Base::Real) {
      out.insert(out.end(), y.coords.begin(), y.coords.end());
    } else {
      const auto pt = padic_point(y, alg.prime(), m, r_out);
      out.insert(out.end(), pt.begin(), pt.end());
    }
  }
  if (alg.base() == Base::Real) return DSet::fit(x.algebra_ptr(), m, x.radius_exp(), std::move(out));
  return DSet(x.algebra_ptr(), m, r_out, std::move(out));
}

}  // namespace dlab
