#include "core/energy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/setops.hpp"
#include "json.hpp"

namespace dlab {

namespace {

using json = nlohmann::json;

// Multiplicity of each distinct row, and for every input row the index of
// its class. Rows are sorted lexicographically; classes come out in order.
struct Classes {
  std::vector<i64> rows;        // distinct rows, sorted
  std::vector<count_t> size;    // per class
  std::vector<std::size_t> of;  // per input row
};

Classes classify(const std::vector<i64>& flat, int w) {
  const std::size_t n = flat.size() / w;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto row = [&](std::size_t t) { return flat.begin() + t * w; };
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return std::lexicographical_compare(row(x), row(x) + w, row(y), row(y) + w);
  });
  Classes c;
  c.of.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (t == 0 || !std::equal(row(idx[t]), row(idx[t]) + w, row(idx[t - 1]))) {
      c.rows.insert(c.rows.end(), row(idx[t]), row(idx[t]) + w);
      c.size.push_back(0);
    }
    ++c.size.back();
    c.of[idx[t]] = c.size.size() - 1;
  }
  return c;
}

count_t class_lookup(const Classes& c, int w, std::span<const i64> key) {
  std::size_t lo = 0, hi = c.size.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto it = c.rows.begin() + mid * w;
    if (std::lexicographical_compare(it, it + w, key.begin(), key.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < c.size.size() && std::equal(key.begin(), key.end(), c.rows.begin() + lo * w)) {
    return c.size[lo];
  }
  return 0;
}

// Sum of class_lookup over key + e, e in {-1,0,1}^w.
count_t neighbour_lookup(const Classes& c, int w, std::span<const i64> key) {
  std::vector<i64> probe(key.begin(), key.end());
  std::vector<int> off(w, -1);
  count_t total = 0;
  while (true) {
    for (int j = 0; j < w; ++j) probe[j] = key[j] + off[j];
    total += class_lookup(c, w, probe);
    int j = w - 1;
    while (j >= 0 && off[j] == 1) off[j--] = -1;
    if (j < 0) return total;
    ++off[j];
  }
}

void check_pair(const PointSet& a, const PointSet& b) {
  if (!a.algebra().same_kind(b.algebra())) {
    fail(Errc::AlgebraMismatch, "operands live in different algebras");
  }
  if (a.scale_exp() != b.scale_exp()) fail(Errc::ScaleMismatch, "operands have different scales");
}

void check_budget(double work, const char* what) {
  if (work > 100.0 * static_cast<double>(point_budget())) {
    fail(Errc::BudgetExceeded, std::string(what) + " exceeds the counting budget; use a smaller m");
  }
}

// Residues of a Padic set lifted to radius exponent r (multiplied by p^(r-R)).
std::vector<i64> lifted(const PointSet& a, int r, i64 mod) {
  const i64 f = padic::ipow(a.algebra().prime(), r - a.radius_exp());
  std::vector<i64> out(a.flat());
  for (auto& c : out) c = padic::mulmod(c, f, mod);
  return out;
}

void finish_bound(CountReport& rep) {
  rep.ratio = rep.bound > 0 ? static_cast<double>(rep.total) / rep.bound : 0.0;
}

}  // namespace

count_t additive_energy(const DSet& a, const DSet& b) {
  check_pair(a, b);
  const int d = a.dim();
  check_budget(static_cast<double>(a.size()) * b.size() / 10.0, "additive energy");
  std::vector<i64> sums;
  sums.reserve(a.size() * b.size() * d);
  if (a.algebra().base() == Base::Real) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        for (int k = 0; k < d; ++k) sums.push_back(a.point(i)[k] + b.point(j)[k]);
      }
    }
  } else {
    const int r = std::max(a.radius_exp(), b.radius_exp());
    const i64 mod = padic::ipow(a.algebra().prime(), a.scale_exp() + r);
    const auto fa = lifted(a, r, mod), fb = lifted(b, r, mod);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        for (int k = 0; k < d; ++k) {
          sums.push_back(padic::reduce(static_cast<i128>(fa[i * d + k]) + fb[j * d + k], mod));
        }
      }
    }
  }
  const Classes c = classify(sums, d);
  count_t e = 0;
  for (count_t s : c.size) e += s * s;
  return e;
}

CountReport quintuple_count_tv(const DSet& a, const DSet& x, int rho_exp, const TvOptions& opts) {
  check_pair(a, x);
  const int d = a.dim();
  const int m = a.scale_exp();
  const std::size_t n = a.size();
  check_budget(static_cast<double>(x.size()) * n * n * (opts.adjacent ? std::pow(3.0, d) : 1.0),
               "quintuple count");
  const bool real = a.algebra().base() == Base::Real;
  CountReport rep;
  rep.tolerance = opts.adjacent ? "same or adjacent cell after rounding each side once"
                                : (real ? "same cell after rounding each side once"
                                        : "same residue class");

  // Work in units where a and x b are integers: Real 2^-m; Padic residues
  // scaled by p^(R_A + R_X) mod p^(m + R_A + R_X).
  const int rs = real ? 0 : a.radius_exp() + x.radius_exp();
  const i64 mod = real ? 0 : padic::ipow(a.algebra().prime(), m + rs);
  const Algebra work = real ? a.algebra() : a.algebra().with_precision(m + rs);
  std::vector<i64> av = a.flat();
  if (!real) av = lifted(a, rs, mod);

  std::vector<i64> diffs;
  diffs.reserve(n * n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int k = 0; k < d; ++k) {
        const i64 v = av[i * d + k] - av[j * d + k];
        diffs.push_back(real ? v : padic::reduce(v, mod));
      }
    }
  }
  const Classes dc = classify(diffs, d);

  // |b - d| <= rho.
  std::vector<char> close(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto pb = a.point(i), pd = a.point(j);
      if (real) {
        std::vector<i64> diff(d);
        for (int k = 0; k < d; ++k) diff[k] = pb[k] - pd[k];
        close[i * n + j] = norm2_units(diff) <= (i128{1} << (2 * (m - rho_exp)));
      } else {
        const i64 amod = a.modulus();
        int val = m + a.radius_exp();
        for (int k = 0; k < d; ++k) {
          val = std::min(val, padic::valuation(padic::reduce(static_cast<i128>(pb[k]) - pd[k], amod),
                                               a.algebra().prime(), m + a.radius_exp()));
        }
        close[i * n + j] = val - a.radius_exp() >= rho_exp;
      }
    }
  }

  count_t near = 0, far = 0;
  std::vector<i128> raw(d);
  std::vector<i64> xb(n * d), key(d);
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    const auto px = x.point(xi);
    for (std::size_t i = 0; i < n; ++i) {
      mul_coords(work, px, a.point(i), raw, mod);
      for (int k = 0; k < d; ++k) {
        xb[i * d + k] = real ? static_cast<i64>(round_shift(raw[k], m)) : static_cast<i64>(raw[k]);
      }
    }
    for (std::size_t bi = 0; bi < n; ++bi) {
      for (std::size_t di = 0; di < n; ++di) {
        // a - c = -xb - xd (printed form) or -xb + xd (symmetric form).
        for (int k = 0; k < d; ++k) {
          const i64 v = -xb[bi * d + k] + (opts.symmetric ? xb[di * d + k] : -xb[di * d + k]);
          key[k] = real ? v : padic::reduce(v, mod);
        }
        const count_t c = (opts.adjacent && real) ? neighbour_lookup(dc, d, key)
                                                  : class_lookup(dc, d, key);
        (close[bi * n + di] ? near : far) += c;
      }
    }
  }
  rep.total = near + far;
  rep.breakdown = {{"|b-d|<=rho", near}, {"|b-d|>rho", far}};
  if (opts.t > 0) {
    const double expo = opts.s * (opts.t - opts.sigma + opts.eps) / opts.t;
    const double delta = std::pow(static_cast<double>(a.algebra().radix()), -m);
    rep.bound = std::pow(delta, expo) * std::pow(static_cast<double>(n), 3) * x.size();
    rep.bound_formula = "delta^(s(t-sigma+eps)/t) |A|^3 |X|";
  }
  finish_bound(rep);
  return rep;
}

CountReport quadruple_count_sparse(const DSet& a, const Element& p, const Element& q,
                                   const SparseOptions& opts) {
  const Algebra& alg = a.algebra();
  const int d = a.dim();
  const int m = a.scale_exp();
  const std::size_t n = a.size();
  if (p.coords.size() != static_cast<std::size_t>(d) || q.coords.size() != p.coords.size()) {
    fail(Errc::AlgebraMismatch, "p and q must be elements of " + alg.name());
  }
  if (!invertible(alg, q)) fail(Errc::DivisionByNegligible, "|q| below the inversion floor");
  check_budget(static_cast<double>(n) * n, "quadruple count");
  const bool real = alg.base() == Base::Real;
  CountReport rep;
  rep.tolerance = opts.adjacent ? "same or adjacent cell after rounding each side once"
                                : (real ? "same cell after rounding each side once"
                                        : "same residue class");

  // L(a1, a3) = a1 q + a3 p on the grid.
  std::vector<i64> vals(n * n * d);
  std::vector<i128> r1(d), r2(d);
  if (real) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        mul_coords(alg, a.point(i), q.coords, r1, 0);
        mul_coords(alg, a.point(j), p.coords, r2, 0);
        for (int k = 0; k < d; ++k) {
          vals[(i * n + j) * d + k] = static_cast<i64>(round_shift(r1[k] + r2[k], alg.precision()));
        }
      }
    }
  } else {
    const int smax = std::max(p.shift, q.shift);
    const int rs = a.radius_exp() + smax;
    const Algebra work = alg.with_precision(m + rs);
    const i64 mod = work.scale();
    std::vector<i64> cp = p.coords, cq = q.coords;
    for (auto& c : cp) c = padic::mulmod(c, padic::ipow(alg.prime(), smax - p.shift), mod);
    for (auto& c : cq) c = padic::mulmod(c, padic::ipow(alg.prime(), smax - q.shift), mod);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        mul_coords(work, a.point(i), cq, r1, mod);
        mul_coords(work, a.point(j), cp, r2, mod);
        for (int k = 0; k < d; ++k) {
          vals[(i * n + j) * d + k] = padic::reduce(r1[k] + r2[k], mod);
        }
      }
    }
  }
  const Classes cls = classify(vals, d);
  rep.image_size = cls.size.size();
  count_t total = 0;
  if (opts.adjacent && real) {
    for (std::size_t c = 0; c < cls.size.size(); ++c) {
      total += cls.size[c] *
               neighbour_lookup(cls, d, std::span<const i64>(cls.rows.data() + c * d, d));
    }
  } else {
    for (count_t s : cls.size) total += s * s;
  }
  rep.total = total;
  rep.cs_lower = std::pow(static_cast<double>(n), 4) / static_cast<double>(total);

  // Split by |a3 - a4| <= rho^2 (the case the argument forces).
  if (opts.rho_exp > 0 && !opts.adjacent) {
    std::vector<std::vector<std::size_t>> members(cls.size.size());
    for (std::size_t t = 0; t < n * n; ++t) members[cls.of[t]].push_back(t % n);
    count_t close = 0;
    for (const auto& mem : members) {
      for (std::size_t x : mem) {
        for (std::size_t y : mem) {
          const auto px = a.point(x), py = a.point(y);
          bool near = true;
          if (real) {
            std::vector<i64> diff(d);
            for (int k = 0; k < d; ++k) diff[k] = px[k] - py[k];
            near = norm2_units(diff) <= (i128{1} << (2 * (m - 2 * opts.rho_exp)));
          } else {
            int val = m + a.radius_exp();
            for (int k = 0; k < d; ++k) {
              val = std::min(val, padic::valuation(
                                      padic::reduce(static_cast<i128>(px[k]) - py[k], a.modulus()),
                                      alg.prime(), m + a.radius_exp()));
            }
            near = val - a.radius_exp() >= 2 * opts.rho_exp;
          }
          close += near;
        }
      }
    }
    rep.breakdown = {{"|a3-a4|<=rho^2", close}, {"|a3-a4|>rho^2", total - close}};
  } else {
    rep.breakdown = {{"all", total}};
  }
  if (opts.s > 0) {
    const double delta = std::pow(static_cast<double>(alg.radix()), -m);
    const double rho = std::pow(static_cast<double>(alg.radix()), -opts.rho_exp);
    rep.bound = std::pow(delta, opts.s) * std::pow(rho, opts.s) * std::pow(static_cast<double>(n), 4);
    rep.bound_formula = "delta^s rho^s |A|^4";
  }
  finish_bound(rep);
  return rep;
}

BsgResult bsg_extract(const PairSet& h, const DSet& a, const DSet& b) {
  check_pair(h, a);
  check_pair(a, b);
  if (h.empty()) fail(Errc::EmptyGraph, "the graph H has no edges");
  if (a.radius_exp() != h.radius_exp() || b.radius_exp() != h.radius_exp()) {
    fail(Errc::InvalidArgument, "H, A and B must share the radius exponent");
  }
  const int d = a.dim();
  const bool real = a.algebra().base() == Base::Real;
  const i64 mod = real ? 0 : a.modulus();
  const std::size_t ne = h.size();
  std::vector<std::size_t> ea(ne), eb(ne);
  std::vector<i64> sums(ne * d);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto ia = find_point(a, h.first(e));
    const auto ib = find_point(b, h.second(e));
    if (ia < 0 || ib < 0) fail(Errc::InvalidArgument, "H is not contained in A x B");
    ea[e] = static_cast<std::size_t>(ia);
    eb[e] = static_cast<std::size_t>(ib);
    for (int k = 0; k < d; ++k) {
      const i64 v = h.first(e)[k] + h.second(e)[k];
      sums[e * d + k] = real ? v : padic::reduce(v, mod);
    }
  }
  // Popular sums: multiplicity at least half the average.
  const Classes cls = classify(sums, d);
  const double avg_mult = static_cast<double>(ne) / static_cast<double>(cls.size.size());
  std::vector<char> kept(ne);
  BsgResult res{a, b};
  for (std::size_t e = 0; e < ne; ++e) {
    kept[e] = 2.0 * static_cast<double>(cls.size[cls.of[e]]) >= avg_mult;
    res.kept_edges += kept[e];
  }
  std::vector<count_t> deg_a(a.size(), 0);
  for (std::size_t e = 0; e < ne; ++e) deg_a[ea[e]] += kept[e];
  const double avg_deg_a = static_cast<double>(res.kept_edges) / static_cast<double>(a.size());
  std::vector<char> in_a(a.size());
  std::vector<i64> flat_a, flat_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    in_a[i] = deg_a[i] > 0 && 2.0 * static_cast<double>(deg_a[i]) >= avg_deg_a;
    if (in_a[i]) flat_a.insert(flat_a.end(), a.point(i).begin(), a.point(i).end());
  }
  std::vector<count_t> deg_b(b.size(), 0);
  count_t into = 0;
  for (std::size_t e = 0; e < ne; ++e) {
    if (kept[e] && in_a[ea[e]]) {
      ++deg_b[eb[e]];
      ++into;
    }
  }
  const double avg_deg_b = static_cast<double>(into) / static_cast<double>(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (deg_b[j] > 0 && 2.0 * static_cast<double>(deg_b[j]) >= avg_deg_b) {
      flat_b.insert(flat_b.end(), b.point(j).begin(), b.point(j).end());
    }
  }
  res.a_sub = DSet(a.algebra_ptr(), a.scale_exp(), a.radius_exp(), std::move(flat_a));
  res.b_sub = DSet(b.algebra_ptr(), b.scale_exp(), b.radius_exp(), std::move(flat_b));
  if (res.a_sub.empty() || res.b_sub.empty()) fail(Errc::EmptyGraph, "no popular vertices");
  res.density_a = static_cast<double>(res.a_sub.size()) / a.size();
  res.density_b = static_cast<double>(res.b_sub.size()) / b.size();
  res.sumset_count = sumset(res.a_sub, res.b_sub).size();
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  res.K = na * nb / static_cast<double>(ne);
  const double base = std::sqrt(na * nb);
  res.exponent = res.K > 1 ? std::log(static_cast<double>(res.sumset_count) / base) / std::log(res.K)
                           : 0.0;
  res.guarantee = res.K > 1 ? std::pow(res.K, res.exponent) * base
                            : std::max(base, static_cast<double>(res.sumset_count));
  res.degenerate = res.K >= std::min(na, nb) / 2;
  return res;
}

namespace {

struct Token {
  enum Kind { Ident, Int, Plus, Minus, Star, End } kind;
  std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i)});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Int, s.substr(i, j - i)});
      i = j;
    } else if (c == '+' || c == '-' || c == '*') {
      out.push_back({c == '+' ? Token::Plus : c == '-' ? Token::Minus : Token::Star, {}});
      ++i;
    } else {
      fail(Errc::ParseError, std::string("unexpected character '") + c + "' in expression");
    }
  }
  out.push_back({Token::End, {}});
  return out;
}

}  // namespace

DSet eval_expr(const std::string& expr, const std::map<std::string, DSet>& sets,
               const std::map<std::string, Element>& scalars) {
  const auto toks = tokenize(expr);
  std::size_t pos = 0;
  auto term = [&]() -> DSet {
    int times = 1;
    if (toks[pos].kind == Token::Int) {
      times = std::stoi(toks[pos].text);
      if (times < 1) fail(Errc::ParseError, "multiplier must be positive");
      ++pos;
    }
    if (toks[pos].kind != Token::Ident) fail(Errc::ParseError, "expected a set name in '" + expr + "'");
    std::string name = toks[pos++].text;
    std::optional<Element> scalar;
    if (toks[pos].kind == Token::Star) {
      ++pos;
      auto it = scalars.find(name);
      if (it == scalars.end()) fail(Errc::ParseError, "unknown scalar '" + name + "'");
      scalar = it->second;
      if (toks[pos].kind != Token::Ident) fail(Errc::ParseError, "expected a set after '*'");
      name = toks[pos++].text;
    }
    auto it = sets.find(name);
    if (it == sets.end()) fail(Errc::ParseError, "unknown set '" + name + "'");
    DSet base = scalar ? scalar_image(*scalar, it->second) : it->second;
    DSet out = base;
    for (int k = 1; k < times; ++k) out = sumset(out, base);
    return out;
  };
  bool negate = false;
  if (toks[pos].kind == Token::Minus) {
    negate = true;
    ++pos;
  }
  DSet acc = term();
  if (negate) {
    const DSet zero(acc.algebra_ptr(), acc.scale_exp(), acc.radius_exp(),
                    std::vector<i64>(acc.dim(), 0));
    acc = difference_set(zero, acc);
  }
  while (toks[pos].kind != Token::End) {
    const auto op = toks[pos].kind;
    if (op != Token::Plus && op != Token::Minus) fail(Errc::ParseError, "expected + or - in '" + expr + "'");
    ++pos;
    const DSet rhs = term();
    acc = op == Token::Plus ? sumset(acc, rhs) : difference_set(acc, rhs);
  }
  return acc;
}

Ledger ruzsa_ledger(const std::vector<std::pair<std::string, DSet>>& sets,
                    const std::map<std::string, Element>& scalars) {
  Ledger ledger;
  auto add_row = [&](std::string name, double lhs, double rhs, bool theorem) {
    LedgerRow row{std::move(name), lhs, rhs, lhs > 0 ? rhs / lhs : 0.0, theorem};
    if (theorem && lhs > rhs * (1 + 1e-12)) ++ledger.violations;
    ledger.rows.push_back(std::move(row));
  };
  const std::size_t n = sets.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const auto& [na, A] = sets[i];
        const auto& [nb, B] = sets[j];
        const auto& [nc, C] = sets[k];
        const double lhs = static_cast<double>(difference_set(A, C).size()) * B.size();
        const double rhs = static_cast<double>(difference_set(A, B).size()) *
                           static_cast<double>(difference_set(B, C).size());
        add_row("triangle |" + na + "-" + nc + "||" + nb + "| <= |" + na + "-" + nb + "||" + nb +
                    "-" + nc + "|",
                lhs, rhs, true);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && n > 1) continue;
      const auto& [na, A] = sets[i];
      const auto& [nb, B] = sets[j];
      const double k = static_cast<double>(sumset(A, B).size()) / A.size();
      const DSet twob = sumset(B, B);
      const double lhs = static_cast<double>(difference_set(twob, B).size());
      add_row("plunnecke |2" + nb + "-" + nb + "| <= K^3 |" + na + "|", lhs,
              k * k * k * static_cast<double>(A.size()), true);
    }
  }
  auto y1 = scalars.find("y1"), y2 = scalars.find("y2");
  if (y1 != scalars.end() && y2 != scalars.end()) {
    for (const auto& [name, A] : sets) {
      const DSet a1 = scalar_image(y1->second, A);
      const DSet a2 = scalar_image(y2->second, A);
      const double lhs = static_cast<double>(difference_set(sumset(A, a1), a2).size());
      const double sz = static_cast<double>(A.size());
      const double rhs = static_cast<double>(sumset(A, A).size()) * sumset(A, a1).size() *
                         difference_set(A, a2).size() / (sz * sz);
      add_row("chain |" + name + "+y1" + name + "-y2" + name + "| vs |" + name + "+" + name +
                  "||" + name + "+y1" + name + "||" + name + "-y2" + name + "|/|" + name + "|^2",
              lhs, rhs, false);
    }
  }
  return ledger;
}

std::string to_json(const CountReport& r) {
  json j;
  j["total"] = r.total;
  j["breakdown"] = json::object();
  for (const auto& [k, v] : r.breakdown) j["breakdown"][k] = v;
  j["tolerance"] = r.tolerance;
  if (r.bound > 0) {
    j["bound"] = r.bound;
    j["bound_formula"] = r.bound_formula;
    j["ratio"] = r.ratio;
  }
  if (r.image_size) {
    j["image_size"] = r.image_size;
    j["cauchy_schwarz_lower"] = r.cs_lower;
  }
  return j.dump(2);
}

std::string to_json(const BsgResult& r) {
  json j;
  j["a_sub_size"] = r.a_sub.size();
  j["b_sub_size"] = r.b_sub.size();
  j["density_a"] = r.density_a;
  j["density_b"] = r.density_b;
  j["sumset_count"] = r.sumset_count;
  j["kept_edges"] = r.kept_edges;
  j["K"] = r.K;
  j["exponent"] = r.exponent;
  j["guarantee"] = r.guarantee;
  j["degenerate"] = r.degenerate;
  return j.dump(2);
}

std::string to_csv(const Ledger& l) {
  std::ostringstream os;
  os.precision(17);
  os << "instance,lhs,rhs,slack\n";
  for (const auto& row : l.rows) {
    os << '"' << row.instance << (row.theorem ? "" : " [heuristic]") << "\"," << row.lhs << ','
       << row.rhs << ',' << row.slack << '\n';
  }
  return os.str();
}

}  // namespace dlab
