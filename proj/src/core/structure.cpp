#include "core/structure.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <optional>

#include "json.hpp"

namespace dlab {

namespace {

using json = nlohmann::json;

constexpr double kTol = 1e-12;

Element pow_elem(const Algebra& alg, Element x, i64 e) {
  Element r = alg.one();
  while (e > 0) {
    if (e & 1) r = mul(alg, r, x);
    x = mul(alg, x, x);
    e >>= 1;
  }
  return r;
}

std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  for (i64 f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

int rank_mod_p(std::vector<std::vector<i64>> rows, i64 p) {
  int rank = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][c] % p != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    const i64 inv = padic::inverse_mod(padic::reduce(rows[rank][c], p), p);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank) continue;
      const i64 f = padic::mulmod(padic::reduce(rows[r][c], p), inv, p);
      for (int k = 0; k < cols; ++k) {
        rows[r][k] = padic::reduce(rows[r][k] - static_cast<i128>(f) * rows[rank][k], p);
      }
    }
    ++rank;
  }
  return rank;
}

// Basis 1, zeta, ..., zeta^(e-1) of the unramified subring of degree e, with
// zeta a Teichmuller lift of an element of order p^e - 1.
std::vector<std::vector<i64>> subfield_basis(const Algebra& alg, int e) {
  const i64 p = alg.prime();
  const int d = alg.dim();
  const Algebra residue = Algebra::make(alg.kind(), p, d, 1, alg.defining_poly());
  const i64 q = padic::ipow(p, d);
  const auto factors = prime_factors(q - 1);
  std::optional<Element> gen;
  std::vector<i64> digits(d, 0);
  for (i64 code = 1; code < q && !gen; ++code) {
    i64 rest = code;
    for (int j = 0; j < d; ++j) {
      digits[j] = rest % p;
      rest /= p;
    }
    const Element g = residue.from_integers(digits);
    bool primitive = true;
    for (i64 f : factors) {
      if (pow_elem(residue, g, (q - 1) / f) == residue.one()) {
        primitive = false;
        break;
      }
    }
    if (primitive) gen = alg.from_integers(digits);
  }
  if (!gen) fail(Errc::ReduciblePoly, "residue field has no primitive element");
  Element omega = *gen;
  for (int k = 0; k < alg.precision(); ++k) omega = pow_elem(alg, omega, q);
  const Element zeta = pow_elem(alg, omega, (q - 1) / (padic::ipow(p, e) - 1));
  std::vector<std::vector<i64>> basis;
  Element cur = alg.one();
  for (int k = 0; k < e; ++k) {
    basis.push_back(cur.coords);
    cur = mul(alg, cur, zeta);
  }
  return basis;
}

std::vector<std::vector<i64>> unimodular_complement(const std::vector<std::vector<i64>>& basis,
                                                    int d, i64 p) {
  std::vector<std::vector<i64>> rows = basis, extra;
  for (int j = 0; j < d && static_cast<int>(rows.size()) < d; ++j) {
    std::vector<i64> ej(d, 0);
    ej[j] = 1;
    rows.push_back(ej);
    if (rank_mod_p(rows, p) == static_cast<int>(rows.size())) {
      extra.push_back(ej);
    } else {
      rows.pop_back();
    }
  }
  return extra;
}

void add_quaternion_net(SubAlgebraFamily& fam) {
  const double h = std::ldexp(1.0, -fam.net_exp);
  const int rings = static_cast<int>(std::floor((std::numbers::pi / 2) / h));
  for (int k = 0; k <= rings; ++k) {
    const double theta = k * h;
    const int n_phi = k == 0 ? 1 : std::max(1, static_cast<int>(std::ceil(2 * std::numbers::pi * std::sin(theta) / h)));
    for (int t = 0; t < n_phi; ++t) {
      const double phi = 2 * std::numbers::pi * t / n_phi;
      const double u1 = std::cos(theta);
      const double u2 = std::sin(theta) * std::cos(phi);
      const double u3 = std::sin(theta) * std::sin(phi);
      SubAlgebra f;
      char buf[96];
      std::snprintf(buf, sizeof buf, "span(1,u) u=(%.4f,%.4f,%.4f)", u1, u2, u3);
      f.label = buf;
      f.dim = 2;
      f.frame = {{1, 0, 0, 0}, {0, u1, u2, u3}};
      fam.members.push_back(std::move(f));
    }
  }
}

}  // namespace

SubAlgebraFamily subalgebra_family(const Algebra& alg, int net_exp) {
  SubAlgebraFamily fam{alg, 0, {}};
  const int d = alg.dim();
  fam.members.push_back(SubAlgebra{"0", 0, {}, {}, {}});
  if (alg.base() == Base::Real) {
    if (d >= 2) {
      std::vector<double> e1(d, 0.0);
      e1[0] = 1.0;
      fam.members.push_back(SubAlgebra{"R", 1, {e1}, {}, {}});
    }
    if (d == 4) {
      fam.net_exp = net_exp >= 0 ? net_exp : (alg.precision() + 1) / 2;
      add_quaternion_net(fam);
    }
    return fam;
  }
  for (int e = 1; e < d; ++e) {
    if (d % e != 0) continue;
    SubAlgebra f;
    f.label = e == 1 ? "Qp" : "Q_p^" + std::to_string(e);
    f.dim = e;
    f.basis = subfield_basis(alg, e);
    f.complement = unimodular_complement(f.basis, d, alg.prime());
    fam.members.push_back(std::move(f));
  }
  return fam;
}

double distance_to_subalgebra(const Algebra& alg, const Element& a, const SubAlgebra& f) {
  if (f.dim == 0) return norm(alg, a);
  const int d = alg.dim();
  if (alg.base() == Base::Real) {
    const double unit = std::ldexp(1.0, -alg.precision());
    std::vector<double> res(d);
    for (int j = 0; j < d; ++j) res[j] = a.coords[j] * unit;
    for (const auto& b : f.frame) {
      double dot = 0;
      for (int j = 0; j < d; ++j) dot += res[j] * b[j];
      for (int j = 0; j < d; ++j) res[j] -= dot * b[j];
    }
    double n2 = 0;
    for (double r : res) n2 += r * r;
    return std::sqrt(n2);
  }
  // Coordinates of a in the unimodular basis (subfield basis, complement);
  // the distance is the sup-norm of the complement part.
  const i64 p = alg.prime();
  const int m = alg.precision();
  std::vector<i64> mat(static_cast<std::size_t>(d) * d);
  std::vector<std::vector<i64>> rows = f.basis;
  rows.insert(rows.end(), f.complement.begin(), f.complement.end());
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) mat[c * d + r] = rows[r][c];
  }
  auto sol = padic::solve_unimodular(std::move(mat), a.coords, d, p, m);
  if (!sol) fail(Errc::InvalidArgument, "sub-algebra basis is not unimodular");
  int val = m;
  for (int j = f.dim; j < d; ++j) val = std::min(val, padic::valuation((*sol)[j], p, m));
  if (val >= m) return 0.0;
  return std::pow(static_cast<double>(p), -(val - a.shift));
}

namespace {

struct MemberScan {
  double max_distance = 0;
  std::vector<std::size_t> trapped;
};

std::vector<MemberScan> scan_family(const DSet& a, double C, int net_exp, SubAlgebraFamily& fam) {
  const Algebra work = working_algebra(a);
  fam = subalgebra_family(work, net_exp);
  std::vector<Element> elems;
  elems.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) elems.push_back(element_of(a, a.point(i)));
  const double threshold = 1.0 / C;
  std::vector<MemberScan> out(fam.members.size());
  for (std::size_t f = 0; f < fam.members.size(); ++f) {
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const double dist = distance_to_subalgebra(work, elems[i], fam.members[f]);
      out[f].max_distance = std::max(out[f].max_distance, dist);
      if (dist < threshold - kTol) out[f].trapped.push_back(i);
    }
  }
  return out;
}

}  // namespace

AvoidReport avoids_subalgebras(const DSet& a, double C, int net_exp) {
  if (C <= 0) fail(Errc::InvalidArgument, "C must be positive");
  if (a.empty()) fail(Errc::EmptyInput, "avoidance test on an empty set");
  SubAlgebraFamily fam{a.algebra(), 0, {}};
  const auto scans = scan_family(a, C, net_exp, fam);
  AvoidReport rep;
  rep.C = C;
  rep.members = fam.members.size();
  rep.net_exp = fam.net_exp;
  std::size_t worst = 0;
  for (std::size_t f = 1; f < scans.size(); ++f) {
    if (scans[f].max_distance < scans[worst].max_distance) worst = f;
  }
  rep.worst_member = fam.members[worst].label;
  rep.worst_distance = scans[worst].max_distance;
  rep.worst_trapped = scans[worst].trapped.size();
  rep.pass = rep.worst_distance >= 1.0 / C - kTol;
  return rep;
}

StrongAvoidReport strongly_avoids(const DSet& a, double C, int net_exp) {
  if (C <= 0) fail(Errc::InvalidArgument, "C must be positive");
  if (a.empty()) fail(Errc::EmptyInput, "avoidance test on an empty set");
  SubAlgebraFamily fam{a.algebra(), 0, {}};
  const auto scans = scan_family(a, C, net_exp, fam);
  StrongAvoidReport rep;
  rep.C = C;
  rep.n = a.size();
  rep.threshold = static_cast<std::size_t>(std::ceil(static_cast<double>(rep.n) / C - kTol));
  std::size_t worst = 0;
  for (std::size_t f = 1; f < scans.size(); ++f) {
    if (scans[f].trapped.size() > scans[worst].trapped.size()) worst = f;
  }
  rep.worst_member = fam.members[worst].label;
  rep.worst_trapped = scans[worst].trapped.size();
  rep.trapped_indices = scans[worst].trapped;
  rep.sufficient = rep.worst_trapped < rep.threshold;
  rep.necessary = rep.worst_trapped + rep.threshold <= rep.n;
  rep.pass = rep.sufficient;
  return rep;
}

namespace {

// Sum of pivot valuations of a k x d matrix over Z/p^M (full pivoting);
// nullopt if the rows are dependent at this precision.
std::optional<int> volume_valuation(std::vector<std::vector<i64>> rows, i64 p, int prec) {
  const i64 mod = padic::ipow(p, prec);
  const int k = static_cast<int>(rows.size());
  const int d = k ? static_cast<int>(rows[0].size()) : 0;
  std::vector<bool> col_used(d, false);
  int total = 0;
  for (int step = 0; step < k; ++step) {
    int best_v = prec, br = -1, bc = -1;
    for (int r = step; r < k; ++r) {
      for (int c = 0; c < d; ++c) {
        if (col_used[c]) continue;
        const int v = padic::valuation(rows[r][c], p, prec);
        if (v < best_v) {
          best_v = v;
          br = r;
          bc = c;
        }
      }
    }
    if (br < 0) return std::nullopt;
    std::swap(rows[br], rows[step]);
    col_used[bc] = true;
    total += best_v;
    const i64 pv = padic::ipow(p, best_v);
    const i64 unit_inv = padic::inverse_mod(padic::reduce(rows[step][bc] / pv, mod), mod);
    for (int r = step + 1; r < k; ++r) {
      const i64 f = padic::mulmod(rows[r][bc] / pv, unit_inv, mod);
      for (int c = 0; c < d; ++c) {
        rows[r][c] = padic::reduce(rows[r][c] - static_cast<i128>(f) * rows[step][c], mod);
      }
    }
  }
  return total;
}

DSet sample_rows(const DSet& a, std::size_t cap) {
  if (a.size() <= cap) return a;
  std::vector<i64> flat;
  flat.reserve(cap * a.width());
  for (std::size_t t = 0; t < cap; ++t) {
    const auto pt = a.point(t * a.size() / cap);
    flat.insert(flat.end(), pt.begin(), pt.end());
  }
  return DSet(a.algebra_ptr(), a.scale_exp(), a.radius_exp(), std::move(flat));
}

}  // namespace

EscapeResult escape_basis(const DSet& a, double floor, std::size_t max_pool) {
  if (a.empty()) fail(Errc::EmptyInput, "escape_basis needs a nonempty set");
  const Algebra work = working_algebra(a);
  const int d = a.dim();
  const bool real = work.base() == Base::Real;

  // Candidate pool: A, A^(2), ..., A^(d), sampled under the pool cap.
  std::vector<Element> pool;
  std::vector<int> depth;
  const std::size_t per_level = std::max<std::size_t>(1, max_pool / d);
  DSet level = a;
  for (int k = 1; k <= d; ++k) {
    if (k > 1) {
      const std::size_t left = std::max<std::size_t>(1, per_level / a.size());
      level = product_set(sample_rows(level, left), a, Side::Left);
    }
    const DSet used = sample_rows(level, per_level);
    for (std::size_t i = 0; i < used.size(); ++i) {
      Element e = element_of(used, used.point(i));
      if (!real) {
        for (auto& c : e.coords) c = padic::reduce(c, work.scale());
      }
      pool.push_back(std::move(e));
      depth.push_back(k);
    }
  }

  EscapeResult res;
  res.pool_size = pool.size();
  std::vector<std::vector<long double>> frame;
  std::vector<std::vector<i64>> rows;
  int shift_sum = 0;
  for (int step = 0; step < d; ++step) {
    std::optional<std::size_t> best;
    long double best_res = 0;
    int best_val = 0;
    // v_1 maximises the norm over (the sample of) A itself.
    const std::size_t limit =
        step == 0 ? static_cast<std::size_t>(std::count(depth.begin(), depth.end(), 1)) : pool.size();
    for (std::size_t c = 0; c < limit; ++c) {
      const Element& e = pool[c];
      if (real) {
        std::vector<long double> r(e.coords.begin(), e.coords.end());
        for (const auto& f : frame) {
          long double dot = 0;
          for (int j = 0; j < d; ++j) dot += r[j] * f[j];
          for (int j = 0; j < d; ++j) r[j] -= dot * f[j];
        }
        long double n2 = 0;
        for (auto x : r) n2 += x * x;
        if (n2 > best_res * (1 + 1e-15L) + 1e-9L) {
          best_res = n2;
          best = c;
        }
      } else {
        auto trial = rows;
        trial.push_back(e.coords);
        const auto v = volume_valuation(std::move(trial), work.prime(), work.precision());
        if (!v) continue;
        const int val = *v - (shift_sum + e.shift);
        if (!best || val < best_val) {
          best_val = val;
          best = c;
        }
      }
    }
    if (!best) {
      fail(Errc::SubAlgebraTrapped,
           "greedy escape stalled: span reached rank " + std::to_string(step) + " of " +
               std::to_string(d));
    }
    const Element& chosen = pool[*best];
    res.basis.push_back(chosen);
    res.depth.push_back(depth[*best]);
    if (real) {
      std::vector<long double> r(chosen.coords.begin(), chosen.coords.end());
      for (const auto& f : frame) {
        long double dot = 0;
        for (int j = 0; j < d; ++j) dot += r[j] * f[j];
        for (int j = 0; j < d; ++j) r[j] -= dot * f[j];
      }
      const long double n = std::sqrt(best_res);
      for (auto& x : r) x /= n;
      frame.push_back(std::move(r));
    } else {
      rows.push_back(chosen.coords);
      shift_sum += chosen.shift;
    }
  }
  res.det = det_basis(work, res.basis);
  if (std::fabs(res.det) < floor) {
    fail(Errc::SubAlgebraTrapped, "escape basis determinant " + std::to_string(res.det) +
                                      " below the floor " + std::to_string(floor) +
                                      " (span reached rank " + std::to_string(d) + ")");
  }
  return res;
}

Element halving_map(const Algebra& alg, const std::vector<Element>& v,
                    const std::vector<int>& bits, const Element& x) {
  if (alg.base() != Base::Real) fail(Errc::NotRealBase, "halving maps need a real algebra");
  if (v.size() != static_cast<std::size_t>(alg.dim()) || bits.size() != v.size()) {
    fail(Errc::InvalidArgument, "halving map needs d basis vectors and d bits");
  }
  Element s = x;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (bits[j]) s = add(alg, s, v[j]);
  }
  for (auto& c : s.coords) c = static_cast<i64>(round_div(c, 2));
  return s;
}

namespace {

Element point_element(const DSet& a, std::size_t i, const Algebra& work) {
  Element e = element_of(a, a.point(i));
  if (work.base() == Base::Padic) {
    for (auto& c : e.coords) c = padic::reduce(c, work.scale());
  }
  return e;
}

Element diff_element(const DSet& a, const Algebra& work, std::size_t i, std::size_t j) {
  return sub(work, point_element(a, i, work), point_element(a, j, work));
}

// u v^-1 for a Padic v of any nonzero valuation.
Element padic_divide(const Algebra& work, const Element& u, const Element& v, Side side) {
  const i64 p = work.prime();
  int val = work.precision();
  for (i64 c : v.coords) val = std::min(val, padic::valuation(c, p, work.precision()));
  if (val >= work.precision()) fail(Errc::DivisionByNegligible, "division by zero");
  const i64 pv = padic::ipow(p, val);
  Element w{v.coords, 0};
  for (auto& c : w.coords) c /= pv;
  Element wi = inv(work, w);
  // v = p^(val - shift) w, so v^-1 = p^(shift - val) w^-1.
  const int net = v.shift - val;
  if (net >= 0) {
    const i64 f = padic::ipow(p, std::min(net, work.precision()));
    for (auto& c : wi.coords) c = padic::mulmod(c, f, work.scale());
  } else {
    wi.shift += -net;
  }
  return side == Side::Left ? mul(work, u, wi) : mul(work, wi, u);
}

// Stored residue at (m, r) of a Padic element, or nullopt if it lies outside
// B(0, p^r).
std::optional<std::vector<i64>> padic_cell(Element e, i64 p, int m, int r) {
  while (e.shift > 0 &&
         std::all_of(e.coords.begin(), e.coords.end(), [p](i64 c) { return c % p == 0; })) {
    for (auto& c : e.coords) c /= p;
    --e.shift;
  }
  if (e.shift > r) return std::nullopt;
  const i64 mod = padic::ipow(p, m + r);
  const i64 f = padic::ipow(p, r - e.shift);
  std::vector<i64> out(e.coords.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = padic::mulmod(e.coords[j], f, mod);
  return out;
}

// Is there a point of Q within `tol` (l-infinity) of `y`, where Q's point q
// sits at q * unit?
bool near_real(const DSet& q, const std::vector<i64>& y, i64 unit, i64 tol) {
  const int d = q.dim();
  std::vector<i64> lo(d), hi(d), cand(d);
  auto fdiv = [](i64 a, i64 b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  for (int j = 0; j < d; ++j) {
    lo[j] = -fdiv(-(y[j] - tol), unit);  // ceil((y - tol) / unit)
    hi[j] = fdiv(y[j] + tol, unit);
    if (lo[j] > hi[j]) return false;
    cand[j] = lo[j];
  }
  while (true) {
    if (find_point(q, cand) >= 0) return true;
    int j = d - 1;
    while (j >= 0 && cand[j] == hi[j]) {
      cand[j] = lo[j];
      --j;
    }
    if (j < 0) return false;
    ++cand[j];
  }
}

// Greedy maximal-volume choice of d points of a p-adic set (fewer if the
// points do not span).
std::vector<Element> points_basis(const DSet& q) {
  const Algebra work = working_algebra(q);
  std::vector<Element> basis;
  std::vector<std::vector<i64>> rows;
  for (int step = 0; step < q.dim(); ++step) {
    std::optional<std::size_t> best;
    int best_val = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto trial = rows;
      trial.emplace_back(q.point(i).begin(), q.point(i).end());
      const auto v = volume_valuation(std::move(trial), work.prime(), work.precision());
      if (v && (!best || *v < best_val)) {
        best_val = *v;
        best = i;
      }
    }
    if (!best) break;
    rows.emplace_back(q.point(*best).begin(), q.point(*best).end());
    basis.push_back(element_of(q, q.point(*best)));
  }
  return basis;
}

void fill_dense(DichotomyOutcome& out, const Algebra& work, const std::vector<Element>& v,
                int d) {
  out.kind = DichotomyCase::Dense;
  out.measured = out.q_size;
  out.det = v.size() == static_cast<std::size_t>(d) ? std::fabs(det_basis(work, v)) : 0.0;
  const double cells = std::pow(static_cast<double>(work.radix()), out.delta_exp * d);
  out.bound = work.base() == Base::Real ? out.det / std::ldexp(1.0, d) * cells : out.det * cells;
  out.bound_holds = static_cast<double>(out.measured) >= out.bound * (1 - 1e-12);
}

}  // namespace

DichotomyOutcome dichotomy_check(const QuotientSet& qs, const DSet& a,
                                 const std::vector<Element>& v, const DichotomyOptions& opts) {
  const DSet& q = qs.set;
  const Algebra work = working_algebra(a);
  const int d = a.dim();
  const int r = qs.rho_exp;
  DichotomyOutcome out;
  out.mode = opts.mode;
  out.delta_exp = q.scale_exp();
  out.rho_exp = r;
  out.q_size = q.size();
  if (q.empty()) fail(Errc::EmptyInput, "empty quotient set");
  if (qs.witness.size() != q.size()) fail(Errc::InvalidArgument, "quotient set lacks witnesses");

  if (opts.mode == DichotomyMode::Halving) {
    if (work.base() != Base::Real) fail(Errc::NotRealBase, "halving mode needs a real algebra");
    if (v.size() != static_cast<std::size_t>(d)) fail(Errc::InvalidArgument, "basis needs d vectors");
    if (static_cast<double>(q.size()) * (1 << d) > 10.0 * point_budget()) {
      fail(Errc::BudgetExceeded, "dichotomy scan exceeds the budget");
    }
    // Fine units 2^-(m+1): Q's unit is 2^(3r+1), the tolerance one Delta.
    const i64 unit = i64{1} << (3 * r + 1);
    std::vector<i64> y(d);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto x = q.point(i);
      for (int mask = 0; mask < (1 << d); ++mask) {
        for (int k = 0; k < d; ++k) y[k] = x[k] * (i64{1} << (3 * r));
        for (int j = 0; j < d; ++j) {
          if (!((mask >> (d - 1 - j)) & 1)) continue;
          for (int k = 0; k < d; ++k) y[k] += v[j].coords[k];
        }
        if (near_real(q, y, unit, unit)) continue;
        out.kind = DichotomyCase::Sparse;
        out.op = "halving";
        out.x_index = i;
        out.bits.resize(d);
        for (int j = 0; j < d; ++j) out.bits[j] = (mask >> (d - 1 - j)) & 1;
        out.image = y;
        out.witness_x = qs.witness[i];
        const auto& w = qs.witness[i];
        const Element u = diff_element(a, work, w[0], w[1]);
        const Element den = diff_element(a, work, w[2], w[3]);
        Element shift_sum = work.zero();
        for (int j = 0; j < d; ++j) {
          if (out.bits[j]) shift_sum = add(work, shift_sum, v[j]);
        }
        const Element moved = qs.side == Side::Left ? mul(work, shift_sum, den)
                                                    : mul(work, den, shift_sum);
        out.p = add(work, u, moved);
        out.q = add(work, den, den);
        return out;
      }
    }
    fill_dense(out, work, v, d);
    // Constructive mode: dyadic points sum_j v_j k_j 2^-n in fine units
    // 2^-(m+n) must lie within Delta of Q.
    for (int n = 0; n <= opts.constructive_levels; ++n) {
      if (static_cast<double>(n) * d > 20) break;
      const i64 side = i64{1} << n;
      const i64 qunit = i64{1} << (3 * r + n);
      std::vector<i64> k(d, 0), pt(d);
      std::size_t hits = 0, total = 0;
      while (true) {
        std::fill(pt.begin(), pt.end(), 0);
        for (int j = 0; j < d; ++j) {
          for (int c = 0; c < d; ++c) pt[c] += v[j].coords[c] * k[j];
        }
        ++total;
        if (near_real(q, pt, qunit, qunit)) ++hits;
        int j = d - 1;
        while (j >= 0 && k[j] == side - 1) k[j--] = 0;
        if (j < 0) break;
        ++k[j];
      }
      out.dyadic.push_back({hits, total});
    }
    return out;
  }

  if (work.base() != Base::Padic) fail(Errc::InvalidArgument, "translation and field modes need a p-adic algebra");
  const i64 p = work.prime();
  const int mq = q.scale_exp();
  const int rq = q.radius_exp();
  const i64 qmod = q.modulus();

  if (opts.mode == DichotomyMode::Translation) {
    if (v.size() != static_cast<std::size_t>(d)) fail(Errc::InvalidArgument, "basis needs d vectors");
    std::vector<std::vector<i64>> vq;
    for (const auto& e : v) {
      auto c = padic_cell(e, p, mq, rq);
      if (!c) fail(Errc::RangeError, "basis vector outside the quotient ball");
      vq.push_back(*c);
    }
    std::vector<i64> y(d);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto x = q.point(i);
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) y[k] = padic::reduce(static_cast<i128>(x[k]) + vq[j][k], qmod);
        if (find_point(q, y) >= 0) continue;
        out.kind = DichotomyCase::Sparse;
        out.op = "translate";
        out.x_index = i;
        out.j = j;
        out.image = y;
        out.witness_x = qs.witness[i];
        const auto& w = qs.witness[i];
        const Element u = diff_element(a, work, w[0], w[1]);
        const Element den = diff_element(a, work, w[2], w[3]);
        const Element moved = qs.side == Side::Left ? mul(work, v[j], den) : mul(work, den, v[j]);
        out.p = add(work, u, moved);
        out.q = den;
        return out;
      }
    }
    fill_dense(out, work, v, d);
    return out;
  }

  // Field mode.
  if (!work.commutative()) fail(Errc::InvalidArgument, "field mode needs a commutative algebra");
  if (static_cast<double>(q.size()) * q.size() > 20.0 * point_budget()) {
    fail(Errc::BudgetExceeded, "closure scan over Q x Q exceeds the budget");
  }
  std::vector<Element> us, vs;
  for (const auto& w : qs.witness) {
    us.push_back(diff_element(a, work, w[0], w[1]));
    vs.push_back(diff_element(a, work, w[2], w[3]));
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t k = i; k < q.size(); ++k) {
      const Element den = mul(work, vs[i], vs[k]);
      for (int op = 0; op < 2; ++op) {
        const Element num = op == 0 ? add(work, mul(work, us[i], vs[k]), mul(work, us[k], vs[i]))
                                    : mul(work, us[i], us[k]);
        const auto cell = padic_cell(padic_divide(work, num, den, Side::Left), p, mq, rq);
        if (cell && find_point(q, *cell) >= 0) continue;
        out.kind = DichotomyCase::Sparse;
        out.op = op == 0 ? "sum" : "product";
        out.x_index = i;
        out.y_index = k;
        if (cell) out.image = *cell;
        out.witness_x = qs.witness[i];
        out.witness_y = qs.witness[k];
        out.p = num;
        out.q = den;
        return out;
      }
    }
  }
  // Closure says nothing about v here, so the certificate basis is drawn
  // from Q: cells add exactly, hence Q contains the Z_p-span of its points.
  fill_dense(out, working_algebra(q), points_basis(q), d);
  return out;
}

namespace {

json element_json(const Element& e) {
  json j;
  j["coords"] = e.coords;
  if (e.shift) j["shift"] = e.shift;
  return j;
}

}  // namespace

std::string to_json(const AvoidReport& r) {
  json j;
  j["pass"] = r.pass;
  j["C"] = r.C;
  j["members"] = r.members;
  j["worst_member"] = r.worst_member;
  j["worst_distance"] = r.worst_distance;
  j["worst_trapped"] = r.worst_trapped;
  if (r.net_exp) j["net_exp"] = r.net_exp;
  return j.dump(2);
}

std::string to_json(const StrongAvoidReport& r) {
  json j;
  j["pass"] = r.pass;
  j["sufficient_bound"] = r.sufficient;
  j["necessary_bound"] = r.necessary;
  j["C"] = r.C;
  j["n"] = r.n;
  j["threshold"] = r.threshold;
  j["worst_member"] = r.worst_member;
  j["worst_trapped"] = r.worst_trapped;
  j["trapped_indices"] = r.trapped_indices;
  return j.dump(2);
}

std::string to_json(const Algebra& alg, const EscapeResult& r) {
  json j;
  j["algebra"] = alg.name();
  j["det"] = r.det;
  j["pool_size"] = r.pool_size;
  j["basis"] = json::array();
  for (std::size_t i = 0; i < r.basis.size(); ++i) {
    json b = element_json(r.basis[i]);
    b["depth"] = r.depth[i];
    j["basis"].push_back(b);
  }
  return j.dump(2);
}

std::string to_json(const DichotomyOutcome& r) {
  json j;
  j["case"] = r.kind == DichotomyCase::Dense ? "dense" : "sparse";
  j["mode"] = r.mode == DichotomyMode::Halving       ? "halving"
              : r.mode == DichotomyMode::Translation ? "translation"
                                                     : "field";
  j["delta_exp"] = r.delta_exp;
  j["rho_exp"] = r.rho_exp;
  j["q_size"] = r.q_size;
  if (r.kind == DichotomyCase::Dense) {
    j["measured"] = r.measured;
    j["det"] = r.det;
    j["bound"] = r.bound;
    j["bound_holds"] = r.bound_holds;
    if (!r.dyadic.empty()) {
      j["dyadic"] = json::array();
      for (std::size_t n = 0; n < r.dyadic.size(); ++n) {
        j["dyadic"].push_back({{"level", n}, {"hits", r.dyadic[n][0]}, {"tested", r.dyadic[n][1]}});
      }
    }
    return j.dump(2);
  }
  json w;
  w["op"] = r.op;
  w["x_index"] = r.x_index;
  w["x_witness"] = r.witness_x;
  if (r.op == "sum" || r.op == "product") {
    w["y_index"] = r.y_index;
    w["y_witness"] = r.witness_y;
  }
  if (!r.bits.empty()) w["bits"] = r.bits;
  if (r.j >= 0) w["j"] = r.j;
  w["image"] = r.image;
  w["p"] = element_json(r.p);
  w["q"] = element_json(r.q);
  j["witness"] = w;
  return j.dump(2);
}

}  // namespace dlab
