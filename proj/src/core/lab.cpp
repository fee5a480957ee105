#include "core/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "core/setops.hpp"
#include "core/structure.hpp"
#include "json.hpp"

namespace dlab {

namespace {

double log_radix(const Algebra& alg) { return std::log(static_cast<double>(alg.radix())); }

double covering_exponent(const Algebra& alg, std::size_t count, int m) {
  if (count == 0 || m == 0) return 0.0;
  return std::log(static_cast<double>(count)) / (m * log_radix(alg));
}

int round_rational(const Rational& r) {
  // Nearest integer, halves away from zero.
  const long long n = r.numerator(), q = r.denominator();
  const long long twice = 2 * (n < 0 ? -n : n) + q;
  const long long v = twice / (2 * q);
  return static_cast<int>(n < 0 ? -v : v);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Rational { fail(Errc::ParseError, "not a rational number: '" + text + "'"); };
  if (text.empty()) return bad();
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const long long n = std::stoll(text.substr(0, slash), &used);
      if (used != slash) return bad();
      const std::string den = text.substr(slash + 1);
      const long long q = std::stoll(den, &used);
      if (used != den.size() || q == 0) return bad();
      return Rational(n, q);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t used = 0;
      const long long n = std::stoll(text, &used);
      if (used != text.size()) return bad();
      return Rational(n);
    }
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 15 || !std::all_of(frac.begin(), frac.end(), ::isdigit)) return bad();
    const std::string whole = text.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    long long w = 0;
    if (!whole.empty() && whole != "-" && whole != "+") {
      std::size_t used = 0;
      w = std::stoll(whole, &used);
      if (used != whole.size()) return bad();
    }
    long long scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const long long f = frac.empty() ? 0 : std::stoll(frac);
    const long long mag = (w < 0 ? -w : w) * scale + f;
    return Rational(neg ? -mag : mag, scale);
  } catch (const std::logic_error&) {
    return bad();
  }
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational choose_c1(const Rational& s, const Rational& d) {
  if (d <= 0 || s <= 0 || s >= d) fail(Errc::RangeError, "c1 needs 0 < s < d");
  return s * (Rational(1) - s / d) / 4;
}

RhoChoice choose_rho_expand(const Rational& s, const Rational& d, int delta_exp) {
  if (d <= 0 || s <= 0 || s >= d) fail(Errc::RangeError, "rho needs 0 < s < d");
  RhoChoice out;
  out.exponent = (d - s) / (3 * (d + s));
  // The quotient set needs delta^(1/3) < rho < 1.
  const int hi = (delta_exp - 1) / 3;
  if (hi < 1) fail(Errc::RangeError, "no radix power strictly between delta^(1/3) and 1 at m=" +
                                         std::to_string(delta_exp));
  out.rho_exp = std::clamp(round_rational(out.exponent * delta_exp), 1, hi);
  return out;
}

RhoChoice choose_rho_tv(const Rational& s, const Rational& sigma, const Rational& t,
                        const Rational& eps, int delta_exp) {
  if (t <= 0 || s <= 0) fail(Errc::RangeError, "rho_tv needs s, t > 0");
  RhoChoice out;
  out.exponent = (t - sigma + eps) / t;
  if (out.exponent <= 0) fail(Errc::RangeError, "t - sigma + eps must be positive");
  out.c = s * out.exponent;
  out.vanishing = t == sigma;
  if (delta_exp < 2) fail(Errc::RangeError, "delta_exp too small for rho_tv");
  out.rho_exp = std::clamp(round_rational(out.exponent * delta_exp), 1, delta_exp - 1);
  return out;
}

IterationBudget iteration_budget(const Rational& s, const Rational& t, const Rational& d,
                                 bool commutative) {
  if (!(s > 0 && s < t && t < d)) fail(Errc::RangeError, "iteration budget needs 0 < s < t < d");
  const long double dd = to_double(d), tt = to_double(t);
  auto c1 = [&](long double x) { return x * (1 - x / dd) / 4; };
  IterationBudget out;
  long double cur = to_double(s);
  out.trajectory.push_back(cur);
  while (cur < tt) {
    cur += c1(cur) / 2;
    out.trajectory.push_back(cur);
    ++out.n;
    if (out.n > 1000000) fail(Errc::RangeError, "iteration budget did not converge");
  }
  const double gap = to_double(t - s);
  out.n_estimate = std::max(gap / static_cast<double>(c1(to_double(s))),
                            gap / static_cast<double>(c1(tt)));
  const double base = commutative ? 20.0 : 4.0 * to_double(d);
  std::ostringstream sym;
  if (commutative) {
    sym << "20^(20^" << out.n << ")";
  } else {
    sym << "20^((" << fmt(base) << ")^" << out.n << ")";
  }
  out.N_symbolic = sym.str();
  out.log10_N = std::pow(base, out.n) * std::log10(20.0);
  return out;
}

Schedule make_schedule(const Rational& s, const Rational& sigma, const Rational& t,
                       const Rational& eps, int d, int delta_exp) {
  Schedule sc;
  sc.s = s;
  sc.sigma = sigma;
  sc.t = t;
  sc.eps = eps;
  sc.d = d;
  sc.delta_exp = delta_exp;
  const Rational dr(d);
  if (s > 0 && s < dr) {
    sc.c1 = choose_c1(s, dr);
    sc.rho_exp = choose_rho_expand(s, dr, delta_exp).rho_exp;
    sc.Delta_exp = delta_exp - 3 * sc.rho_exp;
  }
  if (t > 0 && t - sigma + eps > 0) sc.c_tv = choose_rho_tv(s, sigma, t, eps, delta_exp).c;
  if (s > 0 && s < t && t < dr) sc.N_budget = iteration_budget(s, t, dr, true).N_symbolic;
  return sc;
}

std::string records_csv(const std::vector<ExperimentRecord>& rows) {
  std::ostringstream os;
  os << "exp_id,algebra,p,d,m,s,sigma,t,op,x_coords,count,exponent,seed\n";
  for (const auto& r : rows) {
    os << r.exp_id << ',' << r.algebra << ',' << r.p << ',' << r.d << ',' << r.m << ','
       << fmt(r.s) << ',' << fmt(r.sigma) << ',' << fmt(r.t) << ',' << r.op << ',' << r.x_coords
       << ',' << r.count << ',' << fmt(r.exponent) << ',' << r.seed << '\n';
  }
  return os.str();
}

std::string records_json(const std::vector<ExperimentRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"exp_id", r.exp_id}, {"algebra", r.algebra}, {"p", r.p}, {"d", r.d},
                   {"m", r.m}, {"s", r.s}, {"sigma", r.sigma}, {"t", r.t}, {"op", r.op},
                   {"x_coords", r.x_coords}, {"count", r.count}, {"exponent", r.exponent},
                   {"seed", r.seed}});
  }
  return arr.dump(2);
}

DSet gen_random_dset(const AlgebraPtr& alg, int m, double s, std::uint64_t seed, double C) {
  const int d = alg->dim();
  if (!(s > 0 && s <= d)) fail(Errc::InvalidArgument, "generator needs 0 < s <= d");
  if (m < 0) fail(Errc::InvalidArgument, "m must be non-negative");
  const bool real = alg->base() == Base::Real;
  const i64 radix = alg->radix();
  i64 children = 1;
  for (int j = 0; j < d; ++j) children *= radix;
  const double keep = std::pow(static_cast<double>(radix), s - d);
  const double expected = std::pow(static_cast<double>(radix), s * m);
  if (expected > static_cast<double>(point_budget())) {
    fail(Errc::BudgetExceeded, "expected set size exceeds the point budget");
  }
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<i64> cells(d, 0);  // level 0: one cell at the origin
    i64 place = 1;                  // radix^k
    std::vector<i64> digit(d);
    for (int k = 0; k < m; ++k) {
      std::vector<i64> next;
      for (std::size_t c = 0; c < cells.size() / d; ++c) {
        bool any = false;
        for (i64 child = 0; child < children; ++child) {
          if (keep < 1.0 && unit(rng) >= keep) continue;
          any = true;
          i64 code = child;
          for (int j = 0; j < d; ++j) {
            digit[j] = code % radix;
            code /= radix;
            next.push_back(real ? cells[c * d + j] * 2 + digit[j] : cells[c * d + j] + digit[j] * place);
          }
        }
        if (!any) {
          i64 code = std::uniform_int_distribution<i64>(0, children - 1)(rng);
          for (int j = 0; j < d; ++j) {
            digit[j] = code % radix;
            code /= radix;
            next.push_back(real ? cells[c * d + j] * 2 + digit[j] : cells[c * d + j] + digit[j] * place);
          }
        }
      }
      cells = std::move(next);
      place *= radix;
    }
    DSet out(alg, m, 0, std::move(cells));
    if (is_nonconcentrated(out, s, C).pass) return out;
  }
  fail(Errc::GenerationFailed, "no draw passed the non-concentration check after 10 attempts");
}

DSet gen_circle_net(const AlgebraPtr& alg, int m) {
  if (alg->kind() != AlgebraKind::C) fail(Errc::InvalidArgument, "circle nets live in C");
  const double scale = std::ldexp(1.0, m);
  const auto n = static_cast<std::size_t>(std::ceil(2 * std::numbers::pi * scale));
  std::vector<i64> flat;
  flat.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    flat.push_back(std::llround(scale * std::cos(th)));
    flat.push_back(std::llround(scale * std::sin(th)));
  }
  return DSet(alg, m, 0, std::move(flat));
}

DSet gen_ap(const AlgebraPtr& alg, int m, std::size_t count, i64 step, i64 start) {
  const int d = alg->dim();
  std::vector<i64> flat(count * d, 0);
  const bool real = alg->base() == Base::Real;
  const i64 mod = real ? 0 : padic::ipow(alg->prime(), m);
  for (std::size_t k = 0; k < count; ++k) {
    const i128 v = static_cast<i128>(start) + static_cast<i128>(k) * step;
    flat[k * d] = real ? static_cast<i64>(v) : padic::reduce(v, mod);
  }
  return real ? DSet::fit(alg, m, 0, std::move(flat)) : DSet(alg, m, 0, std::move(flat));
}

DSet gen_full_grid(const AlgebraPtr& alg, int m) {
  const int d = alg->dim();
  const bool real = alg->base() == Base::Real;
  const i64 lo = real ? -(i64{1} << m) : 0;
  const i64 hi = real ? (i64{1} << m) : padic::ipow(alg->prime(), m) - 1;
  const double total = std::pow(static_cast<double>(hi - lo + 1), d);
  if (total > static_cast<double>(point_budget())) {
    fail(Errc::BudgetExceeded, "full grid exceeds the point budget");
  }
  std::vector<i64> flat;
  flat.reserve(static_cast<std::size_t>(total) * d);
  std::vector<i64> row(d, lo);
  while (true) {
    flat.insert(flat.end(), row.begin(), row.end());
    int j = d - 1;
    while (j >= 0 && row[j] == hi) row[j--] = lo;
    if (j < 0) break;
    ++row[j];
  }
  return DSet(alg, m, 0, std::move(flat));
}

CounterexampleSets gen_counterexample(Counterexample which, int m) {
  if (m < 0 || m > 28) fail(Errc::InvalidArgument, "m out of range");
  const auto alg = share(Algebra::make(AlgebraKind::C, 2, 2, m));
  const i64 n = (i64{1} << m) + 1;
  // A = {0, delta, ..., 1} on the real axis.
  std::vector<i64> a, ia;
  for (i64 k = 0; k < n; ++k) {
    a.insert(a.end(), {k, 0});
    ia.insert(ia.end(), {0, k});
  }
  auto product = [&](const std::vector<i64>& u, const std::vector<i64>& v) {
    std::vector<i64> flat;
    flat.reserve(u.size() * v.size() * 2);
    for (std::size_t i = 0; i < u.size() / 2; ++i) {
      for (std::size_t j = 0; j < v.size() / 2; ++j) {
        flat.insert(flat.end(), {u[2 * i], u[2 * i + 1], v[2 * j], v[2 * j + 1]});
      }
    }
    return PairSet(alg, m, 0, std::move(flat));
  };
  CounterexampleSets out{product(a, a), DSet(alg, m, 0, a), {}, DSet(alg, m, 0, a)};
  if (which == Counterexample::One) {
    std::vector<i64> x = a;
    x.insert(x.end(), {0, i64{1} << m});
    out.x = DSet(alg, m, 0, std::move(x));
    return out;
  }
  // G1 = iA x A: for x = iy, pi_x(G1) = i(A + yA) stays one-dimensional.
  PairSet g0 = product(a, a);
  PairSet g1 = product(ia, a);
  std::vector<i64> g = g0.flat();
  g.insert(g.end(), g1.flat().begin(), g1.flat().end());
  out.g = PairSet(alg, m, 0, std::move(g));
  std::vector<i64> x = a;
  x.insert(x.end(), ia.begin(), ia.end());
  out.x = DSet(alg, m, 0, std::move(x));
  out.parts = {std::move(g0), std::move(g1)};
  return out;
}

std::string format_coords(std::span<const i64> coords) {
  std::string s;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(coords[i]);
  }
  return s;
}

namespace {

ExperimentRecord base_record(const Algebra& alg, int m, std::string id, std::string op) {
  ExperimentRecord r;
  r.exp_id = std::move(id);
  r.algebra = alg.name();
  r.p = alg.base() == Base::Padic ? alg.prime() : 0;
  r.d = alg.dim();
  r.m = m;
  r.op = std::move(op);
  return r;
}

}  // namespace

std::vector<ExperimentRecord> measure_projection_profile(const PairSet& g, const DSet& x) {
  if (!g.algebra().same_kind(x.algebra())) fail(Errc::AlgebraMismatch, "G and X differ in algebra");
  std::vector<ExperimentRecord> rows;
  const int m = g.scale_exp();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const DSet img = project(element_of(x, x.point(i)), g);
    auto r = base_record(g.algebra(), m, "proj-" + std::to_string(i), "proj");
    r.x_coords = format_coords(x.point(i));
    r.count = covering_number(img, m);
    r.exponent = covering_exponent(g.algebra(), r.count, m);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

// Element of A with the smallest max-norm; sorted order breaks ties.
std::size_t centre_index(const DSet& a) {
  const Algebra work = working_algebra(a);
  std::size_t best = 0;
  double best_norm = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double nrm = 0;
    if (a.algebra().base() == Base::Real) {
      for (i64 c : a.point(i)) nrm = std::max(nrm, std::fabs(static_cast<double>(c)));
    } else {
      nrm = norm(work, element_of(a, a.point(i)));
    }
    if (i == 0 || nrm < best_norm) {
      best = i;
      best_norm = nrm;
    }
  }
  return best;
}

}  // namespace

ExpansionRun run_expansion(const DSet& a, const Schedule& sc) {
  if (a.empty()) fail(Errc::EmptyInput, "expansion needs a nonempty set");
  const Algebra& alg = a.algebra();
  const int m = a.scale_exp();
  const int d = alg.dim();
  const double s = to_double(sc.s);
  const double c1 = (sc.s > 0 && sc.s < Rational(d)) ? to_double(choose_c1(sc.s, Rational(d))) : 0.0;
  ExpansionRun run{{}, {}, a};
  auto record = [&](int round, const DSet& set, const std::string& op) {
    ExpansionRound r;
    r.round = round;
    r.size = set.size();
    r.count = covering_number(set, m);
    r.exponent = std::min<double>(d, covering_exponent(alg, r.count, m));
    r.verified = verified_exponent(set, sc.nc_C);
    r.predicted = std::min<double>(d, s + round * c1 / 2);
    run.rounds.push_back(r);
    auto rec = base_record(alg, m, "expand-" + std::to_string(round), op);
    rec.s = s;
    rec.sigma = to_double(sc.sigma);
    rec.t = to_double(sc.t);
    rec.count = r.count;
    rec.exponent = r.exponent;
    run.records.push_back(std::move(rec));
  };
  record(0, a, "input");
  DSet cur = a;
  for (int round = 1; round <= sc.n_iters; ++round) {
    const AvoidReport av = avoids_subalgebras(cur, sc.C, sc.net_exp);
    if (!av.pass) {
      fail(Errc::TrappedInput, "input lies within 1/C of the sub-algebra " + av.worst_member);
    }
    DSet grown = iterated(cur, sc.n_sum, sc.n_prod);
    if (grown.empty()) fail(Errc::EmptyInput, "iterated set missed the unit ball");
    const auto c = grown.point(centre_index(grown));
    const DSet centre(grown.algebra_ptr(), m, grown.radius_exp(), std::vector<i64>(c.begin(), c.end()));
    grown = intersect_unit_ball(difference_set(grown, centre));
    cur = uniform_subset(grown, sc.levels_per_stage);
    record(round, cur,
           "iter(n_sum=" + std::to_string(sc.n_sum) + " n_prod=" + std::to_string(sc.n_prod) + ")");
  }
  run.last = std::move(cur);
  return run;
}

BabyprojResult probe_babyproj(const DSet& a, const DSet& x) {
  if (!a.algebra().same_kind(x.algebra())) fail(Errc::AlgebraMismatch, "A and X differ in algebra");
  if (a.empty() || x.empty()) fail(Errc::EmptyInput, "babyproj needs nonempty A and X");
  const int m = a.scale_exp();
  BabyprojResult out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const DSet img = sumset(a, scalar_image(element_of(x, x.point(i)), a));
    auto r = base_record(a.algebra(), m, "babyproj-" + std::to_string(i), "A+xA");
    r.x_coords = format_coords(x.point(i));
    r.count = covering_number(img, m);
    r.exponent = covering_exponent(a.algebra(), r.count, m);
    if (r.count > out.best_count) {
      out.best_count = r.count;
      out.witness = i;
    }
    out.records.push_back(std::move(r));
  }
  const double base = static_cast<double>(covering_number(a, m));
  out.gain = static_cast<double>(out.best_count) / base;
  out.gain_exponent = m > 0 ? std::log(out.gain) / (m * log_radix(a.algebra())) : 0.0;
  return out;
}

std::vector<FibreRow> fibre_profile(const PairSet& g, const DSet& x, double c1, int rho_exp) {
  if (!g.algebra().same_kind(x.algebra())) fail(Errc::AlgebraMismatch, "G and X differ in algebra");
  const int m = g.scale_exp();
  if (rho_exp < 0 || rho_exp > m) fail(Errc::ScaleOutOfRange, "rho_exp outside [0, m]");
  if (g.empty()) fail(Errc::EmptyInput, "fibres of an empty graph");
  const Algebra& alg = g.algebra();
  const int d = alg.dim();
  const bool real = alg.base() == Base::Real;
  std::vector<FibreRow> rows;
  std::vector<i128> raw(d);
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    const Element e = element_of(x, x.point(xi));
    // pi_x of every pair (with multiplicity), reduced to its rho-cell.
    std::vector<i64> cells;
    cells.reserve(g.size() * d);
    const int r = real ? 0 : g.radius_exp() + e.shift;
    const Algebra work = real ? alg : alg.with_precision(m + r);
    const i64 mod = real ? 0 : work.scale();
    const i64 cell_mod = real ? 0 : padic::ipow(alg.prime(), rho_exp + r);
    const i64 lift = real ? 1 : padic::ipow(alg.prime(), e.shift);
    for (std::size_t i = 0; i < g.size(); ++i) {
      mul_coords(work, e.coords, g.second(i), raw, mod);
      const auto first = g.first(i);
      for (int k = 0; k < d; ++k) {
        if (real) {
          const i64 v = first[k] + static_cast<i64>(round_shift(raw[k], alg.precision()));
          const i64 side = i64{1} << (m - rho_exp);
          cells.push_back(v >= 0 ? v / side : -((-v + side - 1) / side));
        } else {
          const i64 v = padic::reduce(static_cast<i128>(first[k]) * lift + raw[k], mod);
          cells.push_back(v % cell_mod);
        }
      }
    }
    std::vector<std::size_t> idx(g.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto row = [&](std::size_t t) { return cells.begin() + t * d; };
    std::sort(idx.begin(), idx.end(), [&](std::size_t u, std::size_t v) {
      return std::lexicographical_compare(row(u), row(u) + d, row(v), row(v) + d);
    });
    FibreRow fr;
    fr.x_index = xi;
    std::size_t run = 0;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const bool same = t > 0 && std::equal(row(idx[t]), row(idx[t]) + d, row(idx[t - 1]));
      run = same ? run + 1 : 1;
      if (!same) ++fr.cells;
      if (run > fr.max_fibre) {
        fr.max_fibre = run;
        fr.cell.assign(row(idx[t]), row(idx[t]) + d);
      }
    }
    const double n = static_cast<double>(g.size());
    fr.fraction = fr.max_fibre / n;
    fr.big_threshold = std::pow(static_cast<double>(alg.radix()), -10.0 * c1 * m) * std::sqrt(n);
    fr.big = fr.max_fibre >= fr.big_threshold;
    rows.push_back(std::move(fr));
  }
  return rows;
}

std::string fibres_csv(const std::vector<FibreRow>& rows) {
  std::ostringstream os;
  os << "x_index,max_fibre,cell,cells,fraction,big_threshold,big\n";
  for (const auto& r : rows) {
    os << r.x_index << ',' << r.max_fibre << ',' << format_coords(r.cell) << ',' << r.cells << ','
       << fmt(r.fraction) << ',' << fmt(r.big_threshold) << ',' << (r.big ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace dlab
