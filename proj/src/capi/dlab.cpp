#include "dlab/dlab.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "core/algebra.hpp"
#include "core/dset.hpp"
#include "core/energy.hpp"
#include "core/formats.hpp"
#include "core/lab.hpp"
#include "core/setops.hpp"
#include "core/structure.hpp"
#include "json.hpp"

#ifndef DLAB_VERSION_STRING
#define DLAB_VERSION_STRING "0.1.0"
#endif

struct dlab_algebra {
  dlab::AlgebraPtr alg;
};

struct dlab_set {
  dlab::DSet set;
};

struct dlab_pairs {
  dlab::PairSet set;
};

namespace {

using dlab::DSet;
using dlab::Element;
using dlab::Errc;
using dlab::PairSet;

thread_local std::string g_last_error;

dlab_status to_status(Errc e) { return static_cast<dlab_status>(static_cast<int>(e) + 1); }

template <class F>
dlab_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return DLAB_OK;
  } catch (const dlab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DLAB_E_BUDGET_EXCEEDED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DLAB_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) dlab::fail(Errc::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Element element(const dlab::Algebra& alg, dlab_element e) {
  need(e.coords, "element coordinates");
  Element out;
  out.coords.assign(e.coords, e.coords + alg.dim());
  out.shift = e.shift;
  return out;
}

void emit(const Element& e, int64_t* out, int* shift) {
  need(out, "out");
  std::copy(e.coords.begin(), e.coords.end(), out);
  if (shift) *shift = e.shift;
}

dlab::Side side_of(dlab_side s) { return s == DLAB_RIGHT ? dlab::Side::Right : dlab::Side::Left; }

dlab_set* wrap(DSet s) { return new dlab_set{std::move(s)}; }
dlab_pairs* wrap(PairSet s) { return new dlab_pairs{std::move(s)}; }

dlab::LinearMap linear_map(const dlab::Algebra& alg, const dlab_element* entries) {
  need(entries, "entries");
  dlab::LinearMap l;
  for (int i = 0; i < 4; ++i) l.entry[i] = element(alg, entries[i]);
  return l;
}

dlab::SetHeader header(const char* config) {
  return {DLAB_VERSION_STRING, config ? std::string(config) : std::string()};
}

std::map<std::string, Element> scalars(const dlab::Algebra& alg, const dlab_element* y1,
                                       const dlab_element* y2) {
  std::map<std::string, Element> out;
  if (y1) out["y1"] = element(alg, *y1);
  if (y2) out["y2"] = element(alg, *y2);
  return out;
}

}  // namespace

extern "C" {

const char* dlab_version(void) { return DLAB_VERSION_STRING; }

const char* dlab_last_error(void) { return g_last_error.c_str(); }

const char* dlab_status_name(dlab_status status) {
  if (status == DLAB_OK) return "Ok";
  if (status == DLAB_E_INTERNAL) return "Internal";
  if (status >= 1 && status <= DLAB_E_IO) return dlab::errc_name(static_cast<Errc>(status - 1));
  return "Unknown";
}

void dlab_string_free(char* s) { std::free(s); }

void dlab_set_point_budget(size_t points) { dlab::set_point_budget(points); }

size_t dlab_point_budget(void) { return dlab::point_budget(); }

dlab_status dlab_algebra_new(dlab_kind kind, int64_t p, int d, int m, const int64_t* poly,
                             size_t poly_len, dlab_algebra** out) {
  return guard([&] {
    need(out, "out");
    if (kind < DLAB_R || kind > DLAB_QP_EXT) dlab::fail(Errc::InvalidArgument, "unknown algebra kind");
    std::vector<int64_t> coeffs;
    if (poly) coeffs.assign(poly, poly + poly_len);
    *out = new dlab_algebra{
        dlab::share(dlab::Algebra::make(static_cast<dlab::AlgebraKind>(kind), p, d, m, coeffs))};
  });
}

void dlab_algebra_free(dlab_algebra* alg) { delete alg; }

int dlab_algebra_dim(const dlab_algebra* alg) { return alg ? alg->alg->dim() : 0; }

int dlab_algebra_precision(const dlab_algebra* alg) { return alg ? alg->alg->precision() : 0; }

dlab_status dlab_algebra_name(const dlab_algebra* alg, char** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = dup(alg->alg->name());
  });
}

dlab_status dlab_algebra_mul(const dlab_algebra* alg, dlab_element x, dlab_element y, int64_t* out,
                             int* out_shift) {
  return guard([&] {
    need(alg, "alg");
    const auto& a = *alg->alg;
    emit(dlab::mul(a, element(a, x), element(a, y)), out, out_shift);
  });
}

dlab_status dlab_algebra_inv(const dlab_algebra* alg, dlab_element x, int64_t* out, int* out_shift) {
  return guard([&] {
    need(alg, "alg");
    const auto& a = *alg->alg;
    emit(dlab::inv(a, element(a, x)), out, out_shift);
  });
}

dlab_status dlab_algebra_norm(const dlab_algebra* alg, dlab_element x, double* out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = dlab::norm(*alg->alg, element(*alg->alg, x));
  });
}

dlab_status dlab_set_new(const dlab_algebra* alg, int m, int radius_exp, const int64_t* coords,
                         size_t n_points, dlab_set** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    if (n_points) need(coords, "coords");
    const std::size_t len = n_points * alg->alg->dim();
    *out = wrap(DSet(alg->alg, m, radius_exp, std::vector<int64_t>(coords, coords + len)));
  });
}

void dlab_set_free(dlab_set* s) { delete s; }

size_t dlab_set_size(const dlab_set* s) { return s ? s->set.size() : 0; }

int dlab_set_dim(const dlab_set* s) { return s ? s->set.dim() : 0; }

int dlab_set_scale_exp(const dlab_set* s) { return s ? s->set.scale_exp() : 0; }

int dlab_set_radius_exp(const dlab_set* s) { return s ? s->set.radius_exp() : 0; }

const int64_t* dlab_set_coords(const dlab_set* s) { return s ? s->set.flat().data() : nullptr; }

dlab_status dlab_set_algebra(const dlab_set* s, dlab_algebra** out) {
  return guard([&] {
    need(s, "set");
    need(out, "out");
    *out = new dlab_algebra{s->set.algebra_ptr()};
  });
}

dlab_status dlab_set_read(const char* path, dlab_set** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(dlab::read_dset(path));
  });
}

dlab_status dlab_set_write(const dlab_set* s, const char* path, const char* config) {
  return guard([&] {
    need(s, "set");
    need(path, "path");
    dlab::write_file_atomic(path, dlab::to_text(s->set, header(config)));
  });
}

dlab_status dlab_pairs_new(const dlab_algebra* alg, int m, int radius_exp, const int64_t* coords,
                           size_t n_pairs, dlab_pairs** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    if (n_pairs) need(coords, "coords");
    const std::size_t len = n_pairs * 2 * alg->alg->dim();
    *out = wrap(PairSet(alg->alg, m, radius_exp, std::vector<int64_t>(coords, coords + len)));
  });
}

void dlab_pairs_free(dlab_pairs* g) { delete g; }

size_t dlab_pairs_size(const dlab_pairs* g) { return g ? g->set.size() : 0; }

int dlab_pairs_dim(const dlab_pairs* g) { return g ? g->set.dim() : 0; }

const int64_t* dlab_pairs_coords(const dlab_pairs* g) { return g ? g->set.flat().data() : nullptr; }

dlab_status dlab_pairs_read(const char* path, dlab_pairs** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(dlab::read_pairs(path));
  });
}

dlab_status dlab_pairs_write(const dlab_pairs* g, const char* path, const char* config) {
  return guard([&] {
    need(g, "pairs");
    need(path, "path");
    dlab::write_file_atomic(path, dlab::to_text(g->set, header(config)));
  });
}

dlab_status dlab_cartesian(const dlab_set* a, const dlab_set* b, dlab_pairs** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = wrap(dlab::cartesian(a->set, b->set));
  });
}

dlab_status dlab_gen_random(const dlab_algebra* alg, int m, double s, uint64_t seed, double C,
                            dlab_set** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = wrap(dlab::gen_random_dset(alg->alg, m, s, seed, C));
  });
}

dlab_status dlab_gen_circle(const dlab_algebra* alg, int m, dlab_set** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = wrap(dlab::gen_circle_net(alg->alg, m));
  });
}

dlab_status dlab_gen_ap(const dlab_algebra* alg, int m, size_t count, int64_t step, int64_t start,
                        dlab_set** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = wrap(dlab::gen_ap(alg->alg, m, count, step, start));
  });
}

dlab_status dlab_gen_full_grid(const dlab_algebra* alg, int m, dlab_set** out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = wrap(dlab::gen_full_grid(alg->alg, m));
  });
}

dlab_status dlab_gen_counterexample(int which, int m, dlab_pairs** g, dlab_set** x,
                                    dlab_pairs** g0, dlab_pairs** g1) {
  return guard([&] {
    need(g, "g");
    need(x, "x");
    if (which != 1 && which != 2) dlab::fail(Errc::InvalidArgument, "which must be 1 or 2");
    auto ce = dlab::gen_counterexample(
        which == 1 ? dlab::Counterexample::One : dlab::Counterexample::Two, m);
    if (g0 && ce.parts.size() == 2) *g0 = wrap(ce.parts[0]);
    if (g1 && ce.parts.size() == 2) *g1 = wrap(ce.parts[1]);
    *g = wrap(std::move(ce.g));
    *x = wrap(std::move(ce.x));
  });
}

dlab_status dlab_covering_number(const dlab_set* s, int k, size_t* out) {
  return guard([&] {
    need(s, "set");
    need(out, "out");
    *out = dlab::covering_number(s->set, k);
  });
}

dlab_status dlab_pairs_covering_number(const dlab_pairs* g, int k, size_t* out) {
  return guard([&] {
    need(g, "pairs");
    need(out, "out");
    *out = dlab::covering_number(g->set, k);
  });
}

dlab_status dlab_verify_nc(const dlab_set* s, double exponent, double C, int* pass, char** json) {
  return guard([&] {
    need(s, "set");
    const auto rep = dlab::is_nonconcentrated(s->set, exponent, C);
    if (pass) *pass = rep.pass ? 1 : 0;
    if (json) {
      nlohmann::json j{{"pass", rep.pass},
                       {"s", rep.s},
                       {"C", rep.C},
                       {"best_C", rep.best_C},
                       {"worst_center", rep.worst_center},
                       {"worst_radius_exp", rep.worst_radius_exp},
                       {"worst_count", rep.worst_count}};
      *json = dup(j.dump(2));
    }
  });
}

dlab_status dlab_verified_exponent(const dlab_set* s, double C, double* out) {
  return guard([&] {
    need(s, "set");
    need(out, "out");
    *out = dlab::verified_exponent(s->set, C);
  });
}

dlab_status dlab_uniform_subset(const dlab_set* s, int levels_per_stage, dlab_set** out,
                                char** audit_json) {
  return guard([&] {
    need(s, "set");
    need(out, "out");
    DSet u = dlab::uniform_subset(s->set, levels_per_stage);
    if (audit_json) {
      const auto audit = dlab::uniformity_audit(u, levels_per_stage);
      nlohmann::json j{{"input_size", s->set.size()},
                       {"output_size", u.size()},
                       {"stages", audit.stages},
                       {"worst_ratio", audit.worst_ratio},
                       {"pass", audit.pass}};
      *audit_json = dup(j.dump(2));
    }
    *out = wrap(std::move(u));
  });
}

dlab_status dlab_sumset(const dlab_set* a, const dlab_set* b, dlab_set** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = wrap(dlab::sumset(a->set, b->set));
  });
}

dlab_status dlab_difference(const dlab_set* a, const dlab_set* b, dlab_set** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = wrap(dlab::difference_set(a->set, b->set));
  });
}

dlab_status dlab_product(const dlab_set* a, const dlab_set* b, dlab_side side, dlab_set** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = wrap(dlab::product_set(a->set, b->set, side_of(side)));
  });
}

dlab_status dlab_iterated(const dlab_set* a, int n_sum, int n_prod, dlab_set** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    *out = wrap(dlab::iterated(a->set, n_sum, n_prod));
  });
}

dlab_status dlab_scalar_image(const dlab_set* a, dlab_element x, dlab_side side, dlab_set** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    *out = wrap(dlab::scalar_image(element(a->set.algebra(), x), a->set, side_of(side)));
  });
}

dlab_status dlab_project(const dlab_pairs* g, dlab_element x, dlab_set** out) {
  return guard([&] {
    need(g, "pairs");
    need(out, "out");
    *out = wrap(dlab::project(element(g->set.algebra(), x), g->set));
  });
}

dlab_status dlab_quotient_set(const dlab_set* a, int rho_exp, dlab_side side, dlab_set** out,
                              char** witness_json) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    auto q = dlab::quotient_set(a->set, rho_exp, side_of(side));
    if (witness_json) {
      nlohmann::json j{{"rho_exp", q.rho_exp},
                       {"side", q.side == dlab::Side::Left ? "left" : "right"},
                       {"witness", q.witness}};
      *witness_json = dup(j.dump());
    }
    *out = wrap(std::move(q.set));
  });
}

dlab_status dlab_linear_map_det(const dlab_algebra* alg, const dlab_element* entries, double* out) {
  return guard([&] {
    need(alg, "alg");
    need(out, "out");
    *out = dlab::linear_map_det(*alg->alg, linear_map(*alg->alg, entries));
  });
}

dlab_status dlab_apply_linear_map(const dlab_pairs* g, const dlab_element* entries,
                                  dlab_pairs** out) {
  return guard([&] {
    need(g, "pairs");
    need(out, "out");
    *out = wrap(dlab::apply_linear_map(linear_map(g->set.algebra(), entries), g->set));
  });
}

dlab_status dlab_apply_dual(const dlab_set* x, const dlab_element* entries, dlab_set** out) {
  return guard([&] {
    need(x, "x");
    need(out, "out");
    *out = wrap(dlab::apply_dual(linear_map(x->set.algebra(), entries), x->set));
  });
}

dlab_status dlab_avoid(const dlab_set* a, double C, int strong, int net_exp, int* pass, char** json) {
  return guard([&] {
    need(a, "a");
    if (strong) {
      const auto rep = dlab::strongly_avoids(a->set, C, net_exp);
      if (pass) *pass = rep.pass ? 1 : 0;
      if (json) *json = dup(dlab::to_json(rep));
    } else {
      const auto rep = dlab::avoids_subalgebras(a->set, C, net_exp);
      if (pass) *pass = rep.pass ? 1 : 0;
      if (json) *json = dup(dlab::to_json(rep));
    }
  });
}

dlab_status dlab_escape(const dlab_set* a, double floor, size_t max_pool, char** json) {
  return guard([&] {
    need(a, "a");
    need(json, "json");
    const auto res = dlab::escape_basis(a->set, floor, max_pool ? max_pool : 100000);
    *json = dup(dlab::to_json(dlab::working_algebra(a->set), res));
  });
}

dlab_status dlab_dichotomy(const dlab_set* a, int rho_exp, dlab_side side, int mode,
                           int constructive_levels, double floor, char** json) {
  return guard([&] {
    need(a, "a");
    need(json, "json");
    if (mode < 0 || mode > 2) dlab::fail(Errc::InvalidArgument, "mode must be 0, 1 or 2");
    const auto q = dlab::quotient_set(a->set, rho_exp, side_of(side));
    std::vector<Element> basis;
    if (mode != 2) basis = dlab::escape_basis(a->set, floor).basis;
    dlab::DichotomyOptions opts;
    opts.mode = static_cast<dlab::DichotomyMode>(mode);
    opts.constructive_levels = constructive_levels;
    *json = dup(dlab::to_json(dlab::dichotomy_check(q, a->set, basis, opts)));
  });
}

dlab_status dlab_additive_energy(const dlab_set* a, const dlab_set* b, uint64_t* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = dlab::additive_energy(a->set, b->set);
  });
}

dlab_status dlab_count_tv(const dlab_set* a, const dlab_set* x, int rho_exp, int symmetric,
                          int adjacent, double s, double sigma, double t, double eps, char** json) {
  return guard([&] {
    need(a, "a");
    need(x, "x");
    need(json, "json");
    dlab::TvOptions opts;
    opts.symmetric = symmetric != 0;
    opts.adjacent = adjacent != 0;
    opts.s = s;
    opts.sigma = sigma;
    opts.t = t;
    opts.eps = eps;
    *json = dup(dlab::to_json(dlab::quintuple_count_tv(a->set, x->set, rho_exp, opts)));
  });
}

dlab_status dlab_count_sparse(const dlab_set* a, dlab_element p, dlab_element q, int adjacent,
                              double s, int rho_exp, char** json) {
  return guard([&] {
    need(a, "a");
    need(json, "json");
    dlab::SparseOptions opts;
    opts.adjacent = adjacent != 0;
    opts.s = s;
    opts.rho_exp = rho_exp;
    const auto& alg = a->set.algebra();
    *json = dup(dlab::to_json(
        dlab::quadruple_count_sparse(a->set, element(alg, p), element(alg, q), opts)));
  });
}

dlab_status dlab_bsg(const dlab_pairs* h, const dlab_set* a, const dlab_set* b, char** json,
                     dlab_set** a_sub, dlab_set** b_sub) {
  return guard([&] {
    need(h, "h");
    need(a, "a");
    need(b, "b");
    auto res = dlab::bsg_extract(h->set, a->set, b->set);
    if (json) *json = dup(dlab::to_json(res));
    if (a_sub) *a_sub = wrap(res.a_sub);
    if (b_sub) *b_sub = wrap(res.b_sub);
  });
}

dlab_status dlab_ledger(const dlab_set* const* sets, const char* const* names, size_t n,
                        const dlab_element* y1, const dlab_element* y2, char** csv,
                        size_t* violations) {
  return guard([&] {
    need(sets, "sets");
    need(names, "names");
    if (n == 0) dlab::fail(Errc::EmptyInput, "ledger needs at least one set");
    std::vector<std::pair<std::string, DSet>> named;
    for (size_t i = 0; i < n; ++i) {
      need(sets[i], "set");
      need(names[i], "name");
      named.emplace_back(names[i], sets[i]->set);
    }
    const auto ledger = dlab::ruzsa_ledger(named, scalars(sets[0]->set.algebra(), y1, y2));
    if (csv) *csv = dup(dlab::to_csv(ledger));
    if (violations) *violations = ledger.violations;
  });
}

dlab_status dlab_eval_expr(const char* expr, const dlab_set* const* sets, const char* const* names,
                           size_t n, const dlab_element* y1, const dlab_element* y2,
                           dlab_set** out) {
  return guard([&] {
    need(expr, "expr");
    need(out, "out");
    if (n == 0) dlab::fail(Errc::EmptyInput, "expression needs at least one set");
    std::map<std::string, DSet> named;
    for (size_t i = 0; i < n; ++i) named.emplace(names[i], sets[i]->set);
    *out = wrap(dlab::eval_expr(expr, named, scalars(sets[0]->set.algebra(), y1, y2)));
  });
}

dlab_status dlab_schedule(const char* s, const char* sigma, const char* t, const char* eps, int d,
                          int m, char** json) {
  return guard([&] {
    need(s, "s");
    need(json, "json");
    auto rat = [](const char* v, const char* fallback) {
      return dlab::parse_rational(v ? v : fallback);
    };
    const auto rs = rat(s, "0"), rsig = rat(sigma, s), rt = rat(t, "0"), re = rat(eps, "0");
    const auto sc = dlab::make_schedule(rs, rsig, rt, re, d, m);
    nlohmann::json j{{"s", dlab::to_string(sc.s)},
                     {"sigma", dlab::to_string(sc.sigma)},
                     {"t", dlab::to_string(sc.t)},
                     {"eps", dlab::to_string(sc.eps)},
                     {"d", sc.d},
                     {"delta_exp", sc.delta_exp},
                     {"rho_exp", sc.rho_exp},
                     {"Delta_exp", sc.Delta_exp},
                     {"c1", dlab::to_string(sc.c1)},
                     {"c_tv", dlab::to_string(sc.c_tv)}};
    if (rs > 0 && rs < dlab::Rational(d)) {
      j["rho_expand_exponent"] = dlab::to_string(dlab::choose_rho_expand(rs, d, m).exponent);
    }
    if (rt > 0 && rt - rsig + re > 0) {
      const auto tv = dlab::choose_rho_tv(rs, rsig, rt, re, m);
      j["rho_tv_exponent"] = dlab::to_string(tv.exponent);
      j["rho_tv_exp"] = tv.rho_exp;
      j["c_tv_vanishing"] = tv.vanishing;
    }
    if (rs > 0 && rs < rt && rt < dlab::Rational(d)) {
      const auto budget = dlab::iteration_budget(rs, rt, d, true);
      j["n_iters"] = budget.n;
      j["n_estimate"] = budget.n_estimate;
      j["N_budget"] = budget.N_symbolic;
      j["log10_N"] = budget.log10_N;
      std::vector<double> traj(budget.trajectory.begin(), budget.trajectory.end());
      j["trajectory"] = traj;
    }
    *json = dup(j.dump(2));
  });
}

dlab_status dlab_projection_profile(const dlab_pairs* g, const dlab_set* x, dlab_format format,
                                    char** out) {
  return guard([&] {
    need(g, "pairs");
    need(x, "x");
    need(out, "out");
    const auto rows = dlab::measure_projection_profile(g->set, x->set);
    *out = dup(format == DLAB_JSON ? dlab::records_json(rows) : dlab::records_csv(rows));
  });
}

dlab_status dlab_expand(const dlab_set* a, const char* s, int rounds, int n_sum, int n_prod,
                        double C, int levels_per_stage, dlab_format format, char** out,
                        dlab_set** last) {
  return guard([&] {
    need(a, "a");
    need(s, "s");
    need(out, "out");
    dlab::Schedule sc;
    sc.s = dlab::parse_rational(s);
    sc.sigma = sc.s;
    sc.d = a->set.dim();
    sc.delta_exp = a->set.scale_exp();
    sc.n_iters = rounds;
    sc.n_sum = n_sum;
    sc.n_prod = n_prod;
    sc.C = C;
    sc.levels_per_stage = levels_per_stage;
    auto run = dlab::run_expansion(a->set, sc);
    if (format == DLAB_JSON) {
      nlohmann::json rs = nlohmann::json::array();
      for (const auto& r : run.rounds) {
        rs.push_back({{"round", r.round},
                      {"size", r.size},
                      {"count", r.count},
                      {"exponent", r.exponent},
                      {"verified", r.verified},
                      {"predicted", r.predicted}});
      }
      *out = dup(nlohmann::json{{"rounds", rs},
                                {"records", nlohmann::json::parse(dlab::records_json(run.records))}}
                     .dump(2));
    } else {
      *out = dup(dlab::records_csv(run.records));
    }
    if (last) *last = wrap(std::move(run.last));
  });
}

dlab_status dlab_babyproj(const dlab_set* a, const dlab_set* x, dlab_format format, char** out) {
  return guard([&] {
    need(a, "a");
    need(x, "x");
    need(out, "out");
    const auto res = dlab::probe_babyproj(a->set, x->set);
    if (format == DLAB_JSON) {
      *out = dup(nlohmann::json{{"witness", res.witness},
                                {"best_count", res.best_count},
                                {"gain", res.gain},
                                {"gain_exponent", res.gain_exponent},
                                {"records", nlohmann::json::parse(dlab::records_json(res.records))}}
                     .dump(2));
    } else {
      *out = dup(dlab::records_csv(res.records));
    }
  });
}

dlab_status dlab_fibres(const dlab_pairs* g, const dlab_set* x, double c1, int rho_exp, char** csv) {
  return guard([&] {
    need(g, "pairs");
    need(x, "x");
    need(csv, "csv");
    *csv = dup(dlab::fibres_csv(dlab::fibre_profile(g->set, x->set, c1, rho_exp)));
  });
}

}  // extern "C"
