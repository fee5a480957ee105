// dlab command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dlab/dlab.h"
#include "json.hpp"

namespace {

struct Failure {
  dlab_status status;
  std::string message;
};

void check(dlab_status st) {
  if (st != DLAB_OK) throw Failure{st, dlab_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{DLAB_E_INVALID_ARGUMENT, msg}; }

struct SetDel {
  void operator()(dlab_set* s) const { dlab_set_free(s); }
};
struct PairsDel {
  void operator()(dlab_pairs* g) const { dlab_pairs_free(g); }
};
struct AlgDel {
  void operator()(dlab_algebra* a) const { dlab_algebra_free(a); }
};
struct StrDel {
  void operator()(char* s) const { dlab_string_free(s); }
};
using Set = std::unique_ptr<dlab_set, SetDel>;
using Pairs = std::unique_ptr<dlab_pairs, PairsDel>;
using Alg = std::unique_ptr<dlab_algebra, AlgDel>;
using Str = std::unique_ptr<char, StrDel>;

Set read_set(const std::string& path) {
  dlab_set* s = nullptr;
  check(dlab_set_read(path.c_str(), &s));
  return Set(s);
}

Pairs read_pairs(const std::string& path) {
  dlab_pairs* g = nullptr;
  check(dlab_pairs_read(path.c_str(), &g));
  return Pairs(g);
}

std::string take(char* s) {
  Str owner(s);
  return s ? std::string(s) : std::string();
}

// Element text: comma-separated grid coordinates, optionally "@shift".
struct ElementText {
  std::vector<int64_t> coords;
  int shift = 0;
  dlab_element view() const { return {coords.data(), shift}; }
};

ElementText parse_element(const std::string& text, int dim) {
  ElementText e;
  std::string body = text;
  const auto at = text.find('@');
  try {
    if (at != std::string::npos) {
      e.shift = std::stoi(text.substr(at + 1));
      body = text.substr(0, at);
    }
    std::stringstream ss(body);
    std::string c;
    while (std::getline(ss, c, ',')) e.coords.push_back(std::stoll(c));
  } catch (const std::logic_error&) {
    usage_error("bad element '" + text + "'");
  }
  if (static_cast<int>(e.coords.size()) != dim) {
    usage_error("element '" + text + "' needs " + std::to_string(dim) + " coordinates");
  }
  return e;
}

std::vector<ElementText> parse_map(const std::string& text, int dim) {
  std::vector<ElementText> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(parse_element(part, dim));
  if (out.size() != 4) usage_error("a linear map needs four entries separated by ';'");
  return out;
}

std::vector<dlab_element> views(const std::vector<ElementText>& v) {
  std::vector<dlab_element> out;
  for (const auto& e : v) out.push_back(e.view());
  return out;
}

int set_dim(const dlab_set* s) { return dlab_set_dim(s); }

int pairs_dim(const dlab_pairs* g) { return dlab_pairs_dim(g); }

class Runner {
 public:
  explicit Runner(CLI::App& app) : app_(app) {}

  // JSON echo of the resolved configuration of the active subcommand.
  std::string config() const {
    nlohmann::ordered_json j;
    j["tool"] = "dlab";
    j["version"] = dlab_version();
    const CLI::App* sub = nullptr;
    for (const auto* s : app_.get_subcommands()) sub = s;
    j["subcommand"] = sub ? sub->get_name() : "";
    nlohmann::ordered_json opts = nlohmann::ordered_json::object();
    auto add = [&](const CLI::App* a) {
      for (const CLI::Option* o : a->get_options()) {
        if (o->get_name() == "--help" || o->get_name() == "-h") continue;
        const auto res = o->reduced_results();
        std::string name = o->get_single_name();
        if (!res.empty()) {
          if (res.size() == 1) {
            opts[name] = res[0];
          } else {
            opts[name] = res;
          }
        } else if (!o->get_default_str().empty()) {
          opts[name] = o->get_default_str();
        }
      }
    };
    add(&app_);
    if (sub) {
      add(sub);
      for (const auto* s2 : sub->get_subcommands()) {
        j["mode"] = s2->get_name();
        add(s2);
      }
    }
    j["options"] = opts;
    return j.dump();
  }

  std::string csv_header() const {
    return std::string("# dlab ") + dlab_version() + " config=" + config() + "\n";
  }

  std::string json_wrap(const std::string& body) const {
    return "{\n\"header\": " + config() + ",\n\"result\": " + body + "\n}\n";
  }

  void write_set(const dlab_set* s, const std::string& path) const {
    check(dlab_set_write(s, path.c_str(), config().c_str()));
  }

  void write_pairs(const dlab_pairs* g, const std::string& path) const {
    check(dlab_pairs_write(g, path.c_str(), config().c_str()));
  }

  // Text report: stdout as is, or a file with the header line.
  void report(const std::string& text, bool json, const std::string& out) const {
    if (out.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    const std::string content = json ? json_wrap(text) : csv_header() + text;
    const std::string tmp = out + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw Failure{DLAB_E_IO, "cannot write " + tmp};
    const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size();
    if (std::fclose(f) != 0 || !ok || std::rename(tmp.c_str(), out.c_str()) != 0) {
      std::remove(tmp.c_str());
      throw Failure{DLAB_E_IO, "cannot write " + out};
    }
  }

 private:
  CLI::App& app_;
};

dlab_kind parse_kind(const std::string& name, int d) {
  if (name == "R") return DLAB_R;
  if (name == "C") return DLAB_C;
  if (name == "H") return DLAB_H;
  if (name == "Qp") return d > 1 ? DLAB_QP_EXT : DLAB_QP;
  usage_error("algebra must be R, C, H or Qp");
}

struct AlgebraOpts {
  std::string kind = "C";
  int64_t p = 2;
  int d = 0;
  int m = 8;
  std::string poly;

  void add(CLI::App* sub) {
    sub->add_option("--algebra", kind, "R, C, H or Qp")->capture_default_str();
    sub->add_option("--p", p, "prime (Qp)")->capture_default_str();
    sub->add_option("--d", d, "dimension (Qp extensions)")->capture_default_str();
    sub->add_option("--m", m, "scale exponent: delta = radix^-m")->capture_default_str();
    sub->add_option("--poly", poly, "defining polynomial c0,c1,...,cd (Qp extensions)");
  }

  Alg make() const {
    std::vector<int64_t> coeffs;
    std::stringstream ss(poly);
    std::string c;
    try {
      while (std::getline(ss, c, ',')) coeffs.push_back(std::stoll(c));
    } catch (const std::logic_error&) {
      usage_error("bad --poly");
    }
    const int dim = kind == "Qp" ? (d > 0 ? d : 1) : 0;
    dlab_algebra* a = nullptr;
    check(dlab_algebra_new(parse_kind(kind, dim), p, dim, m, coeffs.empty() ? nullptr : coeffs.data(),
                           coeffs.size(), &a));
    return Alg(a);
  }
};

dlab_side parse_side(const std::string& s) {
  if (s == "left") return DLAB_LEFT;
  if (s == "right") return DLAB_RIGHT;
  usage_error("side must be left or right");
}

int run(int argc, char** argv) {
  CLI::App app{"dlab: discretised sum-product laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dlab_version()));
  std::size_t budget = 0;
  app.add_option("--budget", budget, "point budget (default: DLAB_BUDGET_POINTS or 1e7)");
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  Runner runner(app);
  std::function<void()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a set");
  AlgebraOpts gen_alg;
  gen_alg.add(gen);
  std::string gen_kind = "random", gen_out, gen_s = "1";
  uint64_t gen_seed = 0;
  double gen_C = 8;
  std::size_t gen_count = 0;
  int64_t gen_step = 1, gen_start = 0;
  gen->add_option("--kind", gen_kind, "random, circle, ap or grid")
      ->check(CLI::IsMember({"random", "circle", "ap", "grid"}))->capture_default_str();
  gen->add_option("--s", gen_s, "target exponent (random)")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--C", gen_C, "non-concentration constant (random)")->capture_default_str();
  gen->add_option("--count", gen_count, "AP length (default radix^m + 1)");
  gen->add_option("--step", gen_step, "AP step in grid units")->capture_default_str();
  gen->add_option("--start", gen_start, "AP start in grid units")->capture_default_str();
  gen->add_option("--out", gen_out)->required();
  gen->callback([&] {
    action = [&] {
      Alg alg = gen_alg.make();
      dlab_set* s = nullptr;
      if (gen_kind == "random") {
        check(dlab_gen_random(alg.get(), gen_alg.m, std::stod(gen_s), gen_seed, gen_C, &s));
      } else if (gen_kind == "circle") {
        check(dlab_gen_circle(alg.get(), gen_alg.m, &s));
      } else if (gen_kind == "ap") {
        const std::size_t n = gen_count ? gen_count : (std::size_t{1} << gen_alg.m) + 1;
        check(dlab_gen_ap(alg.get(), gen_alg.m, n, gen_step, gen_start, &s));
      } else {
        check(dlab_gen_full_grid(alg.get(), gen_alg.m, &s));
      }
      Set set(s);
      runner.write_set(set.get(), gen_out);
      std::cout << dlab_set_size(set.get()) << '\n';
    };
  });

  // counterexample
  auto* ce = app.add_subcommand("counterexample", "projection counterexamples in C");
  int ce_which = 1, ce_m = 6;
  std::vector<std::string> ce_out, ce_parts;
  ce->add_option("--which", ce_which, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
  ce->add_option("--m", ce_m)->capture_default_str();
  ce->add_option("--out", ce_out, "G.pairs X.dset")->required()->expected(2);
  ce->add_option("--parts", ce_parts, "G0.pairs G1.pairs (which = 2)")->expected(2);
  ce->callback([&] {
    action = [&] {
      dlab_pairs *g = nullptr, *g0 = nullptr, *g1 = nullptr;
      dlab_set* x = nullptr;
      check(dlab_gen_counterexample(ce_which, ce_m, &g, &x, &g0, &g1));
      Pairs pg(g), p0(g0), p1(g1);
      Set px(x);
      runner.write_pairs(pg.get(), ce_out[0]);
      runner.write_set(px.get(), ce_out[1]);
      if (!ce_parts.empty()) {
        if (!p0) usage_error("--parts needs --which 2");
        runner.write_pairs(p0.get(), ce_parts[0]);
        runner.write_pairs(p1.get(), ce_parts[1]);
      }
      std::cout << "G " << dlab_pairs_size(pg.get()) << " X " << dlab_set_size(px.get()) << '\n';
    };
  });

  // cover
  auto* cover = app.add_subcommand("cover", "covering number at level k");
  std::string cover_in;
  int cover_k = 0;
  bool cover_pairs = false;
  cover->add_option("--in", cover_in)->required();
  cover->add_option("--k", cover_k)->required();
  cover->add_flag("--pairs", cover_pairs, "input is a pair set");
  cover->callback([&] {
    action = [&] {
      std::size_t n = 0;
      if (cover_pairs) {
        Pairs g = read_pairs(cover_in);
        check(dlab_pairs_covering_number(g.get(), cover_k, &n));
      } else {
        Set s = read_set(cover_in);
        check(dlab_covering_number(s.get(), cover_k, &n));
      }
      std::cout << n << '\n';
    };
  });

  // verify-nc
  auto* vnc = app.add_subcommand("verify-nc", "check the (delta, s, C) non-concentration condition");
  std::string vnc_in, vnc_out;
  double vnc_s = 1, vnc_C = 8;
  vnc->add_option("--in", vnc_in)->required();
  vnc->add_option("--s", vnc_s)->capture_default_str();
  vnc->add_option("--C", vnc_C)->capture_default_str();
  vnc->add_option("--out", vnc_out, "write the JSON report here");
  vnc->callback([&] {
    action = [&] {
      Set s = read_set(vnc_in);
      char* json = nullptr;
      int pass = 0;
      check(dlab_verify_nc(s.get(), vnc_s, vnc_C, &pass, &json));
      std::string body = take(json);
      double expo = 0;
      check(dlab_verified_exponent(s.get(), vnc_C, &expo));
      auto j = nlohmann::ordered_json::parse(body);
      j["verified_exponent"] = expo;
      runner.report(j.dump(2), true, vnc_out);
    };
  });

  // uniformize
  auto* uni = app.add_subcommand("uniformize", "pigeonhole to a uniform subset");
  std::string uni_in, uni_out;
  int uni_T = 1;
  uni->add_option("--in", uni_in)->required();
  uni->add_option("--T", uni_T, "levels per stage")->capture_default_str();
  uni->add_option("--out", uni_out)->required();
  uni->callback([&] {
    action = [&] {
      Set s = read_set(uni_in);
      dlab_set* u = nullptr;
      char* audit = nullptr;
      check(dlab_uniform_subset(s.get(), uni_T, &u, &audit));
      Set us(u);
      const std::string text = take(audit);
      runner.write_set(us.get(), uni_out);
      std::cout << text << '\n';
    };
  });

  // op
  auto* op = app.add_subcommand("op", "set operations");
  op->require_subcommand(1);
  std::string op_a, op_b, op_g, op_x, op_out, op_side = "left", op_L, op_witness;
  int op_nsum = 2, op_nprod = 2, op_rho = 1;
  auto add_out = [&](CLI::App* s) { s->add_option("--out", op_out)->required(); };
  auto* op_sum = op->add_subcommand("sum", "A + B");
  auto* op_diff = op->add_subcommand("diff", "A - B");
  auto* op_prod = op->add_subcommand("prod", "A B");
  for (auto* s : {op_sum, op_diff, op_prod}) {
    s->add_option("--A", op_a)->required();
    s->add_option("--B", op_b)->required();
    add_out(s);
  }
  op_prod->add_option("--side", op_side, "left or right")->capture_default_str();
  auto* op_iter = op->add_subcommand("iter", "n_sum-fold sums of A^(n_prod) - A^(n_prod), in B(0,1)");
  op_iter->add_option("--A", op_a)->required();
  op_iter->add_option("--n-sum", op_nsum)->capture_default_str();
  op_iter->add_option("--n-prod", op_nprod)->capture_default_str();
  add_out(op_iter);
  auto* op_proj = op->add_subcommand("proj", "pi_x(G) = {a + x b}");
  op_proj->add_option("--G", op_g)->required();
  op_proj->add_option("--x", op_x, "element c0,c1,...[@shift] in grid units")->required();
  add_out(op_proj);
  auto* op_quot = op->add_subcommand("quot", "quotient set of A");
  op_quot->add_option("--A", op_a)->required();
  op_quot->add_option("--rho", op_rho, "rho = radix^-rho")->capture_default_str();
  op_quot->add_option("--side", op_side, "left or right")->capture_default_str();
  op_quot->add_option("--witness", op_witness, "write witnesses as JSON");
  add_out(op_quot);
  auto* op_lin = op->add_subcommand("linmap", "apply a 2x2 map over E to G (or its dual to X)");
  op_lin->add_option("--G", op_g);
  op_lin->add_option("--X", op_x, "apply the dual map to this set instead");
  op_lin->add_option("--L", op_L, "L11;L12;L21;L22, each c0,c1,...[@shift]")->required();
  add_out(op_lin);
  op->callback([&] {
    action = [&] {
      const dlab_side side = parse_side(op_side);
      dlab_set* out = nullptr;
      if (op_sum->parsed() || op_diff->parsed() || op_prod->parsed()) {
        Set a = read_set(op_a), b = read_set(op_b);
        if (op_sum->parsed()) check(dlab_sumset(a.get(), b.get(), &out));
        if (op_diff->parsed()) check(dlab_difference(a.get(), b.get(), &out));
        if (op_prod->parsed()) check(dlab_product(a.get(), b.get(), side, &out));
      } else if (op_iter->parsed()) {
        Set a = read_set(op_a);
        check(dlab_iterated(a.get(), op_nsum, op_nprod, &out));
      } else if (op_proj->parsed()) {
        Pairs g = read_pairs(op_g);
        const auto x = parse_element(op_x, pairs_dim(g.get()));
        check(dlab_project(g.get(), x.view(), &out));
      } else if (op_quot->parsed()) {
        Set a = read_set(op_a);
        char* w = nullptr;
        check(dlab_quotient_set(a.get(), op_rho, side, &out, op_witness.empty() ? nullptr : &w));
        if (!op_witness.empty()) runner.report(take(w), true, op_witness);
      } else {
        if (op_g.empty() == op_x.empty()) usage_error("linmap needs exactly one of --G and --X");
        if (!op_g.empty()) {
          Pairs g = read_pairs(op_g);
          const auto entries = parse_map(op_L, pairs_dim(g.get()));
          const auto v = views(entries);
          dlab_pairs* res = nullptr;
          check(dlab_apply_linear_map(g.get(), v.data(), &res));
          Pairs rg(res);
          runner.write_pairs(rg.get(), op_out);
          std::cout << dlab_pairs_size(rg.get()) << '\n';
          return;
        }
        Set x = read_set(op_x);
        const auto entries = parse_map(op_L, set_dim(x.get()));
        const auto v = views(entries);
        check(dlab_apply_dual(x.get(), v.data(), &out));
      }
      Set res(out);
      runner.write_set(res.get(), op_out);
      std::cout << dlab_set_size(res.get()) << '\n';
    };
  });

  // escape
  auto* esc = app.add_subcommand("escape", "escape basis and the dense/sparse dichotomy");
  std::string esc_in, esc_mode, esc_out, esc_side = "left";
  double esc_floor = 0;
  std::size_t esc_pool = 100000;
  int esc_rho = 1, esc_levels = 0;
  esc->add_option("--in", esc_in)->required();
  esc->add_option("--floor", esc_floor, "determinant floor")->capture_default_str();
  esc->add_option("--max-pool", esc_pool)->capture_default_str();
  esc->add_option("--dichotomy", esc_mode, "halving, translation or field")
      ->check(CLI::IsMember({"halving", "translation", "field"}));
  esc->add_option("--rho", esc_rho)->capture_default_str();
  esc->add_option("--side", esc_side)->capture_default_str();
  esc->add_option("--levels", esc_levels, "constructive dyadic levels")->capture_default_str();
  esc->add_option("--out", esc_out);
  esc->callback([&] {
    action = [&] {
      Set a = read_set(esc_in);
      char* json = nullptr;
      check(dlab_escape(a.get(), esc_floor, esc_pool, &json));
      std::string body = "{\"escape\": " + take(json);
      if (!esc_mode.empty()) {
        const int mode = esc_mode == "halving" ? 0 : esc_mode == "translation" ? 1 : 2;
        char* dj = nullptr;
        check(dlab_dichotomy(a.get(), esc_rho, parse_side(esc_side), mode, esc_levels, esc_floor, &dj));
        body += ",\n\"dichotomy\": " + take(dj);
      }
      body += "}";
      runner.report(body, true, esc_out);
    };
  });

  // avoid
  auto* av = app.add_subcommand("avoid", "sub-algebra avoidance");
  std::string av_in, av_out;
  double av_C = 8;
  bool av_strong = false;
  int av_net = -1;
  av->add_option("--in", av_in)->required();
  av->add_option("--C", av_C)->capture_default_str();
  av->add_flag("--strong", av_strong, "every C-dense subset must avoid");
  av->add_option("--net-exp", av_net, "H only: net fineness (default ceil(m/2))")->capture_default_str();
  av->add_option("--out", av_out);
  av->callback([&] {
    action = [&] {
      Set a = read_set(av_in);
      char* json = nullptr;
      int pass = 0;
      check(dlab_avoid(a.get(), av_C, av_strong ? 1 : 0, av_net, &pass, &json));
      runner.report(take(json), true, av_out);
    };
  });

  // energy
  auto* en = app.add_subcommand("energy", "additive energy E(A, B)");
  std::string en_a, en_b;
  en->add_option("--A", en_a)->required();
  en->add_option("--B", en_b, "defaults to A");
  en->callback([&] {
    action = [&] {
      Set a = read_set(en_a);
      Set b = en_b.empty() ? nullptr : read_set(en_b);
      uint64_t e = 0;
      check(dlab_additive_energy(a.get(), b ? b.get() : a.get(), &e));
      std::cout << e << '\n';
    };
  });

  // count-tv
  auto* tv = app.add_subcommand("count-tv", "quintuple count a + xb ~ c - xd");
  std::string tv_a, tv_x, tv_out;
  int tv_rho = 1;
  bool tv_sym = false, tv_adj = false;
  double tv_s = 0, tv_sigma = 0, tv_t = 0, tv_eps = 0;
  tv->add_option("--A", tv_a)->required();
  tv->add_option("--X", tv_x)->required();
  tv->add_option("--rho", tv_rho)->capture_default_str();
  tv->add_flag("--symmetric", tv_sym, "count c + xd instead of c - xd");
  tv->add_flag("--adjacent", tv_adj, "accept neighbouring cells (real)");
  tv->add_option("--s", tv_s)->capture_default_str();
  tv->add_option("--sigma", tv_sigma)->capture_default_str();
  tv->add_option("--t", tv_t)->capture_default_str();
  tv->add_option("--eps", tv_eps)->capture_default_str();
  tv->add_option("--out", tv_out);
  tv->callback([&] {
    action = [&] {
      Set a = read_set(tv_a), x = read_set(tv_x);
      char* json = nullptr;
      check(dlab_count_tv(a.get(), x.get(), tv_rho, tv_sym, tv_adj, tv_s, tv_sigma, tv_t, tv_eps, &json));
      runner.report(take(json), true, tv_out);
    };
  });

  // count-sparse
  auto* sp = app.add_subcommand("count-sparse", "quadruple count a1 q + a3 p ~ a2 q + a4 p");
  std::string sp_a, sp_p, sp_q, sp_out;
  bool sp_adj = false;
  double sp_s = 0;
  int sp_rho = 0;
  sp->add_option("--A", sp_a)->required();
  sp->add_option("--p", sp_p, "element c0,c1,...[@shift]")->required();
  sp->add_option("--q", sp_q, "element c0,c1,...[@shift]")->required();
  sp->add_flag("--adjacent", sp_adj);
  sp->add_option("--s", sp_s)->capture_default_str();
  sp->add_option("--rho", sp_rho)->capture_default_str();
  sp->add_option("--out", sp_out);
  sp->callback([&] {
    action = [&] {
      Set a = read_set(sp_a);
      const int d = set_dim(a.get());
      const auto p = parse_element(sp_p, d), q = parse_element(sp_q, d);
      char* json = nullptr;
      check(dlab_count_sparse(a.get(), p.view(), q.view(), sp_adj, sp_s, sp_rho, &json));
      runner.report(take(json), true, sp_out);
    };
  });

  // bsg
  auto* bsg = app.add_subcommand("bsg", "Balog-Szemeredi-Gowers extraction");
  std::string bsg_h, bsg_a, bsg_b, bsg_out, bsg_oa, bsg_ob;
  bsg->add_option("--H", bsg_h)->required();
  bsg->add_option("--A", bsg_a)->required();
  bsg->add_option("--B", bsg_b)->required();
  bsg->add_option("--out", bsg_out);
  bsg->add_option("--out-a", bsg_oa);
  bsg->add_option("--out-b", bsg_ob);
  bsg->callback([&] {
    action = [&] {
      Pairs h = read_pairs(bsg_h);
      Set a = read_set(bsg_a), b = read_set(bsg_b);
      char* json = nullptr;
      dlab_set *as = nullptr, *bs = nullptr;
      check(dlab_bsg(h.get(), a.get(), b.get(), &json, &as, &bs));
      Set sa(as), sb(bs);
      if (!bsg_oa.empty()) runner.write_set(sa.get(), bsg_oa);
      if (!bsg_ob.empty()) runner.write_set(sb.get(), bsg_ob);
      runner.report(take(json), true, bsg_out);
    };
  });

  // ledger
  auto* led = app.add_subcommand("ledger", "Ruzsa-calculus inequality ledger");
  std::vector<std::string> led_sets;
  std::string led_y1, led_y2, led_out;
  led->add_option("--set", led_sets, "NAME=PATH (repeatable)")->required();
  led->add_option("--y1", led_y1, "scalar for the heuristic chain");
  led->add_option("--y2", led_y2, "scalar for the heuristic chain");
  led->add_option("--out", led_out);
  led->callback([&] {
    action = [&] {
      std::vector<std::string> names;
      std::vector<Set> owned;
      for (const auto& spec : led_sets) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) usage_error("--set expects NAME=PATH");
        names.push_back(spec.substr(0, eq));
        owned.push_back(read_set(spec.substr(eq + 1)));
      }
      std::vector<const dlab_set*> sets;
      std::vector<const char*> cnames;
      for (std::size_t i = 0; i < owned.size(); ++i) {
        sets.push_back(owned[i].get());
        cnames.push_back(names[i].c_str());
      }
      const int d = set_dim(sets[0]);
      std::optional<ElementText> y1, y2;
      if (!led_y1.empty()) y1 = parse_element(led_y1, d);
      if (!led_y2.empty()) y2 = parse_element(led_y2, d);
      dlab_element v1{}, v2{};
      if (y1) v1 = y1->view();
      if (y2) v2 = y2->view();
      char* csv = nullptr;
      std::size_t violations = 0;
      check(dlab_ledger(sets.data(), cnames.data(), sets.size(), y1 ? &v1 : nullptr,
                        y2 ? &v2 : nullptr, &csv, &violations));
      runner.report(take(csv), false, led_out);
      std::cerr << "violations " << violations << '\n';
    };
  });

  // expand
  auto* ex = app.add_subcommand("expand", "expansion rounds A -> iterated(A) in B(0,1)");
  std::string ex_in, ex_s = "1", ex_out, ex_last;
  int ex_rounds = 1, ex_nsum = 2, ex_nprod = 2, ex_T = 1;
  double ex_C = 8;
  ex->add_option("--in", ex_in)->required();
  ex->add_option("--s", ex_s, "input exponent for the predicted trajectory")->capture_default_str();
  ex->add_option("--rounds", ex_rounds)->capture_default_str();
  ex->add_option("--n-sum", ex_nsum)->capture_default_str();
  ex->add_option("--n-prod", ex_nprod)->capture_default_str();
  ex->add_option("--C", ex_C, "avoidance constant")->capture_default_str();
  ex->add_option("--T", ex_T, "levels per uniformisation stage")->capture_default_str();
  ex->add_option("--out", ex_out);
  ex->add_option("--out-set", ex_last, "write the final set");
  ex->callback([&] {
    action = [&] {
      Set a = read_set(ex_in);
      char* text = nullptr;
      dlab_set* last = nullptr;
      const bool json = format == "json";
      check(dlab_expand(a.get(), ex_s.c_str(), ex_rounds, ex_nsum, ex_nprod, ex_C, ex_T,
                        json ? DLAB_JSON : DLAB_CSV, &text, ex_last.empty() ? nullptr : &last));
      Set ls(last);
      if (ls) runner.write_set(ls.get(), ex_last);
      runner.report(take(text), json, ex_out);
    };
  });

  // babyproj
  auto* bp = app.add_subcommand("babyproj", "max over x in X of N(A + xA)");
  std::string bp_a, bp_x, bp_out;
  bp->add_option("--A", bp_a)->required();
  bp->add_option("--X", bp_x)->required();
  bp->add_option("--out", bp_out);
  bp->callback([&] {
    action = [&] {
      Set a = read_set(bp_a), x = read_set(bp_x);
      char* text = nullptr;
      const bool json = format == "json";
      check(dlab_babyproj(a.get(), x.get(), json ? DLAB_JSON : DLAB_CSV, &text));
      runner.report(take(text), json, bp_out);
    };
  });

  // fibres
  auto* fb = app.add_subcommand("fibres", "heaviest rho-fibre of pi_x over G");
  std::string fb_g, fb_x, fb_out;
  double fb_c1 = 0.125;
  int fb_rho = 1;
  fb->add_option("--G", fb_g)->required();
  fb->add_option("--X", fb_x)->required();
  fb->add_option("--c1", fb_c1)->capture_default_str();
  fb->add_option("--rho", fb_rho)->capture_default_str();
  fb->add_option("--out", fb_out);
  fb->callback([&] {
    action = [&] {
      Pairs g = read_pairs(fb_g);
      Set x = read_set(fb_x);
      char* csv = nullptr;
      check(dlab_fibres(g.get(), x.get(), fb_c1, fb_rho, &csv));
      runner.report(take(csv), false, fb_out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (budget) dlab_set_point_budget(budget);
  if (action) action();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Failure& f) {
    std::cerr << "dlab: " << dlab_status_name(f.status) << ": " << f.message << '\n';
    return f.status == DLAB_E_BUDGET_EXCEEDED ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "dlab: " << e.what() << '\n';
    return 2;
  }
}
