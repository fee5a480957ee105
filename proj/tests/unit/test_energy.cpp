#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "common/errors.hpp"
#include "common/oracles.hpp"
#include "core/energy.hpp"
#include "core/lab.hpp"
#include "core/setops.hpp"

using namespace dlab;

namespace {

AlgebraPtr real1(int m) { return share(Algebra::make(AlgebraKind::R, 2, 1, m)); }
AlgebraPtr cplx(int m) { return share(Algebra::make(AlgebraKind::C, 2, 2, m)); }

DSet random_set(const AlgebraPtr& alg, int m, std::size_t n, std::mt19937_64& g) {
  std::vector<i64> flat;
  const bool real = alg->base() == Base::Real;
  const i64 span = real ? (i64{1} << m) : alg->with_precision(m).scale();
  for (std::size_t i = 0; i < n * alg->dim(); ++i) {
    const i64 v = static_cast<i64>(g() % static_cast<std::uint64_t>(span));
    flat.push_back(real ? v - span / 2 : v);
  }
  return DSet(alg, m, 0, flat);
}

}  // namespace

TEST(Energy, SmallExamples) {
  const DSet a(real1(5), 5, 0, {0, 1, 2});
  EXPECT_EQ(additive_energy(a, a), 19u);
  EXPECT_EQ(oracle::energy(a, a), 19u);
}

TEST(Energy, MatchesBruteForceAndCauchySchwarz) {
  std::mt19937_64 g(8);
  const std::vector<AlgebraPtr> algs{real1(5), cplx(4), share(Algebra::make(AlgebraKind::Qp, 3, 1, 3)),
                                     share(Algebra::make(AlgebraKind::QpExt, 2, 2, 3))};
  for (const auto& alg : algs) {
    for (int t = 0; t < 3; ++t) {
      const int m = alg->precision();
      const DSet a = random_set(alg, m, 12, g), b = random_set(alg, m, 9, g);
      const count_t e = additive_energy(a, b);
      EXPECT_EQ(e, oracle::energy(a, b)) << alg->name();
      const double n = static_cast<double>(a.size());
      EXPECT_GE(static_cast<double>(additive_energy(a, a)) * sumset(a, a).size(), std::pow(n, 4));
      EXPECT_GE(additive_energy(a, a), a.size() * a.size());
    }
  }
}

TEST(Energy, QuintupleDegenerateCases) {
  const auto alg = cplx(5);
  std::mt19937_64 g(2);
  const DSet a = random_set(alg, 5, 10, g);
  const DSet zero(alg, 5, 0, {0, 0});
  const CountReport r = quintuple_count_tv(a, zero, 1);
  EXPECT_EQ(r.total, a.size() * a.size() * a.size());
  const DSet x = random_set(alg, 5, 7, g);
  EXPECT_EQ(quintuple_count_tv(zero, x, 1).total, x.size());
}

TEST(Energy, QuintupleMatchesFiveLoops) {
  std::mt19937_64 g(3);
  const std::vector<AlgebraPtr> algs{real1(5), cplx(5), share(Algebra::make(AlgebraKind::QpExt, 3, 2, 3))};
  for (const auto& alg : algs) {
    const int m = alg->precision();
    const DSet a = random_set(alg, m, 14, g), x = random_set(alg, m, 5, g);
    for (bool sym : {false, true}) {
      TvOptions o;
      o.symmetric = sym;
      const CountReport r = quintuple_count_tv(a, x, 2, o);
      EXPECT_EQ(r.total, oracle::quintuple(a, x, sym)) << alg->name() << " sym=" << sym;
      ASSERT_EQ(r.breakdown.size(), 2u);
      EXPECT_EQ(r.breakdown[0].second + r.breakdown[1].second, r.total);
      o.adjacent = true;
      EXPECT_GE(quintuple_count_tv(a, x, 2, o).total, r.total);
    }
  }
}

TEST(Energy, QuintupleBound) {
  const auto alg = cplx(5);
  std::mt19937_64 g(4);
  const DSet a = random_set(alg, 5, 8, g), x = random_set(alg, 5, 3, g);
  TvOptions o;
  o.s = 1;
  o.sigma = 0.5;
  o.t = 1;
  o.eps = 0;
  const CountReport r = quintuple_count_tv(a, x, 1, o);
  EXPECT_NEAR(r.bound, std::pow(2.0, -2.5) * std::pow(a.size(), 3.0) * x.size(), 1e-9);
  EXPECT_NEAR(r.ratio, static_cast<double>(r.total) / r.bound, 1e-12);
}

TEST(Energy, QuadrupleExamples) {
  std::mt19937_64 g(5);
  const auto alg = cplx(5);
  const DSet a = random_set(alg, 5, 11, g);
  const CountReport r = quadruple_count_sparse(a, alg->one(), alg->one());
  EXPECT_EQ(r.total, additive_energy(a, a));
  const DSet zero(alg, 5, 0, {0, 0});
  EXPECT_EQ(quadruple_count_sparse(zero, alg->basis(1), alg->one()).total, 1u);
  EXPECT_EQ(error_code([&] { quadruple_count_sparse(a, alg->one(), alg->zero()); }),
            Errc::DivisionByNegligible);
}

TEST(Energy, QuadrupleMatchesFourLoops) {
  std::mt19937_64 g(6);
  const std::vector<AlgebraPtr> algs{real1(6), cplx(5), share(Algebra::make(AlgebraKind::Qp, 5, 1, 3)),
                                     share(Algebra::make(AlgebraKind::QpExt, 2, 3, 3))};
  for (const auto& alg : algs) {
    const int m = alg->precision();
    const DSet a = random_set(alg, m, 16, g);
    const DSet pq = random_set(alg, m, 2, g);
    Element p{oracle::row(pq, 0), 0};
    Element q = alg->one();
    if (alg->base() == Base::Real) q.coords[0] = alg->scale() / 2 + 3;
    SparseOptions o;
    o.rho_exp = 1;
    const CountReport r = quadruple_count_sparse(a, p, q, o);
    EXPECT_EQ(r.total, oracle::quadruple(a, p, q)) << alg->name();
    ASSERT_EQ(r.breakdown.size(), 2u);
    EXPECT_EQ(r.breakdown[0].second + r.breakdown[1].second, r.total);
    // Cauchy-Schwarz: |pA + qA| >= |A|^4 / |Y|.
    EXPECT_GE(static_cast<double>(r.image_size) * (1 + 1e-12), r.cs_lower);
    EXPECT_NEAR(r.cs_lower, std::pow(static_cast<double>(a.size()), 4) / static_cast<double>(r.total),
                1e-9 * r.cs_lower);
  }
}

TEST(Energy, BsgOnCompleteApGraph) {
  const auto alg = real1(7);
  const DSet ap = gen_ap(alg, 7, 20, 3);
  const BsgResult r = bsg_extract(cartesian(ap, ap), ap, ap);
  EXPECT_EQ(r.a_sub, ap);
  EXPECT_EQ(r.b_sub, ap);
  EXPECT_EQ(r.sumset_count, 39u);
  EXPECT_DOUBLE_EQ(r.K, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Energy, BsgOnMatchingIsDegenerate) {
  const auto alg = cplx(6);
  std::mt19937_64 g(9);
  const DSet a = random_set(alg, 6, 16, g), b = random_set(alg, 6, 16, g);
  ASSERT_EQ(a.size(), b.size());
  std::vector<i64> edges;
  for (std::size_t i = 0; i < a.size(); ++i) {
    edges.insert(edges.end(), a.point(i).begin(), a.point(i).end());
    edges.insert(edges.end(), b.point(i).begin(), b.point(i).end());
  }
  const PairSet h(alg, 6, 0, edges);
  const BsgResult r = bsg_extract(h, a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.K, static_cast<double>(a.size()), 1e-12);
  EXPECT_EQ(r.sumset_count, sumset(r.a_sub, r.b_sub).size());
}

TEST(Energy, BsgErrors) {
  const auto alg = real1(6);
  const DSet a = gen_ap(alg, 6, 4);
  EXPECT_EQ(error_code([&] { bsg_extract(PairSet(alg, 6, 0, {}), a, a); }), Errc::EmptyGraph);
  EXPECT_EQ(error_code([&] { bsg_extract(PairSet(alg, 6, 0, {50, 0}), a, a); }),
            Errc::InvalidArgument);
}

TEST(Energy, ExpressionEvaluation) {
  const auto alg = cplx(6);
  std::mt19937_64 g(10);
  const DSet a = random_set(alg, 6, 6, g), b = random_set(alg, 6, 5, g);
  const std::map<std::string, DSet> sets{{"A", a}, {"B", b}};
  const std::map<std::string, Element> sc{{"y1", alg->basis(1)}, {"y2", alg->one()}};
  EXPECT_EQ(eval_expr("A+B", sets, sc), sumset(a, b));
  EXPECT_EQ(eval_expr("2A - B", sets, sc), difference_set(sumset(a, a), b));
  EXPECT_EQ(eval_expr("A + y1*A - y2*A", sets, sc),
            difference_set(sumset(a, scalar_image(alg->basis(1), a)), a));
  const DSet zero(alg, 6, 0, {0, 0});
  EXPECT_EQ(eval_expr("-A", sets, sc), difference_set(zero, a));
  EXPECT_EQ(error_code([&] { eval_expr("A+Z", sets, sc); }), Errc::ParseError);
  EXPECT_EQ(error_code([&] { eval_expr("A/B", sets, sc); }), Errc::ParseError);
  EXPECT_EQ(error_code([&] { eval_expr("q*A", sets, sc); }), Errc::ParseError);
}

TEST(Energy, RuzsaLedgerHoldsOnRandomSets) {
  std::mt19937_64 g(12);
  const auto alg = cplx(5);
  std::vector<std::pair<std::string, DSet>> sets;
  for (const char* name : {"A", "B", "C"}) sets.emplace_back(name, random_set(alg, 5, 5 + g() % 8, g));
  const Ledger l = ruzsa_ledger(sets);
  EXPECT_EQ(l.rows.size(), 6u + 6u);
  EXPECT_EQ(l.violations, 0u);
  for (const auto& row : l.rows) EXPECT_GE(row.slack, 1.0 - 1e-12) << row.instance;
  const std::string csv = to_csv(l);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "instance,lhs,rhs,slack");
}

TEST(Energy, RuzsaChainOnProgression) {
  const auto alg = real1(7);
  const std::size_t n = 21;
  const DSet ap = gen_ap(alg, 7, n, 2);
  const Ledger l = ruzsa_ledger({{"A", ap}}, {{"y1", alg->one()}, {"y2", alg->one()}});
  ASSERT_EQ(l.rows.size(), 2u);
  const LedgerRow& chain = l.rows.back();
  EXPECT_FALSE(chain.theorem);
  // |A + A - A| = 3n - 2 and |A + A| = |A - A| = 2n - 1.
  EXPECT_DOUBLE_EQ(chain.lhs, 3.0 * n - 2);
  const double rhs = std::pow(2.0 * n - 1, 3) / (n * n);
  EXPECT_NEAR(chain.rhs, rhs, 1e-9);
  EXPECT_NE(to_csv(l).find("[heuristic]"), std::string::npos);
}

TEST(Energy, CountingBudget) {
  set_point_budget(10);
  const auto alg = real1(6);
  const DSet a = gen_ap(alg, 6, 30);
  EXPECT_EQ(error_code([&] { quintuple_count_tv(a, a, 1); }), Errc::BudgetExceeded);
  set_point_budget(0);
}
