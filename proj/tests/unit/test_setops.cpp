#include <gtest/gtest.h>

#include <random>
#include <set>

#include "common/errors.hpp"
#include "common/oracles.hpp"
#include "core/dset.hpp"
#include "core/lab.hpp"
#include "core/setops.hpp"

using namespace dlab;

namespace {

AlgebraPtr real1(int m) { return share(Algebra::make(AlgebraKind::R, 2, 1, m)); }
AlgebraPtr cplx(int m) { return share(Algebra::make(AlgebraKind::C, 2, 2, m)); }
AlgebraPtr quat(int m) { return share(Algebra::make(AlgebraKind::H, 2, 4, m)); }

DSet random_complex(std::mt19937_64& g, int m, std::size_t n, i64 range) {
  std::vector<i64> flat;
  for (std::size_t i = 0; i < n; ++i) {
    flat.push_back(static_cast<i64>(g() % (2 * range + 1)) - range);
    flat.push_back(static_cast<i64>(g() % (2 * range + 1)) - range);
  }
  return DSet(cplx(m), m, 0, flat);
}

}  // namespace

TEST(SetOps, SumsetExamples) {
  const DSet a(real1(6), 6, 0, {0, 1});
  EXPECT_EQ(sumset(a, a).flat(), (std::vector<i64>{0, 1, 2}));
  EXPECT_EQ(difference_set(a, a).flat(), (std::vector<i64>{-1, 0, 1}));
  const DSet zero(real1(6), 6, 0, {0});
  const DSet b(real1(6), 6, 0, {3, 5, 7, 11});
  EXPECT_EQ(sumset(b, zero), b);
  for (std::size_t n : {1u, 5u, 17u}) {
    const DSet ap = gen_ap(real1(6), 6, n, 3);
    EXPECT_EQ(sumset(ap, ap).size(), 2 * n - 1);
    EXPECT_EQ(difference_set(ap, ap).size(), 2 * n - 1);
  }
}

TEST(SetOps, SumsetMatchesPairEnumeration) {
  std::mt19937_64 g(1);
  const DSet a = random_complex(g, 6, 20, 40), b = random_complex(g, 6, 15, 40);
  std::set<std::vector<i64>> expect;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      expect.insert({a.point(i)[0] + b.point(j)[0], a.point(i)[1] + b.point(j)[1]});
  const DSet s = sumset(a, b);
  ASSERT_EQ(s.size(), expect.size());
  std::size_t k = 0;
  for (const auto& p : expect) EXPECT_EQ(oracle::row(s, k++), p);
}

TEST(SetOps, DifferenceContainsZero) {
  std::mt19937_64 g(2);
  const DSet a = random_complex(g, 6, 10, 50);
  const std::vector<i64> zero{0, 0};
  EXPECT_GE(find_point(difference_set(a, a), zero), 0);
}

TEST(SetOps, ProductExamples) {
  const int m = 6;
  const auto alg = real1(m);
  const DSet one(alg, m, 0, {64});
  const DSet b(alg, m, 0, {3, 40, -7});
  EXPECT_EQ(product_set(b, one), b);
  // {1,2,3,4} x {1,2,3,4}: the 4x4 multiplication table has 9 distinct entries.
  const DSet small(alg, m, 3, {64, 128, 192, 256});
  EXPECT_EQ(product_set(small, small).size(), 9u);

  const auto h = quat(5);
  const DSet i(h, 5, 0, {0, 32, 0, 0}), j(h, 5, 0, {0, 0, 32, 0});
  EXPECT_EQ(product_set(i, j).flat(), (std::vector<i64>{0, 0, 0, 32}));
  EXPECT_EQ(product_set(j, i).flat(), (std::vector<i64>{0, 0, 0, -32}));
  EXPECT_EQ(product_set(i, j, Side::Right).flat(), (std::vector<i64>{0, 0, 0, -32}));
}

TEST(SetOps, IteratedExamples) {
  const auto alg = real1(6);
  const DSet a(alg, 6, 0, {0, 1});
  EXPECT_EQ(iterated(a, 1, 1).flat(), (std::vector<i64>{-1, 0, 1}));
  EXPECT_EQ(iterated(a, 2, 1).flat(), (std::vector<i64>{-2, -1, 0, 1, 2}));
}

TEST(SetOps, IteratedMatchesNaiveComposition) {
  std::mt19937_64 g(4);
  const DSet a = random_complex(g, 5, 6, 32);
  for (int n_sum : {1, 2}) {
    for (int n_prod : {1, 2}) {
      DSet p = a;
      for (int k = 1; k < n_prod; ++k) p = product_set(p, a);
      const DSet d = difference_set(p, p);
      DSet s = d;
      for (int k = 1; k < n_sum; ++k) s = sumset(s, d);
      EXPECT_EQ(iterated(a, n_sum, n_prod).flat(), intersect_unit_ball(s).flat())
          << n_sum << " " << n_prod;
    }
  }
}

TEST(SetOps, ScalarImageExamples) {
  const auto alg = cplx(6);
  const DSet ap = gen_ap(alg, 6, 10, 5);
  EXPECT_EQ(scalar_image(alg->one(), ap), ap);
  EXPECT_EQ(scalar_image(alg->zero(), ap).size(), 1u);
  const DSet rot = scalar_image(alg->basis(1), ap);
  EXPECT_EQ(rot.size(), ap.size());
  for (std::size_t k = 0; k < rot.size(); ++k) EXPECT_EQ(rot.point(k)[0], 0);
}

TEST(SetOps, ProjectionExamples) {
  const auto alg = real1(6);
  const DSet a = gen_ap(alg, 6, 9, 7);
  const PairSet g = cartesian(a, a);
  EXPECT_EQ(project(alg->zero(), g), a);
  EXPECT_EQ(project(alg->one(), g), sumset(a, a));

  const auto c = gen_counterexample(Counterexample::One, 6);
  const Algebra& ca = c.g.algebra();
  EXPECT_EQ(covering_number(project(ca.basis(1), c.g), 6), c.a.size() * c.a.size());
}

TEST(SetOps, QuotientOfTwoPoints) {
  const auto alg = real1(7);
  const DSet a(alg, 7, 0, {0, 64});
  const QuotientSet q = quotient_set(a, 2, Side::Left);
  // Delta = delta / rho^3 = 2^-1: the quotients 0, 1, -1 in units of 1/2.
  EXPECT_EQ(q.set.flat(), (std::vector<i64>{-2, 0, 2}));
  EXPECT_EQ(q.set.scale_exp(), 1);
}

TEST(SetOps, QuotientErrors) {
  const auto alg = real1(7);
  const DSet a(alg, 7, 0, {0, 1});
  EXPECT_EQ(error_code([&] { quotient_set(a, 3); }), Errc::ScaleOutOfRange);
  EXPECT_EQ(error_code([&] { quotient_set(a, 1); }), Errc::NoAdmissiblePairs);
}

TEST(SetOps, QuotientMatchesFourLoopScan) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::mt19937_64 g(seed);
    const DSet a = random_complex(g, 7, 17, 128);
    for (Side side : {Side::Left, Side::Right}) {
      const QuotientSet q = quotient_set(a, 1, side);
      const auto scan = oracle::quotient(a, 1, side, q.set.radius_exp());
      ASSERT_EQ(q.set.size(), scan.cells.size());
      for (std::size_t k = 0; k < q.set.size(); ++k) {
        const auto cell = oracle::row(q.set, k);
        ASSERT_TRUE(scan.cells.count(cell));
        EXPECT_EQ(q.witness[k], scan.witness.at(cell));
      }
    }
  }
}

TEST(SetOps, QuotientContainsZeroAndOne) {
  const auto alg = share(Algebra::make(AlgebraKind::QpExt, 3, 2, 5));
  const DSet a = gen_random_dset(alg, 5, 0.6, 9);
  const QuotientSet q = quotient_set(a, 1);
  const Algebra work = working_algebra(q.set);
  bool zero = false, one = false;
  for (std::size_t k = 0; k < q.set.size(); ++k) {
    const Element e = element_of(q.set, q.set.point(k));
    const Element d1 = sub(work, e, work.one());
    zero |= norm(work, e) == 0;
    one |= norm(work, d1) == 0;
  }
  EXPECT_TRUE(zero);
  EXPECT_TRUE(one);
}

TEST(SetOps, LinearMaps) {
  const auto alg = cplx(6);
  const DSet a = gen_ap(alg, 6, 8, 5);
  const DSet b = scalar_image(alg->basis(1), gen_ap(alg, 6, 5, 3));
  const PairSet g = cartesian(a, b);
  EXPECT_EQ(apply_linear_map(identity_map(*alg), g), g);
  EXPECT_DOUBLE_EQ(linear_map_det(*alg, identity_map(*alg)), 1.0);

  const LinearMap swap{{alg->zero(), alg->one(), alg->one(), alg->zero()}};
  const PairSet s = apply_linear_map(swap, g);
  EXPECT_EQ(s, cartesian(b, a));
  EXPECT_DOUBLE_EQ(linear_map_det(*alg, swap), 1.0);  // two coordinate transpositions in C

  const LinearMap singular{{alg->one(), alg->one(), alg->one(), alg->one()}};
  EXPECT_DOUBLE_EQ(linear_map_det(*alg, singular), 0.0);
  EXPECT_EQ(error_code([&] { apply_linear_map(singular, g); }), Errc::SingularMap);
}

TEST(SetOps, DualMapIntertwinesProjections) {
  // L11 = 1, L12 = -2, L21 = 0, L22 = 2 sends x = 1/4 to (1 - 1/2)^-1 (1/2) = 1, so
  // pi_{1/4}(L^T G) = (1/2) pi_1(G).
  const int m = 8;
  const auto alg = real1(m);
  const DSet a = gen_ap(alg, m, 12, 18);
  const PairSet g = cartesian(a, a);
  const Element two{{512}, 0}, half{{128}, 0}, quarter{{64}, 0};
  const LinearMap l{{alg->one(), neg(*alg, two), alg->zero(), two}};
  const DSet dual = apply_dual(l, DSet(alg, m, 0, {64}));
  EXPECT_EQ(dual.flat(), std::vector<i64>{256});
  const PairSet lg = apply_linear_map(transpose(l), g);
  EXPECT_EQ(project(quarter, lg).flat(), scalar_image(half, project(alg->one(), g)).flat());
}

TEST(SetOps, BudgetIsEnforced) {
  set_point_budget(50);
  const auto alg = real1(8);
  const DSet a = gen_ap(alg, 8, 30, 1), b = gen_ap(alg, 8, 30, 31);
  EXPECT_EQ(error_code([&] { sumset(a, b); }), Errc::BudgetExceeded);
  set_point_budget(0);
  EXPECT_EQ(sumset(a, b).size(), 900u);
}
