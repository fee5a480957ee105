#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "common/errors.hpp"
#include "core/dset.hpp"
#include "core/lab.hpp"

using namespace dlab;

namespace {

AlgebraPtr real1(int m) { return share(Algebra::make(AlgebraKind::R, 2, 1, m)); }
AlgebraPtr cplx(int m) { return share(Algebra::make(AlgebraKind::C, 2, 2, m)); }
AlgebraPtr qp(i64 p, int d, int m) {
  return share(Algebra::make(d == 1 ? AlgebraKind::Qp : AlgebraKind::QpExt, p, d, m));
}

DSet unit_interval_grid(int m) {
  std::vector<i64> pts;
  for (i64 k = 0; k <= (i64{1} << m); ++k) pts.push_back(k);
  return DSet(real1(m), m, 0, pts);
}

}  // namespace

TEST(DSet, CanonicalisesAndChecksBall) {
  DSet a(real1(4), 4, 0, {3, 1, 3, 2});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.point(0)[0], 1);
  EXPECT_EQ(error_code([] { DSet(real1(4), 4, 0, {17}); }), Errc::InvalidArgument);
  const DSet fitted = DSet::fit(real1(4), 4, 0, {40});
  EXPECT_GE(fitted.radius_exp(), 2);
}

TEST(DSet, CoveringExamples) {
  DSet a(real1(5), 5, 0, {0, 8, 9});
  EXPECT_EQ(covering_number(a, 2), 2u);
  const DSet grid = unit_interval_grid(6);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(covering_number(grid, k), std::size_t{1} << k) << k;
  // At the finest scale every grid point, including the endpoint 1, is its own cell.
  EXPECT_EQ(covering_number(grid, 6), 65u);

  std::mt19937_64 g(5);
  std::set<std::pair<i64, i64>> pts;
  while (pts.size() < 100) pts.insert({g() % 257 - 128, g() % 257 - 128});
  std::vector<i64> flat;
  for (auto [x, y] : pts) flat.insert(flat.end(), {x, y});
  const DSet r(cplx(7), 7, 0, flat);
  EXPECT_EQ(covering_number(r, 7), 100u);
}

TEST(DSet, CoveringIsMonotoneInScale) {
  const DSet a = gen_random_dset(cplx(8), 8, 1.3, 21);
  std::size_t prev = 0;
  for (int k = 0; k <= 8; ++k) {
    const std::size_t n = covering_number(a, k);
    EXPECT_GE(n, prev);
    prev = n;
  }
  EXPECT_EQ(prev, a.size());
}

TEST(DSet, PadicCells) {
  // Residues mod 3^3; level-1 cells are classes mod 3.
  DSet a(qp(3, 1, 3), 3, 0, {0, 3, 6, 1, 4, 2});
  EXPECT_EQ(covering_number(a, 0), 1u);
  EXPECT_EQ(covering_number(a, 1), 3u);
  EXPECT_EQ(covering_number(a, 3), 6u);
}

TEST(DSet, NonConcentrationExamples) {
  const DSet ap = unit_interval_grid(7);
  const NCReport rep = is_nonconcentrated(ap, 1.0, 4.0);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.best_C, 4.0);

  std::vector<i64> cluster;
  for (i64 k = 0; k < 16; ++k) cluster.push_back(k);
  const DSet tight(real1(10), 10, 0, cluster);
  const NCReport bad = is_nonconcentrated(tight, 1.0, 4.0);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.best_C, 4.0);

  for (int d : {1, 2}) {
    const DSet grid = gen_full_grid(d == 1 ? real1(5) : cplx(5), 5);
    const NCReport full = is_nonconcentrated(grid, d, std::pow(2.0, d));
    EXPECT_TRUE(full.pass) << d;
    EXPECT_LE(full.best_C, std::pow(2.0, d));
  }
}

TEST(DSet, VerifiedExponentAgreesWithCheck) {
  const DSet a = gen_random_dset(cplx(8), 8, 1.2, 3);
  const double s = verified_exponent(a, 8.0);
  EXPECT_TRUE(is_nonconcentrated(a, s - 1e-9, 8.0).pass);
  if (s < 2.0) EXPECT_FALSE(is_nonconcentrated(a, s + 1e-3, 8.0).pass);
}

TEST(DSet, NeighborhoodExamples) {
  const DSet zero(cplx(6), 6, 0, {0, 0});
  EXPECT_EQ(neighborhood(zero, 6, 1000).size(), 9u);
  const DSet z1(real1(6), 6, 0, {0});
  const DSet n1 = neighborhood(z1, 5, 1000);
  EXPECT_EQ(n1.flat(), (std::vector<i64>{-2, -1, 0, 1, 2}));
  const DSet pa(qp(3, 1, 4), 4, 0, {1, 5, 22});
  EXPECT_EQ(neighborhood(pa, 4, 1000), pa);
}

TEST(DSet, UniformSubsetOfFullGridIsItself) {
  for (int d : {1, 2}) {
    const DSet grid = gen_full_grid(d == 1 ? qp(2, 1, 6) : qp(3, 2, 3), d == 1 ? 6 : 3);
    EXPECT_EQ(uniform_subset(grid, 1), grid);
  }
}

TEST(DSet, UniformSubsetAuditAndSize) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const DSet a = gen_random_dset(cplx(8), 8, 1.0 + 0.1 * static_cast<double>(seed), seed);
    for (int t : {1, 2}) {
      const DSet u = uniform_subset(a, t);
      EXPECT_TRUE(uniformity_audit(u, t).pass);
      const double floor = std::pow(2.0 * t + 1, -stage_count(8, t)) * static_cast<double>(a.size());
      EXPECT_GE(static_cast<double>(u.size()), floor);
      for (std::size_t i = 0; i < u.size(); ++i) EXPECT_GE(find_point(a, u.point(i)), 0);
    }
  }
}

TEST(DSet, RemoveBall) {
  const DSet grid = gen_full_grid(real1(6), 6);
  ASSERT_EQ(grid.size(), 129u);
  const std::vector<i64> origin{0};
  const DSet shell = remove_ball(grid, origin, 0);
  for (std::size_t i = 0; i < shell.size(); ++i) EXPECT_EQ(std::abs(shell.point(i)[0]), 64);
  EXPECT_EQ(remove_ball(grid, origin, 6).size(), 128u);
  // |x| < 1/4 holds for 31 of the 129 points.
  EXPECT_EQ(remove_ball(grid, origin, 2).size(), 98u);
}

TEST(DSet, UnitBall) {
  const DSet grid = gen_full_grid(cplx(4), 4);
  const DSet ball = intersect_unit_ball(grid);
  std::size_t expect = 0;
  for (i64 x = -16; x <= 16; ++x)
    for (i64 y = -16; y <= 16; ++y) expect += x * x + y * y <= 256;
  EXPECT_EQ(ball.size(), expect);
}
