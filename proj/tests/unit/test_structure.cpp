#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "common/errors.hpp"
#include "core/lab.hpp"
#include "core/setops.hpp"
#include "core/structure.hpp"

using namespace dlab;

namespace {

AlgebraPtr real1(int m) { return share(Algebra::make(AlgebraKind::R, 2, 1, m)); }
AlgebraPtr cplx(int m) { return share(Algebra::make(AlgebraKind::C, 2, 2, m)); }

const SubAlgebra& member(const SubAlgebraFamily& fam, const std::string& label) {
  for (const auto& f : fam.members)
    if (f.label == label) return f;
  throw std::runtime_error("no member " + label);
}

// Exhaustive strong-avoidance check: every subset of size ceil(n/C) must
// contain, for each F, a point at distance >= 1/C from F.
bool strongly_avoids_exhaustive(const DSet& a, double C) {
  const Algebra alg = working_algebra(a);
  const auto fam = subalgebra_family(alg);
  const std::size_t n = a.size();
  const std::size_t k = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / C));
  for (const auto& f : fam.members) {
    std::vector<bool> trapped(n);
    for (std::size_t i = 0; i < n; ++i)
      trapped[i] = distance_to_subalgebra(alg, element_of(a, a.point(i)), f) < 1.0 / C;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
      bool all = true;
      for (std::size_t i = 0; i < n && all; ++i)
        if (mask >> i & 1) all = trapped[i];
      if (all) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Structure, FamilyContents) {
  const auto c = subalgebra_family(*cplx(6));
  ASSERT_EQ(c.members.size(), 2u);
  EXPECT_EQ(c.members[0].label, "0");
  EXPECT_EQ(c.members[1].label, "R");
  const auto h = subalgebra_family(Algebra::make(AlgebraKind::H, 2, 4, 6), 2);
  EXPECT_GT(h.members.size(), 3u);
  const auto q6 = subalgebra_family(Algebra::make(AlgebraKind::QpExt, 2, 6, 3));
  // Subfields of degree 1, 2, 3 plus {0}.
  EXPECT_EQ(q6.members.size(), 4u);
}

TEST(Structure, Distances) {
  const auto alg = cplx(10);
  const auto fam = subalgebra_family(*alg);
  const auto& r = member(fam, "R");
  EXPECT_NEAR(distance_to_subalgebra(*alg, alg->basis(1), r), 1.0, 1e-12);
  EXPECT_NEAR(distance_to_subalgebra(*alg, alg->one(), r), 0.0, 1e-12);
  const std::vector<double> diag{std::sqrt(0.5), std::sqrt(0.5)};
  EXPECT_NEAR(distance_to_subalgebra(*alg, alg->from_values(diag), r), std::sqrt(0.5), 1.0 / 1024);

  const Algebra q = Algebra::make(AlgebraKind::QpExt, 3, 2, 4);
  const auto qf = subalgebra_family(q);
  const auto& qp = member(qf, "Qp");
  EXPECT_DOUBLE_EQ(distance_to_subalgebra(q, Element{{5, 0}, 0}, qp), 0.0);
  EXPECT_DOUBLE_EQ(distance_to_subalgebra(q, Element{{5, 1}, 0}, qp), 1.0);
  EXPECT_DOUBLE_EQ(distance_to_subalgebra(q, Element{{5, 3}, 0}, qp), 1.0 / 3);
}

TEST(Structure, AvoidanceExamples) {
  const auto alg = cplx(6);
  const DSet real_line = gen_ap(alg, 6, 10, 4);
  const AvoidReport bad = avoids_subalgebras(real_line, 2.0);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.worst_member, "R");
  const DSet one_i(alg, 6, 0, {64, 0, 0, 64});
  EXPECT_TRUE(avoids_subalgebras(one_i, 2.0).pass);
  EXPECT_TRUE(avoids_subalgebras(gen_circle_net(alg, 6), 4.0).pass);
}

TEST(Structure, StrongAvoidanceHalfOnTheLine) {
  const auto alg = cplx(6);
  // Two points on R, two at distance 1 from it.
  const DSet a(alg, 6, 0, {64, 0, 32, 0, 0, 64, 64, 64});
  const StrongAvoidReport r = strongly_avoids(a, 2.0);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_member, "R");
  EXPECT_EQ(r.worst_trapped, 2u);
  EXPECT_EQ(r.threshold, 2u);
  EXPECT_FALSE(strongly_avoids_exhaustive(a, 2.0));
}

TEST(Structure, StrongAvoidanceMatchesExhaustiveSearch) {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto alg = cplx(5);
    std::vector<i64> flat;
    const std::size_t n = 6 + trial % 7;
    for (std::size_t i = 0; i < n; ++i) {
      flat.push_back(static_cast<i64>(g() % 65) - 32);
      // Bias towards the real axis so both outcomes occur.
      flat.push_back(trial % 2 ? static_cast<i64>(g() % 9) - 4 : static_cast<i64>(g() % 65) - 32);
    }
    const DSet a(alg, 5, 0, flat);
    for (double C : {2.0, 3.0, 4.0}) {
      const StrongAvoidReport r = strongly_avoids(a, C);
      const bool truth = strongly_avoids_exhaustive(a, C);
      EXPECT_EQ(r.pass, truth) << trial << " C=" << C;
      if (r.sufficient) EXPECT_TRUE(truth);
      if (truth) EXPECT_TRUE(r.necessary);
    }
  }
}

TEST(Structure, EscapeBasisExamples) {
  const auto alg = cplx(6);
  const DSet one_i(alg, 6, 0, {64, 0, 0, 64});
  const EscapeResult e = escape_basis(one_i, 0.5);
  EXPECT_NEAR(std::fabs(e.det), 1.0, 1e-9);
  ASSERT_EQ(e.basis.size(), 2u);
  EXPECT_EQ(error_code([&] { escape_basis(gen_ap(alg, 6, 10, 3), 0.5); }),
            Errc::SubAlgebraTrapped);

  const auto q = share(Algebra::make(AlgebraKind::QpExt, 3, 2, 4));
  const DSet gen(q, 4, 0, {1, 0, 0, 1});
  const EscapeResult pe = escape_basis(gen, 0.5);
  EXPECT_DOUBLE_EQ(pe.det, 1.0);
}

TEST(Structure, EscapeBasisDeterminantIsRecomputable) {
  const auto alg = share(Algebra::make(AlgebraKind::H, 2, 4, 5));
  const DSet a = gen_random_dset(alg, 5, 3.0, 2);
  const EscapeResult e = escape_basis(a, 1e-6, 2000);
  ASSERT_EQ(e.basis.size(), 4u);
  EXPECT_NEAR(std::fabs(det_basis(working_algebra(a), e.basis)), std::fabs(e.det), 1e-9);
  EXPECT_GT(std::fabs(e.det), 1e-6);
}

TEST(Structure, HalvingMapExamples) {
  const auto alg = cplx(6);
  const std::vector<Element> v{alg->one(), alg->basis(1)};
  EXPECT_EQ(halving_map(*alg, v, {0, 0}, alg->zero()), alg->zero());
  const Element sum = add(*alg, v[0], v[1]);
  EXPECT_EQ(halving_map(*alg, v, {1, 1}, sum), sum);
  EXPECT_EQ(halving_map(*alg, v, {1, 0}, alg->zero()).coords, (std::vector<i64>{32, 0}));
  const Algebra q = Algebra::make(AlgebraKind::Qp, 3, 1, 3);
  EXPECT_EQ(error_code([&] { halving_map(q, {q.one()}, {1}, q.zero()); }), Errc::NotRealBase);
}

TEST(Structure, DichotomyDenseOnFullGrid) {
  const auto alg = cplx(7);
  const DSet a(alg, 7, 0, {0, 0, 64, 0});
  // Q = the full grid of [-1, 1]^2 at Delta = 2^-4 (rho_exp = 1).
  QuotientSet qs{gen_full_grid(alg, 4), 1, Side::Left, {}};
  qs.witness.assign(qs.set.size(), {1, 0, 1, 0});
  const std::vector<Element> v{alg->one(), alg->basis(1)};
  const DichotomyOutcome out = dichotomy_check(qs, a, v, {DichotomyMode::Halving, 2});
  EXPECT_EQ(out.kind, DichotomyCase::Dense);
  EXPECT_EQ(out.measured, qs.set.size());
  EXPECT_DOUBLE_EQ(out.det, 1.0);
  EXPECT_TRUE(out.bound_holds);
  EXPECT_GE(static_cast<double>(out.measured), 0.25 * std::pow(2.0, 8));
  ASSERT_EQ(out.dyadic.size(), 3u);
  for (const auto& lv : out.dyadic) EXPECT_EQ(lv[0], lv[1]);
}

TEST(Structure, DichotomySparseOnTwoPoints) {
  const auto alg = real1(8);
  const DSet a(alg, 8, 0, {0, 256});
  const QuotientSet qs = quotient_set(a, 1);
  const std::vector<Element> v{alg->one()};
  const DichotomyOutcome out = dichotomy_check(qs, a, v);
  ASSERT_EQ(out.kind, DichotomyCase::Sparse);
  EXPECT_EQ(out.op, "halving");
  // The image (x + 1)/2 in units of 2^-9 has no point of Q within Delta = 2^-5.
  const i64 unit = i64{1} << 4;
  for (std::size_t k = 0; k < qs.set.size(); ++k)
    EXPECT_GT(std::abs(qs.set.point(k)[0] * unit - out.image[0]), unit);
}

TEST(Structure, DichotomyPadicModes) {
  const auto q = share(Algebra::make(AlgebraKind::QpExt, 2, 2, 7));
  const DSet a = gen_random_dset(q, 7, 1.0, 5);
  const QuotientSet qs = quotient_set(a, 1);
  const EscapeResult e = escape_basis(a, 0.0);
  const DichotomyOutcome t = dichotomy_check(qs, a, e.basis, {DichotomyMode::Translation, 0});
  const DichotomyOutcome f = dichotomy_check(qs, a, e.basis, {DichotomyMode::Field, 0});
  for (const auto* out : {&t, &f}) {
    if (out->kind == DichotomyCase::Dense) {
      EXPECT_TRUE(out->bound_holds);
    } else {
      // The reported image really is missing from Q.
      if (!out->image.empty()) EXPECT_LT(find_point(qs.set, out->image), 0);
    }
  }
}
