#include <gtest/gtest.h>

#include <cmath>

#include "common/errors.hpp"
#include "core/lab.hpp"
#include "core/setops.hpp"

using namespace dlab;

namespace {

AlgebraPtr real1(int m) { return share(Algebra::make(AlgebraKind::R, 2, 1, m)); }
AlgebraPtr cplx(int m) { return share(Algebra::make(AlgebraKind::C, 2, 2, m)); }
Rational R(long long n, long long d = 1) { return Rational(n, d); }

}  // namespace

TEST(Lab, ParseRational) {
  EXPECT_EQ(parse_rational("3"), R(3));
  EXPECT_EQ(parse_rational("-1/2"), R(-1, 2));
  EXPECT_EQ(parse_rational("1.95"), R(39, 20));
  EXPECT_EQ(parse_rational("-0.5"), R(-1, 2));
  EXPECT_EQ(parse_rational(".25"), R(1, 4));
  for (const char* bad : {"", "x", "1/0", "1.2.3", "2/3/4", "1e5"}) {
    EXPECT_EQ(error_code([&] { parse_rational(bad); }), Errc::ParseError) << bad;
  }
  EXPECT_EQ(to_string(R(6, 4)), "3/2");
  EXPECT_EQ(to_string(R(4, 2)), "2");
}

TEST(Lab, ChooseC1) {
  EXPECT_EQ(choose_c1(R(1), R(2)), R(1, 8));
  for (int d : {1, 2, 4}) EXPECT_EQ(choose_c1(R(d, 2), R(d)), R(d, 16));
  EXPECT_LT(to_double(choose_c1(R(1, 1000), R(2))), 3e-4);
  EXPECT_EQ(error_code([] { choose_c1(R(2), R(2)); }), Errc::RangeError);
}

TEST(Lab, ChooseRhoExpand) {
  const RhoChoice r = choose_rho_expand(R(1), R(2), 18);
  EXPECT_EQ(r.exponent, R(1, 9));
  EXPECT_EQ(r.rho_exp, 2);
  // Clamped so that delta^(1/3) < rho < 1.
  EXPECT_EQ(choose_rho_expand(R(1, 100), R(2), 10).rho_exp, 3);
  EXPECT_EQ(choose_rho_expand(R(199, 100), R(2), 10).rho_exp, 1);
  EXPECT_EQ(error_code([] { choose_rho_expand(R(1), R(2), 3); }), Errc::RangeError);
}

TEST(Lab, ChooseRhoTv) {
  const RhoChoice r = choose_rho_tv(R(1, 2), R(1, 2), R(1), R(0), 8);
  EXPECT_EQ(r.c, R(1, 4));
  EXPECT_EQ(r.exponent, R(1, 2));
  EXPECT_EQ(r.rho_exp, 4);
  EXPECT_FALSE(r.vanishing);
  const RhoChoice v = choose_rho_tv(R(1), R(1), R(1), R(1, 10), 8);
  EXPECT_TRUE(v.vanishing);
  EXPECT_EQ(v.c, R(1, 10));
  EXPECT_EQ(error_code([] { choose_rho_tv(R(1), R(2), R(1), R(0), 8); }), Errc::RangeError);
}

TEST(Lab, IterationBudget) {
  const IterationBudget b = iteration_budget(parse_rational("1.9"), parse_rational("1.95"), R(2), true);
  // s_{k+1} = s_k + c1(s_k)/2 from 1.9 first reaches 1.95 after six steps.
  EXPECT_EQ(b.n, 6);
  ASSERT_EQ(b.trajectory.size(), 7u);
  for (std::size_t k = 1; k < b.trajectory.size(); ++k) EXPECT_GT(b.trajectory[k], b.trajectory[k - 1]);
  EXPECT_LT(b.trajectory[5], 1.95L);
  EXPECT_GE(b.trajectory[6], 1.95L);
  EXPECT_EQ(b.N_symbolic, "20^(20^6)");
  EXPECT_NEAR(b.log10_N, std::pow(20.0, 6) * std::log10(20.0), 1e-3);
  const IterationBudget h = iteration_budget(R(1), R(3), R(4), false);
  EXPECT_EQ(h.N_symbolic.rfind("20^((16)^", 0), 0u);
}

TEST(Lab, Schedule) {
  const Schedule s = make_schedule(R(1), R(1, 2), R(1), R(0), 2, 18);
  EXPECT_EQ(s.c1, R(1, 8));
  EXPECT_EQ(s.rho_exp, 2);
  EXPECT_EQ(s.Delta_exp, 12);
  EXPECT_EQ(s.c_tv, R(1, 2));
}

TEST(Lab, RandomSetIsDeterministicAndNonConcentrated) {
  for (const auto& alg : {cplx(8), share(Algebra::make(AlgebraKind::Qp, 3, 1, 5))}) {
    const int m = alg->precision();
    const DSet a = gen_random_dset(alg, m, 0.8, 42);
    const DSet b = gen_random_dset(alg, m, 0.8, 42);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(is_nonconcentrated(a, 0.8, 8).pass);
    EXPECT_NE(a, gen_random_dset(alg, m, 0.8, 43));
  }
}

TEST(Lab, RandomSetWithFullDimensionIsTheGrid) {
  const DSet a = gen_random_dset(cplx(4), 4, 2.0, 1);
  EXPECT_EQ(a.size(), 256u);
  const auto q = share(Algebra::make(AlgebraKind::QpExt, 3, 2, 2));
  EXPECT_EQ(gen_random_dset(q, 2, 2.0, 1), gen_full_grid(q, 2));
}

TEST(Lab, CircleNet) {
  const DSet c = gen_circle_net(cplx(7), 7);
  EXPECT_GT(c.size(), 700u);
  EXPECT_LE(c.size(), 805u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = std::hypot(c.point(i)[0], c.point(i)[1]) / 128.0;
    EXPECT_NEAR(r, 1.0, 1.0 / 128);
  }
}

TEST(Lab, CounterexampleOne) {
  const auto c = gen_counterexample(Counterexample::One, 6);
  EXPECT_EQ(c.a.size(), 65u);
  EXPECT_EQ(c.g.size(), 4225u);
  EXPECT_EQ(c.x.size(), 66u);
  const auto rows = measure_projection_profile(c.g, c.x);
  ASSERT_EQ(rows.size(), 66u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (c.x.point(i)[1] == 0) {
      EXPECT_LE(rows[i].count, 131u) << rows[i].x_coords;
    } else {
      EXPECT_EQ(rows[i].count, 4225u);
    }
  }
}

TEST(Lab, CounterexampleTwo) {
  const auto c = gen_counterexample(Counterexample::Two, 6);
  ASSERT_EQ(c.parts.size(), 2u);
  EXPECT_EQ(c.parts[0].size(), 4225u);
  EXPECT_EQ(c.parts[1].size(), 4225u);
  // The halves share the 65 pairs (0, a).
  EXPECT_EQ(c.g.size(), 2 * 4225u - 65u);
  EXPECT_EQ(c.x.size(), 129u);
}

TEST(Lab, ProjectionProfileAtZero) {
  const auto alg = cplx(6);
  const DSet a = gen_ap(alg, 6, 9, 5), b = gen_ap(alg, 6, 4, 3);
  const PairSet g = cartesian(a, b);
  const auto rows = measure_projection_profile(g, DSet(alg, 6, 0, {0, 0}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, a.size());
  const Element x{{23, 0}, 0};
  const auto generic = measure_projection_profile(g, DSet(alg, 6, 0, {23, 0}));
  EXPECT_EQ(generic[0].count, sumset(a, scalar_image(x, b)).size());
}

TEST(Lab, ExpansionTrappedAndCapped) {
  const auto alg = cplx(6);
  Schedule sc = make_schedule(R(1), R(1), R(0), R(0), 2, 6);
  EXPECT_EQ(error_code([&] { run_expansion(gen_ap(alg, 6, 30), sc); }), Errc::TrappedInput);
  const auto small = cplx(4);
  sc = make_schedule(R(2), R(1), R(0), R(0), 2, 4);
  const ExpansionRun run = run_expansion(gen_full_grid(small, 4), sc);
  ASSERT_EQ(run.rounds.size(), 2u);
  for (const auto& r : run.rounds) EXPECT_LE(r.exponent, 2.0);
}

TEST(Lab, Babyproj) {
  const auto alg = cplx(6);
  const DSet ap = gen_ap(alg, 6, 16, 4);
  const DSet xs(alg, 6, 0, {64, 0, 0, 64});
  const BabyprojResult r = probe_babyproj(ap, xs);
  // X is stored sorted, so i = (0, 64) comes before 1 = (64, 0).
  EXPECT_EQ(r.best_count, 256u);
  EXPECT_EQ(r.witness, 0u);
  EXPECT_DOUBLE_EQ(r.gain, 16.0);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[1].count, 2 * ap.size() - 1);
}

TEST(Lab, FibreProfile) {
  const auto alg = real1(6);
  const DSet a = gen_ap(alg, 6, 8, 8);
  const auto rows = fibre_profile(cartesian(a, a), DSet(alg, 6, 0, {0}), 0.1, 3);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].max_fibre, a.size());
  EXPECT_EQ(rows[0].cells, a.size());

  // G on the line a = -x b with x = 1/2: every pair projects to 0.
  std::vector<i64> line;
  for (i64 b = 0; b < 64; b += 4) line.insert(line.end(), {-b / 2, b});
  const PairSet g(alg, 6, 0, line);
  const auto on = fibre_profile(g, DSet(alg, 6, 0, {32}), 0.1, 3);
  EXPECT_EQ(on[0].max_fibre, g.size());
  EXPECT_EQ(on[0].cells, 1u);
  EXPECT_TRUE(on[0].big);
  EXPECT_EQ(fibres_csv(on).substr(0, 10), "x_index,ma");
}

TEST(Lab, RecordsCsvHeader) {
  const std::string csv = records_csv({});
  EXPECT_EQ(csv, "exp_id,algebra,p,d,m,s,sigma,t,op,x_coords,count,exponent,seed\n");
}
