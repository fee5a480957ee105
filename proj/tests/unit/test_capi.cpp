#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "dlab/dlab.h"

namespace {

struct Alg {
  dlab_algebra* p = nullptr;
  ~Alg() { dlab_algebra_free(p); }
};
struct Set {
  dlab_set* p = nullptr;
  ~Set() { dlab_set_free(p); }
};
struct Pairs {
  dlab_pairs* p = nullptr;
  ~Pairs() { dlab_pairs_free(p); }
};
struct Str {
  char* p = nullptr;
  ~Str() { dlab_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(dlab_version()), 0u);
  EXPECT_STREQ(dlab_status_name(DLAB_OK), "Ok");
  EXPECT_STREQ(dlab_status_name(DLAB_E_BUDGET_EXCEEDED), "BudgetExceeded");
}

TEST(CApi, AlgebraArithmetic) {
  Alg q3;
  ASSERT_EQ(dlab_algebra_new(DLAB_QP, 3, 1, 4, nullptr, 0, &q3.p), DLAB_OK);
  EXPECT_EQ(dlab_algebra_dim(q3.p), 1);
  EXPECT_EQ(dlab_algebra_precision(q3.p), 4);
  const int64_t two = 2;
  int64_t out = 0;
  int shift = -1;
  ASSERT_EQ(dlab_algebra_inv(q3.p, {&two, 0}, &out, &shift), DLAB_OK);
  EXPECT_EQ(out, 41);
  EXPECT_EQ(shift, 0);
  double nrm = 0;
  const int64_t three = 3;
  ASSERT_EQ(dlab_algebra_norm(q3.p, {&three, 0}, &nrm), DLAB_OK);
  EXPECT_DOUBLE_EQ(nrm, 1.0 / 3);

  Alg h;
  ASSERT_EQ(dlab_algebra_new(DLAB_H, 2, 4, 6, nullptr, 0, &h.p), DLAB_OK);
  const int64_t i[4] = {0, 64, 0, 0}, j[4] = {0, 0, 64, 0};
  int64_t k[4];
  ASSERT_EQ(dlab_algebra_mul(h.p, {i, 0}, {j, 0}, k, &shift), DLAB_OK);
  EXPECT_EQ(std::vector<int64_t>(k, k + 4), (std::vector<int64_t>{0, 0, 0, 64}));
  Str name;
  ASSERT_EQ(dlab_algebra_name(h.p, &name.p), DLAB_OK);
  EXPECT_EQ(name.s(), "H");
}

TEST(CApi, ErrorsAreReported) {
  Alg bad;
  EXPECT_EQ(dlab_algebra_new(DLAB_QP, 4, 1, 4, nullptr, 0, &bad.p), DLAB_E_NON_PRIME);
  EXPECT_EQ(bad.p, nullptr);
  EXPECT_GT(std::strlen(dlab_last_error()), 0u);
  EXPECT_EQ(dlab_algebra_new(DLAB_R, 2, 3, 4, nullptr, 0, &bad.p), DLAB_E_UNSUPPORTED_REAL_DIM);
  const int64_t poly[3] = {1, 0, 1};
  EXPECT_EQ(dlab_algebra_new(DLAB_QP_EXT, 2, 2, 4, poly, 3, &bad.p), DLAB_E_REDUCIBLE_POLY);
  EXPECT_EQ(dlab_algebra_new(DLAB_R, 2, 1, 4, nullptr, 0, nullptr), DLAB_E_INVALID_ARGUMENT);
  size_t n = 0;
  EXPECT_EQ(dlab_covering_number(nullptr, 0, &n), DLAB_E_INVALID_ARGUMENT);
  Set s;
  EXPECT_EQ(dlab_set_read("/nonexistent/file.dset", &s.p), DLAB_E_IO);
  dlab_set_free(nullptr);
  dlab_string_free(nullptr);
}

TEST(CApi, SetsAndOperations) {
  Alg r;
  ASSERT_EQ(dlab_algebra_new(DLAB_R, 2, 1, 5, nullptr, 0, &r.p), DLAB_OK);
  const int64_t pts[3] = {9, 0, 8};
  Set a;
  ASSERT_EQ(dlab_set_new(r.p, 5, 0, pts, 3, &a.p), DLAB_OK);
  EXPECT_EQ(dlab_set_size(a.p), 3u);
  EXPECT_EQ(dlab_set_coords(a.p)[0], 0);
  size_t cover = 0;
  ASSERT_EQ(dlab_covering_number(a.p, 2, &cover), DLAB_OK);
  EXPECT_EQ(cover, 2u);
  Set s;
  ASSERT_EQ(dlab_sumset(a.p, a.p, &s.p), DLAB_OK);
  EXPECT_EQ(dlab_set_size(s.p), 6u);  // {0, 8, 9, 16, 17, 18}
  uint64_t e = 0;
  const int64_t ap[3] = {0, 1, 2};
  Set b;
  ASSERT_EQ(dlab_set_new(r.p, 5, 0, ap, 3, &b.p), DLAB_OK);
  ASSERT_EQ(dlab_additive_energy(b.p, b.p, &e), DLAB_OK);
  EXPECT_EQ(e, 19u);
}

TEST(CApi, FileRoundTrip) {
  Alg c;
  ASSERT_EQ(dlab_algebra_new(DLAB_C, 2, 2, 6, nullptr, 0, &c.p), DLAB_OK);
  Set net;
  ASSERT_EQ(dlab_gen_circle(c.p, 6, &net.p), DLAB_OK);
  const auto path = (std::filesystem::temp_directory_path() / "dlab_capi.dset").string();
  ASSERT_EQ(dlab_set_write(net.p, path.c_str(), "{\"k\":1}"), DLAB_OK);
  Set back;
  ASSERT_EQ(dlab_set_read(path.c_str(), &back.p), DLAB_OK);
  ASSERT_EQ(dlab_set_size(back.p), dlab_set_size(net.p));
  EXPECT_EQ(std::memcmp(dlab_set_coords(back.p), dlab_set_coords(net.p),
                        2 * sizeof(int64_t) * dlab_set_size(net.p)),
            0);
  std::filesystem::remove(path);
}

TEST(CApi, CounterexampleAndProjection) {
  Pairs g, g0, g1;
  Set x;
  ASSERT_EQ(dlab_gen_counterexample(2, 4, &g.p, &x.p, &g0.p, &g1.p), DLAB_OK);
  EXPECT_EQ(dlab_pairs_size(g0.p), 289u);
  EXPECT_EQ(dlab_pairs_size(g1.p), 289u);
  EXPECT_EQ(dlab_pairs_size(g.p), 2 * 289u - 17u);
  EXPECT_EQ(dlab_pairs_dim(g.p), 2);
  const int64_t i[2] = {0, 16};
  Set img;
  ASSERT_EQ(dlab_project(g0.p, {i, 0}, &img.p), DLAB_OK);
  EXPECT_EQ(dlab_set_size(img.p), 289u);
  Str csv;
  ASSERT_EQ(dlab_projection_profile(g0.p, x.p, DLAB_CSV, &csv.p), DLAB_OK);
  EXPECT_EQ(csv.s().rfind("exp_id,", 0), 0u);
}

TEST(CApi, BudgetControl) {
  dlab_set_point_budget(123);
  EXPECT_EQ(dlab_point_budget(), 123u);
  Alg c;
  ASSERT_EQ(dlab_algebra_new(DLAB_C, 2, 2, 6, nullptr, 0, &c.p), DLAB_OK);
  Set grid;
  EXPECT_EQ(dlab_gen_full_grid(c.p, 6, &grid.p), DLAB_E_BUDGET_EXCEEDED);
  dlab_set_point_budget(0);
  ASSERT_EQ(dlab_gen_full_grid(c.p, 6, &grid.p), DLAB_OK);
  EXPECT_EQ(dlab_set_size(grid.p), 129u * 129u);
}

TEST(CApi, CountingAndJson) {
  Alg c;
  ASSERT_EQ(dlab_algebra_new(DLAB_C, 2, 2, 5, nullptr, 0, &c.p), DLAB_OK);
  Set a;
  ASSERT_EQ(dlab_gen_random(c.p, 5, 1.0, 7, 8.0, &a.p), DLAB_OK);
  Str tv;
  ASSERT_EQ(dlab_count_tv(a.p, a.p, 1, 0, 0, 1.0, 0.5, 1.0, 0.0, &tv.p), DLAB_OK);
  EXPECT_NE(tv.s().find("\"total\""), std::string::npos);
  const int64_t one[2] = {32, 0}, zero[2] = {0, 0};
  Str sp;
  EXPECT_EQ(dlab_count_sparse(a.p, {one, 0}, {zero, 0}, 0, 0, 0, &sp.p),
            DLAB_E_DIVISION_BY_NEGLIGIBLE);
  ASSERT_EQ(dlab_count_sparse(a.p, {one, 0}, {one, 0}, 0, 0, 0, &sp.p), DLAB_OK);
  const dlab_set* sets[2] = {a.p, a.p};
  const char* names[2] = {"A", "B"};
  Str csv;
  size_t violations = 99;
  ASSERT_EQ(dlab_ledger(sets, names, 2, nullptr, nullptr, &csv.p, &violations), DLAB_OK);
  EXPECT_EQ(violations, 0u);
  EXPECT_EQ(csv.s().rfind("instance,lhs,rhs,slack\n", 0), 0u);
  Set sum;
  ASSERT_EQ(dlab_eval_expr("A+B", sets, names, 2, nullptr, nullptr, &sum.p), DLAB_OK);
  Set direct;
  ASSERT_EQ(dlab_sumset(a.p, a.p, &direct.p), DLAB_OK);
  EXPECT_EQ(dlab_set_size(sum.p), dlab_set_size(direct.p));
  Str sched;
  ASSERT_EQ(dlab_schedule("1", "1/2", "1", "0", 2, 18, &sched.p), DLAB_OK);
  EXPECT_NE(sched.s().find("\"c1\": \"1/8\""), std::string::npos);
}
