#pragma once

// Experiment drivers: parameter schedules, set generators, expansion rounds
// and projection probes.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "core/algebra.hpp"
#include "core/dset.hpp"

namespace dlab {

using Rational = boost::rational<long long>;

/// Accepts "3", "-1/2" or a terminating decimal such as "1.95".
Rational parse_rational(const std::string& text);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

/// c1 = s (1 - s/d) / 4.
Rational choose_c1(const Rational& s, const Rational& d);

struct RhoChoice {
  Rational exponent;  // rho = delta^exponent
  int rho_exp = 0;    // rounded: rho = radix^-rho_exp
  Rational c;         // choose_rho_tv only
  bool vanishing = false;  // t == sigma: c = s eps / t
};

/// rho = delta^((d-s)/(3(d+s))), rounded to 1 <= rho_exp, 3 rho_exp < m.
RhoChoice choose_rho_expand(const Rational& s, const Rational& d, int delta_exp);
/// rho = delta^((t-sigma+eps)/t) and c = s (t-sigma+eps)/t.
RhoChoice choose_rho_tv(const Rational& s, const Rational& sigma, const Rational& t,
                        const Rational& eps, int delta_exp);

struct IterationBudget {
  int n = 0;
  std::vector<long double> trajectory;  // s_0, ..., s_n
  double n_estimate = 0;  // max{(t-s)/c1(s), (t-s)/c1(t)}
  std::string N_symbolic;  // 20^(20^n) or 20^((4d)^n)
  double log10_N = 0;
};

IterationBudget iteration_budget(const Rational& s, const Rational& t, const Rational& d,
                                 bool commutative);

struct Schedule {
  Rational s{1}, sigma{1}, t{0}, eps{0};
  int d = 2;
  int delta_exp = 0;  // m
  int rho_exp = 0;
  int Delta_exp = 0;  // m - 3 rho_exp
  Rational c1;
  Rational c_tv;
  int n_iters = 1;    // expansion rounds
  std::string N_budget;
  int n_sum = 2;
  int n_prod = 2;
  double C = 8;       // sub-algebra avoidance constant
  double nc_C = 1;    // constant for verified exponents
  int levels_per_stage = 1;
  int net_exp = -1;
};

/// Fills rho_exp, Delta_exp, c1, c_tv and N_budget from the exponents.
Schedule make_schedule(const Rational& s, const Rational& sigma, const Rational& t,
                       const Rational& eps, int d, int delta_exp);

struct ExperimentRecord {
  std::string exp_id;
  std::string algebra;
  long long p = 0;  // 0 for Real algebras
  int d = 0;
  int m = 0;
  double s = 0, sigma = 0, t = 0;
  std::string op;
  std::string x_coords;
  std::size_t count = 0;
  double exponent = 0;
  std::uint64_t seed = 0;
};

std::string records_csv(const std::vector<ExperimentRecord>& rows);
std::string records_json(const std::vector<ExperimentRecord>& rows);

/// Random (delta, s)-set by a branching tree: each child cell survives with
/// probability radix^(s-d), at least one per parent. Real sets live in
/// [0, 1)^d, Padic ones in Z_p^d. Re-drawn until is_nonconcentrated(s, C)
/// holds, at most 10 times.
DSet gen_random_dset(const AlgebraPtr& alg, int m, double s, std::uint64_t seed, double C = 8);
/// Grid points nearest to the unit circle of C, about one per delta of arc.
DSet gen_circle_net(const AlgebraPtr& alg, int m);
/// {start, start + step, ..., start + (count-1) step} along e_0, in grid units.
DSet gen_ap(const AlgebraPtr& alg, int m, std::size_t count, i64 step = 1, i64 start = 0);
/// Real: the coordinate box [-1, 1]^d. Padic: all of Z_p^d mod p^m.
DSet gen_full_grid(const AlgebraPtr& alg, int m);

enum class Counterexample { One, Two };

struct CounterexampleSets {
  PairSet g;
  DSet x;
  std::vector<PairSet> parts;  // Two: G0 = A x A, G1 = iA x A
  DSet a;
};

CounterexampleSets gen_counterexample(Counterexample which, int m);

std::string format_coords(std::span<const i64> coords);

/// covering_number(project(x, G), m) for each x in X.
std::vector<ExperimentRecord> measure_projection_profile(const PairSet& g, const DSet& x);

struct ExpansionRound {
  int round = 0;
  std::size_t size = 0;
  std::size_t count = 0;
  double exponent = 0;   // min(d, log N / log(1/delta))
  double verified = 0;   // verified_exponent at nc_C
  double predicted = 0;  // s + round c1 / 2
};

struct ExpansionRun {
  std::vector<ExpansionRound> rounds;  // rounds[0] describes the input
  std::vector<ExperimentRecord> records;
  DSet last;
};

ExpansionRun run_expansion(const DSet& a, const Schedule& schedule);

struct BabyprojResult {
  std::vector<ExperimentRecord> records;  // one per x
  std::size_t witness = 0;               // argmax over X
  std::size_t best_count = 0;
  double gain = 0;           // best_count / N(A)
  double gain_exponent = 0;  // log gain / log(1/delta)
};

/// max over x in X of covering_number(A + xA).
BabyprojResult probe_babyproj(const DSet& a, const DSet& x);

struct FibreRow {
  std::size_t x_index = 0;
  std::size_t max_fibre = 0;   // heaviest rho-cell of pi_x over G (with multiplicity)
  std::vector<i64> cell;
  std::size_t cells = 0;       // occupied rho-cells
  double fraction = 0;         // max_fibre / |G|
  double big_threshold = 0;    // delta^(10 c1) |G|^(1/2)
  bool big = false;
};

std::vector<FibreRow> fibre_profile(const PairSet& g, const DSet& x, double c1, int rho_exp);
std::string fibres_csv(const std::vector<FibreRow>& rows);

}  // namespace dlab
