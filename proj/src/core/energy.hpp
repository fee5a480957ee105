#pragma once

// Counting engines: additive energy, the quintuple and quadruple sets of the
// expansion arguments, Balog-Szemeredi-Gowers extraction and Ruzsa-calculus
// ledgers.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core/algebra.hpp"
#include "core/dset.hpp"

namespace dlab {

using count_t = std::uint64_t;

/// #{(a, a', b, b') : a + b = a' + b'}.
count_t additive_energy(const DSet& a, const DSet& b);

struct CountReport {
  count_t total = 0;
  std::vector<std::pair<std::string, count_t>> breakdown;
  double bound = 0;  // 0 when the exponents were not supplied
  std::string bound_formula;
  double ratio = 0;  // total / bound
  std::string tolerance;
  /// Quadruple counts: |pA + qA| on the grid and the Cauchy-Schwarz lower
  /// bound |A|^4 / |Y| it must meet.
  count_t image_size = 0;
  double cs_lower = 0;
};

struct TvOptions {
  bool symmetric = false;  // count c + xd instead of c - xd
  bool adjacent = false;   // accept neighbouring cells (Real)
  // Exponents for the bound delta^(s(t - sigma + eps)/t) |A|^3 |X|.
  double s = 0, sigma = 0, t = 0, eps = 0;
};

/// #{(a,b,c,d,x) in A^4 x X : a + xb and c - xd land in the same cell}, with
/// the split |b - d| <= rho versus > rho.
CountReport quintuple_count_tv(const DSet& a, const DSet& x, int rho_exp, const TvOptions& opts = {});

struct SparseOptions {
  bool adjacent = false;
  // Exponents for the bound delta^s rho^s |A|^4 (0 disables).
  double s = 0;
  int rho_exp = 0;
};

/// #{(a1,a2,a3,a4) : a1 q + a3 p and a2 q + a4 p round to the same cell}.
CountReport quadruple_count_sparse(const DSet& a, const Element& p, const Element& q,
                                   const SparseOptions& opts = {});

struct BsgResult {
  DSet a_sub;
  DSet b_sub;
  double density_a = 0;
  double density_b = 0;
  count_t sumset_count = 0;
  count_t kept_edges = 0;
  double K = 0;            // |A||B| / |H|
  double exponent = 0;     // |A_sub + B_sub| = K^exponent |A|^(1/2) |B|^(1/2)
  double guarantee = 0;    // K^exponent |A|^(1/2) |B|^(1/2)
  bool degenerate = false;  // K >= min(|A|, |B|) / 2
};

BsgResult bsg_extract(const PairSet& h, const DSet& a, const DSet& b);

struct LedgerRow {
  std::string instance;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;    // rhs / lhs
  bool theorem = true;  // false for heuristic chain rows
};

struct Ledger {
  std::vector<LedgerRow> rows;
  /// Theorem rows with lhs > rhs (must never happen on the grid group).
  std::size_t violations = 0;
};

/// Evaluates expressions such as "A+y1*A-y2*A" over named sets and scalars.
DSet eval_expr(const std::string& expr, const std::map<std::string, DSet>& sets,
               const std::map<std::string, Element>& scalars);

/// Ruzsa triangle instances over ordered triples of distinct sets, a
/// Plunnecke instance |2B - B| <= K^3 |A| for every ordered pair, and (when
/// scalars y1, y2 are given) the heuristic chain
/// |A + y1 A - y2 A| vs |A + A| |A + y1 A| |A - y2 A| / |A|^2 for each set.
Ledger ruzsa_ledger(const std::vector<std::pair<std::string, DSet>>& sets,
                    const std::map<std::string, Element>& scalars = {});

std::string to_json(const CountReport& r);
std::string to_json(const BsgResult& r);
/// CSV with columns instance,lhs,rhs,slack.
std::string to_csv(const Ledger& l);

}  // namespace dlab
