#pragma once

// Sub-algebra avoidance, escape bases and the dense/sparse dichotomy for
// quotient sets.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "core/algebra.hpp"
#include "core/dset.hpp"
#include "core/setops.hpp"

namespace dlab {

struct SubAlgebra {
  std::string label;
  int dim = 0;  // over the base field
  /// Real: orthonormal spanning vectors in coordinate space.
  std::vector<std::vector<double>> frame;
  /// Padic: integral basis of the subfield (coords mod p^m), completed to a
  /// unimodular basis of the whole ring by `complement`.
  std::vector<std::vector<i64>> basis;
  std::vector<std::vector<i64>> complement;
};

struct SubAlgebraFamily {
  Algebra alg;
  int net_exp = 0;  // H only: fineness 2^-net_exp of the u-net
  std::vector<SubAlgebra> members;
};

/// Proper sub-algebras: {0} always; R inside C and H; span(1, u) over a net
/// of unit imaginary u for H (default net_exp = ceil(m/2)); subfields
/// Q_{p^e}, e | d, e < d, for Padic.
SubAlgebraFamily subalgebra_family(const Algebra& alg, int net_exp = -1);

double distance_to_subalgebra(const Algebra& alg, const Element& a, const SubAlgebra& f);

struct AvoidReport {
  bool pass = false;
  double C = 0;
  std::size_t members = 0;
  std::string worst_member;
  double worst_distance = 0;  // max over a in A of d(a, F) for the worst F
  std::size_t worst_trapped = 0;  // points with d(a, F) < 1/C
  int net_exp = 0;
};

AvoidReport avoids_subalgebras(const DSet& a, double C, int net_exp = -1);

struct StrongAvoidReport {
  bool pass = false;            // exact: trapped(F) < ceil(n/C) for every F
  bool sufficient = false;      // same test; kept separately for reporting
  bool necessary = false;       // trapped(F) <= n - ceil(n/C) for every F
  double C = 0;
  std::size_t n = 0;
  std::size_t threshold = 0;    // ceil(n/C)
  std::string worst_member;
  std::size_t worst_trapped = 0;
  std::vector<std::size_t> trapped_indices;  // for the worst member
};

StrongAvoidReport strongly_avoids(const DSet& a, double C, int net_exp = -1);

struct EscapeResult {
  std::vector<Element> basis;  // in working-algebra units of the input set
  std::vector<int> depth;      // number of factors of each basis element
  double det = 0;
  std::size_t pool_size = 0;
};

/// Greedy volume maximisation over products of at most d elements of A.
EscapeResult escape_basis(const DSet& a, double floor, std::size_t max_pool = 100000);

/// (x + sum_j i_j v_j) / 2, rounded to the grid. Real algebras only.
Element halving_map(const Algebra& alg, const std::vector<Element>& v,
                    const std::vector<int>& bits, const Element& x);

enum class DichotomyMode { Halving, Translation, Field };
enum class DichotomyCase { Dense, Sparse };

struct DichotomyOutcome {
  DichotomyCase kind = DichotomyCase::Dense;
  DichotomyMode mode = DichotomyMode::Halving;
  int delta_exp = 0;  // Q's scale exponent
  int rho_exp = 0;
  std::size_t q_size = 0;

  // Dense
  std::size_t measured = 0;  // N_Delta(Q_Delta), counted as |Q|
  double det = 0;
  double bound = 0;          // (det / 2^d) Delta^-d or |det|_p Delta^-d
  bool bound_holds = false;
  /// Constructive mode: per level n, dyadic points found within Delta of Q
  /// and the number tested.
  std::vector<std::array<std::size_t, 2>> dyadic;

  // Sparse
  std::size_t x_index = 0;
  std::size_t y_index = 0;  // Field mode only
  std::vector<int> bits;    // Halving
  int j = -1;               // Translation
  std::string op;           // "halving", "translate", "sum", "product"
  /// Image in fine units: Real 2^-(m+1) with m the input scale; Padic the
  /// stored residue at Q's scale (empty if the image left Q's ball).
  std::vector<i64> image;
  std::array<std::size_t, 4> witness_x{};
  std::array<std::size_t, 4> witness_y{};
  Element p;
  Element q;
};

struct DichotomyOptions {
  DichotomyMode mode = DichotomyMode::Halving;
  int constructive_levels = 0;  // Real dense case: dyadic levels to check
};

/// Checks the closure hypothesis of the dense case for Q = quotient_set(A).
/// `v` is a basis in working-algebra units of A. Halving (Real): f_i(x)
/// within one Delta-cell (l-infinity) of Q for all x, i. Translation
/// (Padic): x + v_j in a cell of Q. Field (commutative Padic): x + y and xy
/// in cells of Q, i.e. Q_Delta + Q_Delta and Q_Delta Q_Delta stay in Q_Delta;
/// there `v` is unused and the dense certificate takes its basis from Q.
DichotomyOutcome dichotomy_check(const QuotientSet& q, const DSet& a,
                                 const std::vector<Element>& v,
                                 const DichotomyOptions& opts = {});

std::string to_json(const AvoidReport& r);
std::string to_json(const StrongAvoidReport& r);
std::string to_json(const Algebra& alg, const EscapeResult& r);
std::string to_json(const DichotomyOutcome& r);

}  // namespace dlab
