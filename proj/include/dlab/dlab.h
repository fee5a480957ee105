#ifndef DLAB_DLAB_H
#define DLAB_DLAB_H

/* C interface to the discretised sum-product laboratory.
 *
 * Every function returns a dlab_status; 0 is success. On failure the
 * message of the last error on this thread is available from
 * dlab_last_error(). Strings returned through char** are owned by the
 * caller and released with dlab_string_free. Handles are released with
 * their matching *_free function; passing NULL to a free function is a
 * no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DLAB_API __declspec(dllexport)
#elif defined(DLAB_BUILDING_LIBRARY)
#define DLAB_API __attribute__((visibility("default")))
#else
#define DLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dlab_status {
  DLAB_OK = 0,
  DLAB_E_INVALID_ARGUMENT = 1,
  DLAB_E_NON_PRIME = 2,
  DLAB_E_UNSUPPORTED_REAL_DIM = 3,
  DLAB_E_REDUCIBLE_POLY = 4,
  DLAB_E_DIVISION_BY_NEGLIGIBLE = 5,
  DLAB_E_SCALE_OUT_OF_RANGE = 6,
  DLAB_E_EMPTY_INPUT = 7,
  DLAB_E_ALGEBRA_MISMATCH = 8,
  DLAB_E_SCALE_MISMATCH = 9,
  DLAB_E_BUDGET_EXCEEDED = 10,
  DLAB_E_NO_ADMISSIBLE_PAIRS = 11,
  DLAB_E_SINGULAR_MAP = 12,
  DLAB_E_SUBALGEBRA_TRAPPED = 13,
  DLAB_E_NOT_REAL_BASE = 14,
  DLAB_E_RANGE = 15,
  DLAB_E_GENERATION_FAILED = 16,
  DLAB_E_EMPTY_GRAPH = 17,
  DLAB_E_TRAPPED_INPUT = 18,
  DLAB_E_PARSE = 19,
  DLAB_E_IO = 20,
  DLAB_E_INTERNAL = 99
} dlab_status;

typedef enum dlab_kind { DLAB_R = 0, DLAB_C = 1, DLAB_H = 2, DLAB_QP = 3, DLAB_QP_EXT = 4 } dlab_kind;
typedef enum dlab_side { DLAB_LEFT = 0, DLAB_RIGHT = 1 } dlab_side;
typedef enum dlab_format { DLAB_CSV = 0, DLAB_JSON = 1 } dlab_format;

typedef struct dlab_algebra dlab_algebra;
typedef struct dlab_set dlab_set;     /* delta-discretised subset of E */
typedef struct dlab_pairs dlab_pairs; /* delta-discretised subset of E x E */

/* Element of an algebra: dim() coordinates in grid units plus, for p-adic
 * algebras, a shift s meaning the value p^-s * coords. */
typedef struct dlab_element {
  const int64_t* coords;
  int shift;
} dlab_element;

DLAB_API const char* dlab_version(void);
DLAB_API const char* dlab_last_error(void);
DLAB_API const char* dlab_status_name(dlab_status status);
DLAB_API void dlab_string_free(char* s);

/* Caps intermediate set sizes. 0 restores the default (env DLAB_BUDGET_POINTS or 1e7). */
DLAB_API void dlab_set_point_budget(size_t points);
DLAB_API size_t dlab_point_budget(void);

/* ---- algebras ---- */
/* poly: defining polynomial for DLAB_QP_EXT, lowest degree first (d+1
 * entries), or NULL for the default. */
DLAB_API dlab_status dlab_algebra_new(dlab_kind kind, int64_t p, int d, int m, const int64_t* poly,
                                      size_t poly_len, dlab_algebra** out);
DLAB_API void dlab_algebra_free(dlab_algebra* alg);
DLAB_API int dlab_algebra_dim(const dlab_algebra* alg);
DLAB_API int dlab_algebra_precision(const dlab_algebra* alg);
DLAB_API dlab_status dlab_algebra_name(const dlab_algebra* alg, char** out);
/* out receives dim() coordinates and *out_shift the shift. */
DLAB_API dlab_status dlab_algebra_mul(const dlab_algebra* alg, dlab_element x, dlab_element y,
                                      int64_t* out, int* out_shift);
DLAB_API dlab_status dlab_algebra_inv(const dlab_algebra* alg, dlab_element x, int64_t* out,
                                      int* out_shift);
DLAB_API dlab_status dlab_algebra_norm(const dlab_algebra* alg, dlab_element x, double* out);

/* ---- sets ---- */
DLAB_API dlab_status dlab_set_new(const dlab_algebra* alg, int m, int radius_exp,
                                  const int64_t* coords, size_t n_points, dlab_set** out);
DLAB_API void dlab_set_free(dlab_set* s);
DLAB_API size_t dlab_set_size(const dlab_set* s);
DLAB_API int dlab_set_dim(const dlab_set* s);
DLAB_API int dlab_set_scale_exp(const dlab_set* s);
DLAB_API int dlab_set_radius_exp(const dlab_set* s);
/* Pointer to size()*dim() integers, valid while the handle lives. */
DLAB_API const int64_t* dlab_set_coords(const dlab_set* s);
DLAB_API dlab_status dlab_set_algebra(const dlab_set* s, dlab_algebra** out);
DLAB_API dlab_status dlab_set_read(const char* path, dlab_set** out);
/* config: optional text echoed into the header (may be NULL). */
DLAB_API dlab_status dlab_set_write(const dlab_set* s, const char* path, const char* config);

DLAB_API dlab_status dlab_pairs_new(const dlab_algebra* alg, int m, int radius_exp,
                                    const int64_t* coords, size_t n_pairs, dlab_pairs** out);
DLAB_API void dlab_pairs_free(dlab_pairs* g);
DLAB_API size_t dlab_pairs_size(const dlab_pairs* g);
/* Dimension of the algebra (each pair holds 2*dim integers). */
DLAB_API int dlab_pairs_dim(const dlab_pairs* g);
DLAB_API const int64_t* dlab_pairs_coords(const dlab_pairs* g);
DLAB_API dlab_status dlab_pairs_read(const char* path, dlab_pairs** out);
DLAB_API dlab_status dlab_pairs_write(const dlab_pairs* g, const char* path, const char* config);
DLAB_API dlab_status dlab_cartesian(const dlab_set* a, const dlab_set* b, dlab_pairs** out);

/* ---- generators ---- */
DLAB_API dlab_status dlab_gen_random(const dlab_algebra* alg, int m, double s, uint64_t seed,
                                     double C, dlab_set** out);
DLAB_API dlab_status dlab_gen_circle(const dlab_algebra* alg, int m, dlab_set** out);
DLAB_API dlab_status dlab_gen_ap(const dlab_algebra* alg, int m, size_t count, int64_t step,
                                 int64_t start, dlab_set** out);
DLAB_API dlab_status dlab_gen_full_grid(const dlab_algebra* alg, int m, dlab_set** out);
/* which: 1 or 2. g0/g1 receive the two halves for which == 2 and may be NULL. */
DLAB_API dlab_status dlab_gen_counterexample(int which, int m, dlab_pairs** g, dlab_set** x,
                                             dlab_pairs** g0, dlab_pairs** g1);

/* ---- covering and regularity ---- */
DLAB_API dlab_status dlab_covering_number(const dlab_set* s, int k, size_t* out);
DLAB_API dlab_status dlab_pairs_covering_number(const dlab_pairs* g, int k, size_t* out);
DLAB_API dlab_status dlab_verify_nc(const dlab_set* s, double exponent, double C, int* pass,
                                    char** json);
DLAB_API dlab_status dlab_verified_exponent(const dlab_set* s, double C, double* out);
DLAB_API dlab_status dlab_uniform_subset(const dlab_set* s, int levels_per_stage, dlab_set** out,
                                         char** audit_json);

/* ---- set operations ---- */
DLAB_API dlab_status dlab_sumset(const dlab_set* a, const dlab_set* b, dlab_set** out);
DLAB_API dlab_status dlab_difference(const dlab_set* a, const dlab_set* b, dlab_set** out);
DLAB_API dlab_status dlab_product(const dlab_set* a, const dlab_set* b, dlab_side side,
                                  dlab_set** out);
DLAB_API dlab_status dlab_iterated(const dlab_set* a, int n_sum, int n_prod, dlab_set** out);
DLAB_API dlab_status dlab_scalar_image(const dlab_set* a, dlab_element x, dlab_side side,
                                       dlab_set** out);
DLAB_API dlab_status dlab_project(const dlab_pairs* g, dlab_element x, dlab_set** out);
/* witness_json (may be NULL) receives the (a,b,c,d) index witness of each point. */
DLAB_API dlab_status dlab_quotient_set(const dlab_set* a, int rho_exp, dlab_side side,
                                       dlab_set** out, char** witness_json);
/* entries: four elements L11, L12, L21, L22. */
DLAB_API dlab_status dlab_linear_map_det(const dlab_algebra* alg, const dlab_element* entries,
                                         double* out);
DLAB_API dlab_status dlab_apply_linear_map(const dlab_pairs* g, const dlab_element* entries,
                                           dlab_pairs** out);
DLAB_API dlab_status dlab_apply_dual(const dlab_set* x, const dlab_element* entries,
                                     dlab_set** out);

/* ---- structure ---- */
DLAB_API dlab_status dlab_avoid(const dlab_set* a, double C, int strong, int net_exp, int* pass,
                                char** json);
DLAB_API dlab_status dlab_escape(const dlab_set* a, double floor, size_t max_pool, char** json);
/* mode: 0 halving, 1 translation, 2 field. The basis is escape_basis(A). */
DLAB_API dlab_status dlab_dichotomy(const dlab_set* a, int rho_exp, dlab_side side, int mode,
                                    int constructive_levels, double floor, char** json);

/* ---- counting ---- */
DLAB_API dlab_status dlab_additive_energy(const dlab_set* a, const dlab_set* b, uint64_t* out);
DLAB_API dlab_status dlab_count_tv(const dlab_set* a, const dlab_set* x, int rho_exp,
                                   int symmetric, int adjacent, double s, double sigma, double t,
                                   double eps, char** json);
DLAB_API dlab_status dlab_count_sparse(const dlab_set* a, dlab_element p, dlab_element q,
                                       int adjacent, double s, int rho_exp, char** json);
/* a_sub / b_sub may be NULL. */
DLAB_API dlab_status dlab_bsg(const dlab_pairs* h, const dlab_set* a, const dlab_set* b,
                              char** json, dlab_set** a_sub, dlab_set** b_sub);
/* y1, y2 may be NULL; the heuristic chain rows need both. */
DLAB_API dlab_status dlab_ledger(const dlab_set* const* sets, const char* const* names, size_t n,
                                 const dlab_element* y1, const dlab_element* y2, char** csv,
                                 size_t* violations);
DLAB_API dlab_status dlab_eval_expr(const char* expr, const dlab_set* const* sets,
                                    const char* const* names, size_t n, const dlab_element* y1,
                                    const dlab_element* y2, dlab_set** out);

/* ---- experiments ---- */
/* Rationals are passed as text: "1/2", "1.95", "2". */
DLAB_API dlab_status dlab_schedule(const char* s, const char* sigma, const char* t,
                                   const char* eps, int d, int m, char** json);
DLAB_API dlab_status dlab_projection_profile(const dlab_pairs* g, const dlab_set* x,
                                             dlab_format format, char** out);
DLAB_API dlab_status dlab_expand(const dlab_set* a, const char* s, int rounds, int n_sum,
                                 int n_prod, double C, int levels_per_stage, dlab_format format,
                                 char** out, dlab_set** last);
DLAB_API dlab_status dlab_babyproj(const dlab_set* a, const dlab_set* x, dlab_format format,
                                   char** out);
DLAB_API dlab_status dlab_fibres(const dlab_pairs* g, const dlab_set* x, double c1, int rho_exp,
                                 char** csv);

#ifdef __cplusplus
}
#endif

#endif
