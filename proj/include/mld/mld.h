#ifndef MLD_H
#define MLD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define MLD_API __attribute__((visibility("default")))
#else
#define MLD_API
#endif

typedef enum mld_status {
    MLD_OK = 0,
    MLD_INVALID_ARGUMENT = 1,
    MLD_PARSE = 2,
    MLD_UNSUPPORTED = 3,
    MLD_BUDGET = 4,
    MLD_DEGENERATE = 5,
    MLD_NUMERIC = 6,
    MLD_INCONSISTENT = 7,
    MLD_INTERNAL = 8,
    MLD_NULL_POINTER = 9
} mld_status;

typedef struct mld_arrangement mld_arrangement;
typedef struct mld_model mld_model;
typedef struct mld_system mld_system;

/* Library version string, statically allocated. */
MLD_API const char* mld_version(void);
/* Message of the last failed call on this thread ("" if none). Valid until the next call. */
MLD_API const char* mld_last_error(void);
MLD_API const char* mld_status_name(mld_status s);
/* Frees any string returned through a char** out parameter. */
MLD_API void mld_string_free(char* s);
/* 0 = trace ... 6 = off */
MLD_API void mld_set_log_level(int level);

/* Arrangements. Text format: "d n central|affine" then n lines "a_1 ... a_d b". */
MLD_API mld_status mld_arrangement_parse(const char* text, mld_arrangement** out);
MLD_API void mld_arrangement_free(mld_arrangement* a);
MLD_API mld_status mld_arrangement_format(const mld_arrangement* a, char** text);
/* {"dim","size","central","char_poly":[...],"regions":{"total","bounded"}} */
MLD_API mld_status mld_arrangement_summary(const mld_arrangement* a, char** json);
/* Region counts by cell enumeration; d <= max_dim, n <= max_hyperplanes. */
MLD_API mld_status mld_arrangement_brute_regions(const mld_arrangement* a, int max_dim, size_t max_hyperplanes,
                                                 char** json);

/* Discriminantal arrangements for a seeded random configuration. degenerate may be NULL.
   which is "A", "B", "Btilde" or "all"; "B" skips the central and affine-section builds.
   out (may be NULL) receives B, or the named arrangement ("all" gives B). */
MLD_API mld_status mld_disc_build(int k, int m, uint64_t seed, const char* degenerate, const char* which,
                                  mld_arrangement** out, char** json);
/* Value of the degree (k-1)^2 polynomial at m, as an exact rational string. */
MLD_API mld_status mld_soft_poly(int k, long m, char** value);

/* Euler characteristic bookkeeping. Inputs and outputs are JSON. */
MLD_API mld_status mld_euler_recursion(const char* constants_json, int m, char** json);
MLD_API mld_status mld_euler_decomp48(const char* table_json, char** json);
/* profile_json: {"3": n_3, "4": n_4, ...} */
MLD_API mld_status mld_euler_rho(const char* profile_json, char** json);
MLD_API mld_status mld_euler_stratum_count(long m, long h, char** value);

/* Finite-field point counts of X(3,m). */
MLD_API mld_status mld_ff_formula(int m, int64_t q, char** value);
MLD_API mld_status mld_ff_brute(int k, int m, int64_t q, double max_tuples, unsigned threads, char** value);
MLD_API mld_status mld_ff_euler(int m, char** value);

/* Linear models for tropical MLE. */
MLD_API mld_status mld_model_from_arrangement(const mld_arrangement* a, mld_model** out);
MLD_API mld_status mld_model_chy(int m, mld_model** out);
MLD_API void mld_model_free(mld_model* m);
/* {"d","n","labels":[...]} */
MLD_API mld_status mld_model_info(const mld_model* m, char** json);
/* w: comma or whitespace separated rationals. {"points":[["7","5",...],...],"count"} */
MLD_API mld_status mld_trop_critical_points(const mld_model* m, const char* w, unsigned threads, char** json);

/* Likelihood systems. */
MLD_API mld_status mld_system_config(int k, int m, mld_system** out);
MLD_API mld_status mld_system_linear(const mld_arrangement* a, mld_system** out);
MLD_API mld_status mld_system_model(const mld_model* m, mld_system** out);
MLD_API mld_status mld_system_pappus(mld_system** out);
MLD_API void mld_system_free(mld_system* s);
/* {"vars","var_names","coords":[...],"labels":[...]} */
MLD_API mld_status mld_system_info(const mld_system* s, char** json);
/* options_json keys (all optional): seed, budget, threads, weights ("random" | "positive" |
   [[re,im],...]), weight_seed. Result: points, residuals, count, saturated, separation, stats. */
MLD_API mld_status mld_solve(const mld_system* s, const char* options_json, char** json);
/* weights_text: one line per coordinate, "w" or "w re im". starts_text may be NULL, in which
   case starts come from mld_solve with the coefficients as weights. options_json keys:
   seed, budget, threads, tmin, denom_cap, rho_reject. */
MLD_API mld_status mld_learn(const mld_system* s, const char* weights_text, const char* starts_text,
                             const char* options_json, char** json);

#ifdef __cplusplus
}
#endif

#endif
