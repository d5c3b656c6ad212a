#ifndef STIRVAL_H
#define STIRVAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STV_API __declspec(dllexport)
#else
#define STV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stv_status {
  STV_OK = 0,
  STV_ERR_DOMAIN = 1,
  STV_ERR_NOT_INVERTIBLE = 2,
  STV_ERR_PRECISION = 3,
  STV_ERR_RESOURCE = 4,
  STV_ERR_NOT_STABILIZED = 5,
  STV_ERR_USAGE = 6,
  STV_ERR_INTERNAL = 7
} stv_status;

/* Message of the last failed call on this thread; never NULL. */
STV_API const char* stv_last_error(void);
STV_API const char* stv_status_name(stv_status status);
STV_API const char* stv_version(void);

/* Every char** result is allocated by the library and released here. */
STV_API void stv_string_free(char* s);

/* Integers travel as decimal strings. */
STV_API stv_status stv_stirling(uint64_t n, uint64_t k, char** out);
STV_API stv_status stv_stirling_mod(const char* n, uint64_t k, unsigned long p, int m, char** out);
STV_API stv_status stv_t_p(uint64_t n, uint64_t k, unsigned long p, char** out);
/* *is_infinite is set when S(n, k) = 0. */
STV_API stv_status stv_valuation(unsigned long p, const char* n, uint64_t k, int64_t* out, int* is_infinite);
STV_API stv_status stv_valuation_table(unsigned long p, uint64_t k, uint64_t n_from, uint64_t n_to, char** csv);

typedef struct stv_tree stv_tree;

typedef struct stv_tree_options {
  int depth;     /* 0: deepen adaptively */
  int extra;     /* levels past m0_observed in adaptive mode */
  int max_depth;
  int precision; /* p-adic digits; 0 for the default */
  int max_precision;
  const char* invocation; /* recorded in exports; may be NULL */
} stv_tree_options;

STV_API void stv_tree_options_init(stv_tree_options* options);

STV_API stv_status stv_tree_build(unsigned long p, uint64_t k, const stv_tree_options* options, stv_tree** out);
/* f(x) = sum c_i u_i^x; coefficients are rationals "a" or "a/b", bases integers. */
STV_API stv_status stv_tree_build_expsum(unsigned long p, size_t n_terms, const char* const* coefficients,
                                         const char* const* bases, const stv_tree_options* options, stv_tree** out);
/* format: "text", "json" or "dot". */
STV_API stv_status stv_tree_export(const stv_tree* tree, const char* format, char** out);
STV_API stv_status stv_tree_from_json(const char* json, stv_tree** out);
STV_API size_t stv_tree_mu(const stv_tree* tree);
/* -1 when the tree did not stabilize. */
STV_API int stv_tree_m0_observed(const stv_tree* tree);
STV_API void stv_tree_destroy(stv_tree* tree);

/* Zeros of f_{a0,k} refined to `digits` digits; format "text" or "json". */
STV_API stv_status stv_zero(unsigned long p, uint64_t k, unsigned a0, int digits, int precision, const char* format,
                            char** out);

typedef struct stv_report stv_report;

/* claim: lengwan, geslen, final, conjecture, remark, period, decomposition or
 * all. params_json is a JSON object (or NULL) overriding the defaults. */
STV_API stv_status stv_verify(const char* claim, const char* params_json, stv_report** out);
/* params: {"primes": [...], "k_lo": .., "k_hi": .., "extra": ..} */
STV_API stv_status stv_sweep(const char* params_json, stv_report** out);
/* 1 unless the outcome is "fail". */
STV_API int stv_report_passed(const stv_report* report);
STV_API const char* stv_report_outcome(const stv_report* report);
/* format: "text" or "json". */
STV_API stv_status stv_report_export(const stv_report* report, const char* format, char** out);
STV_API void stv_report_destroy(stv_report* report);

#ifdef __cplusplus
}
#endif

#endif
