/* Copyright 2026 The khet Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the khet library: Kuramoto equilibria, rebellion
 * heteroclinic orbits, swarms and connection graphs.
 *
 * Every call returns a khet_status. On failure, khet_last_error() holds a
 * message for the calling thread until its next khet call. Index sets are
 * one-based, as in the CLI and the exported files.
 */
#ifndef KHET_H
#define KHET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KHET_BUILDING_LIBRARY)
#    define KHET_API __declspec(dllexport)
#  else
#    define KHET_API __declspec(dllimport)
#  endif
#else
#  define KHET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum khet_status {
  KHET_OK = 0,
  KHET_ERR_INVALID_ARGUMENT = 1,
  KHET_ERR_DIMENSION = 2,
  KHET_ERR_CLUSTER_VIOLATION = 3,
  KHET_ERR_INVALID_FAT_SET = 4,
  KHET_ERR_UNSUPPORTED = 5,
  KHET_ERR_NO_LINKAGE = 6,
  KHET_ERR_CLASSIFICATION = 7,
  KHET_ERR_DIVERGENCE = 8,
  KHET_ERR_NON_CONVERGENCE = 9,
  KHET_ERR_WRONG_BASIN = 10,
  KHET_ERR_ORDERING_VIOLATION = 11,
  KHET_ERR_UNCONSTRUCTIBLE = 12,
  KHET_ERR_INVALID_VERTEX = 13,
  KHET_ERR_IO = 14,
  KHET_ERR_INTERNAL = 15
} khet_status;

typedef enum khet_symbol { KHET_LEFT = -1, KHET_RIGHT = 1 } khet_symbol;

typedef enum khet_graph_format { KHET_GRAPH_DOT = 0, KHET_GRAPH_JSON = 1 } khet_graph_format;

typedef struct khet_options {
  double step;         /* RK4 step, default 1e-2 */
  double eps_mag;      /* perturbation size, default 1e-2 */
  double delta_stop;   /* backward stop threshold, default 1e-2 */
  double tau_eq;       /* accepted endpoint distance, default 5e-2 */
  uint64_t max_steps;  /* default 1e7 */
  uint64_t record_every;
} khet_options;

typedef struct khet_swarm_spec {
  size_t n;
  const size_t* fat_source;
  size_t fat_source_len;
  const size_t* fat_target;
  size_t fat_target_len;
  size_t m_star;
  double epsilon;
  int unilateral; /* 0: split by m_star; KHET_LEFT or KHET_RIGHT: one-sided */
  int has_seed;
  uint64_t seed;
} khet_swarm_spec;

/* Opaque outcome of one run: JSON report, CSV tables, optional text. */
typedef struct khet_result khet_result;

KHET_API const char* khet_version(void);
KHET_API const char* khet_last_error(void);
KHET_API const char* khet_status_name(khet_status status);
KHET_API void khet_options_default(khet_options* options);

/* In-memory model evaluation. */
KHET_API khet_status khet_vector_field(const double* angles, size_t n, double* out);
KHET_API khet_status khet_order_parameter(const double* angles, size_t n, double* r,
                                          double* psi);
KHET_API khet_status khet_vertex_count(size_t n, uint64_t* count);

/* Runs. On success *out owns a result to release with khet_result_free. */
KHET_API khet_status khet_simulate(const double* angles, size_t n, double duration,
                                   const khet_options* options, khet_result** out);
/* fat_len == n requests the synchrony equilibrium. */
KHET_API khet_status khet_equilibrium(size_t n, const size_t* fat_set, size_t fat_len,
                                      int verify, khet_result** out);
KHET_API khet_status khet_linkage(const double alpha[3], khet_result** out);
KHET_API khet_status khet_trace_fractions(const double alpha[3], khet_symbol symbol,
                                          const khet_options* options, khet_result** out);
KHET_API khet_status khet_trace_sets(size_t n, const size_t* fat_source, size_t source_len,
                                     const size_t* fat_target, size_t target_len,
                                     khet_symbol symbol, const khet_options* options,
                                     khet_result** out);
KHET_API khet_status khet_concat(size_t n, const size_t* initial_fat, size_t fat_len,
                                 const char* symbols, const khet_options* options,
                                 khet_result** out);
KHET_API khet_status khet_swarm(const khet_swarm_spec* spec, const khet_options* options,
                                khet_result** out);
KHET_API khet_status khet_graph(size_t n, int adjacency_only, khet_graph_format format,
                                khet_result** out);

/* Result access. Returned strings stay valid until khet_result_free. */
KHET_API const char* khet_result_report(const khet_result* result);
KHET_API const char* khet_result_text(const khet_result* result);
KHET_API size_t khet_result_table_count(const khet_result* result);
KHET_API const char* khet_result_table_name(const khet_result* result, size_t index);
KHET_API size_t khet_result_table_rows(const khet_result* result, size_t index);
/* CSV text of table `index`; wrap != 0 maps angle columns to (-pi, pi]. */
KHET_API const char* khet_result_table_csv(khet_result* result, size_t index, int wrap);
KHET_API void khet_result_free(khet_result* result);

#ifdef __cplusplus
}
#endif

#endif /* KHET_H */
