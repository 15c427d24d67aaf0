/* C interface for the hyperrc hypergraph ratio-cut library.
 *
 * All functions return hrc_status; results and diagnostics are returned as
 * heap-allocated UTF-8 strings (JSON documents) that the caller must release
 * with hrc_string_free. Hypergraph handles are opaque and must be released
 * with hrc_hypergraph_free.
 */
#ifndef HYPERRC_H
#define HYPERRC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hrc_status {
  HRC_OK = 0,
  HRC_ERROR_USAGE = 1,      /* invalid arguments / null pointers */
  HRC_ERROR_PARSE = 2,      /* malformed hypergraph file or JSON payload */
  HRC_ERROR_DEGENERATE = 3, /* domain errors: degenerate cuts, invalid seeds */
  HRC_ERROR_UNSUPPORTED = 4,/* exhaustive-enumeration caps exceeded */
  HRC_ERROR_INTERNAL = 5
} hrc_status;

typedef struct hrc_hypergraph hrc_hypergraph;

const char* hrc_version(void);

/* Parse the hypergraph text format (hMETIS extension; see README). On error,
 * *err_msg (when non-NULL) receives a message to free with hrc_string_free. */
hrc_status hrc_hypergraph_load_file(const char* path, hrc_hypergraph** out, char** err_msg);
hrc_status hrc_hypergraph_load_string(const char* text, hrc_hypergraph** out, char** err_msg);
void hrc_hypergraph_free(hrc_hypergraph* g);

int64_t hrc_hypergraph_num_vertices(const hrc_hypergraph* g);
int64_t hrc_hypergraph_num_edges(const hrc_hypergraph* g);
int64_t hrc_hypergraph_sparsity(const hrc_hypergraph* g);
int64_t hrc_hypergraph_total_measure(const hrc_hypergraph* g);

/* config_json: JSON object with optional keys eps, rng_seed, max_rounds,
 * c_const, r_const, jl_delta, verify_level ("none"|"sampled"|"exhaustive").
 * NULL or "" keeps defaults. HPRC_RNG_SEED overrides the seed. */

/* Approximate minimum ratio-cut with a lower-bound certificate. */
hrc_status hrc_partition(const hrc_hypergraph* g, const char* config_json,
                         char** result_json, char** err_msg);

/* Ratio-cut improvement from a seed cut (vertex ids). */
hrc_status hrc_improve(const hrc_hypergraph* g, const int32_t* seed_cut, size_t seed_len,
                       const char* config_json, char** result_json, char** err_msg);

/* Re-check a certificate produced by hrc_partition. *valid is set when the
 * call succeeds. */
hrc_status hrc_verify(const hrc_hypergraph* g, const char* certificate_json,
                      const char* config_json, char** result_json, int* valid,
                      char** err_msg);

/* Lovasz/ratio evaluation plus sweep rounding of a vertex vector. */
hrc_status hrc_eval_vector(const hrc_hypergraph* g, const double* x, size_t len,
                           char** result_json, char** err_msg);

/* Feasibility report for an l2^2-metric solution (JSON with `vectors` and
 * `lengths`). *feasible is set when the call succeeds. */
hrc_status hrc_check_metric(const hrc_hypergraph* g, const char* solution_json,
                            char** result_json, int* feasible, char** err_msg);

void hrc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* HYPERRC_H */
