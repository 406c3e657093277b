/* C API of the tenad shared library: opaque handles, integer status codes,
 * JSON summaries as heap strings released with tenad_string_free. Every
 * call that can fail returns a tenad_status; the message for the most
 * recent failure on the calling thread is available from
 * tenad_last_error. */

#ifndef TENAD_TENAD_H
#define TENAD_TENAD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tenad_status {
    TENAD_OK = 0,
    TENAD_ERR_INVALID_ARGUMENT = 1,
    TENAD_ERR_IO = 2,
    TENAD_ERR_MODEL_UNAVAILABLE = 3,
    TENAD_ERR_PARTIAL_FAILURE = 4,
    TENAD_ERR_INTERNAL = 5
} tenad_status;

typedef struct tenad_tensor tenad_tensor;
typedef struct tenad_model tenad_model;

const char* tenad_version(void);

/* Message of the last failed call on this thread; never NULL. */
const char* tenad_last_error(void);

void tenad_string_free(char* s);

/* --- tensors (TEN4 container) ------------------------------------- */

tenad_status tenad_tensor_load(const char* path, tenad_tensor** out);
tenad_status tenad_tensor_save(const tenad_tensor* t, const char* path);
tenad_status tenad_tensor_dims(const tenad_tensor* t, uint32_t dims[4]);
tenad_status tenad_tensor_data(const tenad_tensor* t, const double** data,
                               uint64_t* length);
void tenad_tensor_free(tenad_tensor* t);

/* --- models -------------------------------------------------------- */

/* spec: "linear[:k=v,...]", "centroid[:k=v,...]", or
 * "subprocess:<command line>"; see the library documentation for the
 * option keys. dims gives the expected input extents (W,H,C,T). */
tenad_status tenad_model_open(const char* spec, const uint32_t dims[4],
                              tenad_model** out);
tenad_status tenad_model_predict(tenad_model* m, const tenad_tensor* x,
                                 int32_t* label);
uint64_t tenad_model_query_count(const tenad_model* m);
void tenad_model_free(tenad_model* m);

/* --- operations ----------------------------------------------------
 * Each returns a JSON summary through *summary_json (caller frees). */

/* Runs one attack. config_path may be NULL for defaults; seed_override
 * < 0 keeps the configured seed. Writes result.json and adversarial.ten4
 * under out_dir when out_dir is non-NULL. */
tenad_status tenad_attack_run(tenad_model* model, const tenad_tensor* x,
                              const char* config_path, int64_t seed_override,
                              const char* out_dir, char** summary_json);

/* Runs a full experiment from a config file. out_dir_override may be
 * NULL to use the config's `out` entry. Returns TENAD_ERR_PARTIAL_FAILURE
 * if some samples errored, TENAD_ERR_MODEL_UNAVAILABLE if every sample
 * failed on the model. */
tenad_status tenad_bench_run(const char* config_path,
                             const char* out_dir_override,
                             char** summary_json);

/* Recomputes every report from the artifacts of an earlier bench run. */
tenad_status tenad_metrics_recompute(const char* experiment_dir,
                                     char** summary_json);

/* Higher-order SVD. ranks is NULL for the full decomposition or four
 * positive truncation ranks. When out_dir is non-NULL, writes the core
 * tensor (core.ten4) and the factor matrices (factor_modeN.csv). The
 * summary carries the per-mode singular spectra. */
tenad_status tenad_hosvd_run(const tenad_tensor* x, const int32_t* ranks,
                             const char* out_dir, char** summary_json);

/* Multilinear rank at a relative singular-value tolerance. */
tenad_status tenad_multilinear_rank(const tenad_tensor* x, double tol,
                                    int32_t rank[4]);

/* Writes `count` synthetic samples (sample_NNNN.ten4) plus manifest.json
 * under out_dir. kind: "smooth" | "gaussian" | "rank-k". */
tenad_status tenad_generate_dataset(const char* kind, const uint32_t dims[4],
                                    uint32_t count, int32_t rank,
                                    uint64_t seed, const char* out_dir,
                                    char** summary_json);

/* Adds magnitude * (all-ones rank-one tensor); the summary reports the
 * perturbation's multilinear rank and MAP. Writes the perturbed tensor
 * to out_path when non-NULL. */
tenad_status tenad_demo_rank1(const tenad_tensor* x, double magnitude,
                              const char* out_path, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* TENAD_TENAD_H */
