#ifndef RLADNET_H
#define RLADNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RLADNET_API __declspec(dllexport)
#else
#define RLADNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure rladnet_last_error()
   describes it until the next call on the same thread. */
typedef enum rladnet_status {
    RLADNET_OK = 0,
    RLADNET_E_INVALID_ARGUMENT = 1,
    RLADNET_E_DEGENERATE_GEOMETRY = 2,
    RLADNET_E_INVALID_STATE = 3,
    RLADNET_E_CONTRACT_VIOLATION = 4,
    RLADNET_E_PARSE = 5,
    RLADNET_E_IO = 6,
    RLADNET_E_INTERNAL = 7
} rladnet_status;

typedef enum rladnet_crop_mode { RLADNET_CROP_SPHERICAL = 0, RLADNET_CROP_SEED_PROXIMITY = 1 } rladnet_crop_mode;

typedef struct rladnet_cloud rladnet_cloud;
typedef struct rladnet_ae rladnet_ae;
typedef struct rladnet_policy rladnet_policy;
typedef struct rladnet_bank rladnet_bank;

typedef struct rladnet_metric_report {
    double cd_l2;
    double fscore;
    double precision;
    double recall;
    double tau;
} rladnet_metric_report;

#define RLADNET_GFV_DIM 128

RLADNET_API const char* rladnet_version(void);
RLADNET_API const char* rladnet_status_string(rladnet_status status);
RLADNET_API const char* rladnet_last_error(void);
/* Frees strings returned through char** out-parameters. */
RLADNET_API void rladnet_string_free(char* s);

/* Point clouds. xyz is a row-major n_points x 3 array. */
RLADNET_API rladnet_status rladnet_cloud_create(const double* xyz, size_t n_points, rladnet_cloud** out);
RLADNET_API rladnet_status rladnet_cloud_load(const char* path, rladnet_cloud** out);
/* format: "xyz", "pcf", or NULL to choose by extension. */
RLADNET_API rladnet_status rladnet_cloud_save(const rladnet_cloud* cloud, const char* path, const char* format);
RLADNET_API size_t rladnet_cloud_size(const rladnet_cloud* cloud);
RLADNET_API rladnet_status rladnet_cloud_points(const rladnet_cloud* cloud, double* xyz, size_t capacity_points);
RLADNET_API void rladnet_cloud_destroy(rladnet_cloud* cloud);

/* Geometry. */
RLADNET_API rladnet_status rladnet_chamfer_l2(const rladnet_cloud* a, const rladnet_cloud* b, double* out);
RLADNET_API rladnet_status rladnet_fscore(const rladnet_cloud* pred, const rladnet_cloud* gt, double tau_fraction,
                                          rladnet_metric_report* out);
RLADNET_API rladnet_status rladnet_crop(const rladnet_cloud* src, rladnet_crop_mode mode, double ratio,
                                        uint64_t seed, rladnet_cloud** partial, size_t* removed_count);
RLADNET_API rladnet_status rladnet_normalize(const rladnet_cloud* src, rladnet_cloud** out, double centroid[3],
                                             double* scale);
/* family: "box-frame", "winged-cross" or "multi-sphere". */
RLADNET_API rladnet_status rladnet_synthesize(const char* family, size_t points, uint64_t seed, rladnet_cloud** out);
RLADNET_API rladnet_status rladnet_surrogate_complete(const rladnet_cloud* partial, size_t target_size,
                                                      uint64_t seed, rladnet_cloud** out);

/* Autoencoder, policy and feature bank. */
RLADNET_API rladnet_status rladnet_ae_load(const char* dir, rladnet_ae** out);
RLADNET_API void rladnet_ae_destroy(rladnet_ae* ae);
RLADNET_API rladnet_status rladnet_ae_encode(const rladnet_ae* ae, const rladnet_cloud* cloud,
                                             float z[RLADNET_GFV_DIM]);
RLADNET_API rladnet_status rladnet_ae_decode(const rladnet_ae* ae, const float z[RLADNET_GFV_DIM],
                                             rladnet_cloud** out);
RLADNET_API rladnet_status rladnet_ae_decoder_checksum(const rladnet_ae* ae, uint64_t* out);

RLADNET_API rladnet_status rladnet_policy_load(const char* path, rladnet_policy** out);
RLADNET_API void rladnet_policy_destroy(rladnet_policy* policy);
RLADNET_API rladnet_status rladnet_policy_refine(const rladnet_policy* policy, const float z[RLADNET_GFV_DIM],
                                                 float z_out[RLADNET_GFV_DIM]);

RLADNET_API rladnet_status rladnet_bank_load(const char* path, rladnet_bank** out);
RLADNET_API void rladnet_bank_destroy(rladnet_bank* bank);
/* Geometric-consistency score in [0, 1] with the default selector settings,
   or those of the JSON config at config_path when non-NULL. */
RLADNET_API rladnet_status rladnet_quality_score(const rladnet_bank* bank, const rladnet_cloud* cloud,
                                                 const char* config_path, double* out);

/* Actor and single-critic parameter counts for the widths in config_path
   (defaults when NULL). */
RLADNET_API rladnet_status rladnet_param_counts(const char* config_path, size_t* actor, size_t* critic);

/* Command-level workflows. Each writes its artifacts under out_dir and
   returns a one-line summary in *summary (free with rladnet_string_free).
   config_path may be NULL; seed overrides the config's seed when has_seed. */
typedef struct rladnet_run_options {
    const char* config_path;
    const char* out_dir;
    uint64_t seed;
    int has_seed;
    int verbose;
} rladnet_run_options;

RLADNET_API rladnet_status rladnet_cmd_synth(const rladnet_run_options* opt, const char* family, size_t count,
                                             size_t points, char** summary);
/* complete_to: when > 0 also writes a surrogate completion of that size. */
RLADNET_API rladnet_status rladnet_cmd_crop(const rladnet_run_options* opt, const char* input, const char* mode,
                                            double ratio, size_t complete_to, char** summary);
RLADNET_API rladnet_status rladnet_cmd_ae_train(const rladnet_run_options* opt, const char* manifest,
                                                char** summary);
RLADNET_API rladnet_status rladnet_cmd_gfv_export(const rladnet_run_options* opt, const char* ae_dir,
                                                  const char* manifest, char** summary);
/* agent: "td3" or "ddpg" (NULL keeps the config's agent). With dry_run only
   the parameter counts are reported. */
RLADNET_API rladnet_status rladnet_cmd_rl_train(const rladnet_run_options* opt, const char* agent,
                                                const char* ae_dir, const char* gfv_file, long iterations,
                                                int dry_run, char** summary);
RLADNET_API rladnet_status rladnet_cmd_bank_build(const rladnet_run_options* opt, const char* manifest,
                                                  const char* category, char** summary);
RLADNET_API rladnet_status rladnet_cmd_refine(const rladnet_run_options* opt, const char* ae_dir,
                                              const char* policy, const char* input, const char* bank,
                                              const char* gt, char** summary);
RLADNET_API rladnet_status rladnet_cmd_evaluate(const rladnet_run_options* opt, const char* pred, const char* gt,
                                                double tau_fraction, char** summary);
RLADNET_API rladnet_status rladnet_cmd_pipeline(const rladnet_run_options* opt, char** summary);

#ifdef __cplusplus
}
#endif

#endif
