/* C API for the fracsheet library: anisotropic fractional / multifractional
 * Brownian sheet simulation, epsilon-averaging smoothing, two-parameter
 * Besov-type norms, appendix bound checks and the convergence experiment.
 *
 * All functions return FS_OK on success; on failure they return an error
 * code and leave a message retrievable with fs_last_error() (thread-local).
 * Objects are opaque handles released with the matching _destroy call.
 */
#ifndef FRACSHEET_H
#define FRACSHEET_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
    FS_OK = 0,
    FS_ERR_INVALID_ARGUMENT = 1,
    FS_ERR_CONFIG = 2,
    FS_ERR_NUMERICAL = 3,
    FS_ERR_IO = 4,
    FS_ERR_INTERNAL = 5
} fs_status;

typedef struct fs_grid fs_grid;
typedef struct fs_field fs_field;

/* Last error message of the calling thread; valid until the next failing
 * call on the same thread. Never NULL. */
const char* fs_last_error(void);
const char* fs_status_name(fs_status status);
const char* fs_version(void);

/* ---- grids ---- */

fs_status fs_grid_create(double T1, double T2, int n1, int n2, int pad1, int pad2,
                         fs_grid** out);
void fs_grid_destroy(fs_grid* grid);
int fs_grid_rows(const fs_grid* grid); /* nodes along axis 1, padding included */
int fs_grid_cols(const fs_grid* grid);
double fs_grid_mesh1(const fs_grid* grid);
double fs_grid_mesh2(const fs_grid* grid);

/* ---- fields ---- */

void fs_field_destroy(fs_field* field);
int fs_field_rows(const fs_field* field);
int fs_field_cols(const fs_field* field);
fs_status fs_field_value(const fs_field* field, int i, int j, double* out);

/* Exact fractional Brownian sheet sample (Kronecker-Cholesky). */
fs_status fs_sample_fbs(const fs_grid* grid, double H1, double H2, uint64_t seed,
                        uint64_t stream, fs_field** out);

/* Multifractional Brownian sheet with a named Hurst preset
 * ("constant" uses H1,H2; "bilinear" ignores them). */
fs_status fs_sample_mbs(const fs_grid* grid, const char* hurst_preset, double H1, double H2,
                        double mu, double nu, uint64_t seed, uint64_t stream, fs_field** out);

/* Deterministic test field t1*t2 on the grid. */
fs_status fs_field_bilinear(const fs_grid* grid, fs_field** out);

/* Sliding-window average over k cells per axis; output drops the padding. */
fs_status fs_smooth(const fs_field* field, int k, fs_field** out);

/* Pointwise b - a on the common region. */
fs_status fs_field_difference(const fs_field* a, const fs_field* b, fs_field** out);

/* Reinterprets the trailing pad1/pad2 cells of each axis as padding. */
fs_status fs_field_assume_padding(const fs_field* field, int pad1, int pad2, fs_field** out);

/* CSV schema: header x,y,value; row-major by x then y. */
fs_status fs_field_write_csv(const fs_field* field, const char* path);
fs_status fs_field_read_csv(const char* path, fs_field** out);

/* ---- Besov-type norms ---- */

typedef struct fs_norm_report {
    double value;
    double terms[4];
    double s1, s2, t1, t2; /* argmax pair coordinates */
} fs_norm_report;

/* stride: 0 = auto, 1 = exhaustive pair search, >1 = two-stage. */
fs_status fs_w0_norm(const fs_field* field, double beta1, double beta2, int stride,
                     fs_norm_report* out);
fs_status fs_w1_norm(const fs_field* field, double beta1, double beta2, int stride,
                     fs_norm_report* out);

/* ---- lemma checks ---- */

typedef struct fs_lemma_summary {
    double max_ratio;
    double refined_max_ratio;
    double stability;
    int tuple_count;
    int both_zero_count;
    int pass;
} fs_lemma_summary;

/* lemma_id: fbm1|fbm2|fbm3|fbs|mbs|int. config_path may be NULL for the
 * default lattice; recognised keys: t_values, h_values (space-separated),
 * mu, nu, truncation, nodes_per_unit, seed, tuples, min_gap.
 * out_csv may be NULL to skip the per-tuple CSV. */
fs_status fs_lemma_check(const char* lemma_id, const char* config_path, const char* out_csv,
                         fs_lemma_summary* out);

/* ---- convergence experiment ---- */

typedef struct fs_converge_summary {
    double slope;
    double ref_slope;
    double a_threshold;
    int levels;
    int replicas;
    int slope_pass;
    int medians_decreasing;
    int exceedance_monotone;
} fs_converge_summary;

/* Runs the experiment described by the key=value config file and writes
 * report.csv + summary.csv into the config's `out` directory (overridden
 * by out_dir when non-NULL). */
fs_status fs_converge_run(const char* config_path, const char* out_dir,
                          fs_converge_summary* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRACSHEET_H */
