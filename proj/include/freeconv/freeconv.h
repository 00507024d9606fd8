#ifndef FREECONV_FREECONV_H
#define FREECONV_FREECONV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(FREECONV_BUILDING)
#define FC_API __attribute__((visibility("default")))
#else
#define FC_API
#endif

typedef struct fc_measure fc_measure;
typedef struct fc_grid fc_grid;
typedef struct fc_support fc_support;

typedef enum {
    FC_OK = 0,
    FC_INVALID_INPUT = 1,
    FC_NUMERICAL_FAILURE = 2,
    FC_DOMAIN_ERROR = 3,
    FC_INTERNAL_ERROR = 4
} fc_status;

typedef enum { FC_PATH_SEMIGROUP = 0, FC_PATH_PAIR = 1 } fc_path;

typedef enum { FC_POINT_OK = 0, FC_POINT_DIVERGENT = 1, FC_POINT_ATOM = 2, FC_POINT_LADDER_FAILED = 3 } fc_point_flag;

typedef struct {
    double re;
    double im;
} fc_complex;

typedef struct {
    double window_lo;
    double window_hi;
    int has_window; /* 0: derive the window from the inputs */
    int n_points;
    int threads;
} fc_grid_options;

typedef struct {
    double E;
    double rho;
    double im_omega_alpha; /* pair only */
    double im_omega;       /* omega_beta for pairs, omega_t for the semigroup */
    double boundary_error;
    fc_point_flag flag;
} fc_grid_point;

typedef struct {
    int matrix_size;
    int trials;
    uint64_t seed;
    int orthogonal; /* 0: complex Haar unitary, 1: real Haar orthogonal */
    int threads;
} fc_rmt_config;

/* Library version string, e.g. "0.3.0". */
FC_API const char* fc_version(void);
/* Message of the last failed call on this thread; empty if none. */
FC_API const char* fc_last_error(void);
/* Releases strings returned through char** out-parameters. */
FC_API void fc_string_free(char* s);
/* JSON object with the solver tolerances and quadrature settings in use. */
FC_API fc_status fc_numerics_json(char** out);

FC_API fc_status fc_measure_from_json(const char* json, fc_path path, int allow_atomic, fc_measure** out);
FC_API fc_status fc_measure_load(const char* file, fc_path path, int allow_atomic, fc_measure** out);
FC_API fc_status fc_measure_to_json(const fc_measure* mu, char** out);
FC_API void fc_measure_free(fc_measure* mu);
FC_API fc_status fc_measure_moment(const fc_measure* mu, int k, double* out);
FC_API fc_status fc_measure_quantile(const fc_measure* mu, double p, double* out);
FC_API fc_status fc_measure_counts(const fc_measure* mu, int* n_ac, int* n_pp, int* n_pp_out);

FC_API fc_status fc_cauchy(const fc_measure* mu, fc_complex z, fc_complex* m);
FC_API fc_status fc_F(const fc_measure* mu, fc_complex z, fc_complex* f);
/* Writes up to `cap` values; *count receives the total number. */
FC_API fc_status fc_gap_zeros(const fc_measure* mu, double* out, size_t cap, size_t* count);
FC_API fc_status fc_semigroup_edges(const fc_measure* mu, double t, double* edges, size_t cap, size_t* count);

FC_API fc_status fc_semigroup_solve(const fc_measure* mu, double t, fc_complex z, fc_complex* omega,
                                    double* residual);
FC_API fc_status fc_pair_solve(const fc_measure* alpha, const fc_measure* beta, fc_complex z,
                               fc_complex* omega_alpha, fc_complex* omega_beta, double* residual);

FC_API void fc_grid_options_default(fc_grid_options* options);
/* Grids keep their own copies of the input measures. */
FC_API fc_status fc_convolve_grid(const fc_measure* alpha, const fc_measure* beta, const fc_grid_options* options,
                                  fc_grid** out);
FC_API fc_status fc_semigroup_grid(const fc_measure* mu, double t, const fc_grid_options* options, fc_grid** out);
FC_API size_t fc_grid_size(const fc_grid* grid);
FC_API fc_status fc_grid_point_at(const fc_grid* grid, size_t i, fc_grid_point* out);
FC_API fc_status fc_grid_write_csv(const fc_grid* grid, const char* path);
FC_API fc_status fc_grid_summary_json(const fc_grid* grid, char** out);
FC_API void fc_grid_free(fc_grid* grid);

FC_API fc_status fc_support_detect(const fc_grid* grid, fc_support** out);
FC_API fc_status fc_support_counts(const fc_support* support, int* I, int* C0, int* Cinf);
FC_API fc_status fc_support_to_json(const fc_support* support, char** out);
FC_API void fc_support_free(fc_support* support);

/* theorem: NULL or "" for automatic selection, or "1.3" / "1.4" for pairs. */
FC_API fc_status fc_bounds_check(const fc_grid* grid, const fc_support* support, const char* theorem, char** json,
                                 int* all_pass);

FC_API void fc_rmt_config_default(fc_rmt_config* cfg);
/* Pair grids only; support may be NULL. */
FC_API fc_status fc_rmt_validate(const fc_grid* grid, const fc_support* support, const fc_rmt_config* cfg,
                                 char** json);

#ifdef __cplusplus
}
#endif

#endif
