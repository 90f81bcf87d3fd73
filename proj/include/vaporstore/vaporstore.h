#ifndef VAPORSTORE_H
#define VAPORSTORE_H

/* C interface to the vapor image-storage simulator. All physical quantities
 * are SI: meters, seconds, m^2/s. Functions return VS_OK on success; on any
 * other status vs_last_error() carries a human-readable message for the
 * calling thread. Out-parameters are written only on success. */

#include <stddef.h>

#if defined(_WIN32)
#define VS_API __declspec(dllexport)
#elif defined(__GNUC__)
#define VS_API __attribute__((visibility("default")))
#else
#define VS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vs_status {
  VS_OK = 0,
  VS_ERR_DOMAIN = 1,      /* argument outside its physical or numeric domain */
  VS_ERR_SHAPE = 2,       /* array dimensions disagree */
  VS_ERR_CONFIG = 3,      /* bad run configuration */
  VS_ERR_FORMAT = 4,      /* malformed file content */
  VS_ERR_IO = 5,          /* filesystem failure */
  VS_ERR_NO_CONVERGE = 6, /* iterative solver hit its cap */
  VS_ERR_DEGENERATE = 7,  /* input valid but the quantity is undefined on it */
  VS_ERR_INVALID_ARG = 8, /* null pointer or out-of-range handle argument */
  VS_ERR_INTERNAL = 9
} vs_status;

typedef struct vs_field vs_field;   /* complex field on a square-pixel grid */
typedef struct vs_target vs_target; /* rasterized mask plus region labels */
typedef struct vs_config vs_config; /* full run configuration */

VS_API const char* vs_version(void);
VS_API const char* vs_last_error(void);

/* ---- fields ------------------------------------------------------------ */

/* Row-major arrays of nx*ny values; phase may be NULL for a real field. */
VS_API vs_status vs_field_from_intensity(const double* intensity, int nx, int ny, double pitch_m,
                                         const double* phase_or_null, vs_field** out);
VS_API void vs_field_destroy(vs_field*);
VS_API vs_status vs_field_dims(const vs_field*, int* nx, int* ny, double* pitch_m);
VS_API vs_status vs_field_timestamp(const vs_field*, double* seconds);
VS_API vs_status vs_field_intensity(const vs_field*, double* out /* nx*ny */);
VS_API vs_status vs_field_values(const vs_field*, double* re /* nx*ny */, double* im /* nx*ny */);
VS_API vs_status vs_field_dc(const vs_field*, double* re, double* im);

/* ---- targets ----------------------------------------------------------- */

VS_API vs_status vs_target_lines(int n_lines, double thickness_m, double spacing_m, double length_m,
                                 int nx, int ny, double pitch_m, vs_target** out);
VS_API vs_status vs_target_glyph(char glyph, double stroke_m, double height_m, int nx, int ny,
                                 double pitch_m, vs_target** out);
VS_API void vs_target_destroy(vs_target*);
VS_API vs_status vs_target_region_count(const vs_target*, int* count);
VS_API vs_status vs_target_labels(const vs_target*, int* out /* nx*ny */);
/* Field with per-region phases applied; NULL phases means all zero. */
VS_API vs_status vs_target_field(const vs_target*, const double* phases_or_null, size_t n_phases,
                                 vs_field** out);

/* ---- propagation ------------------------------------------------------- */

VS_API double vs_blur_sigma(double diffusion_m2_per_s, double tau_s);
VS_API vs_status vs_propagate(const vs_field*, double diffusion_m2_per_s, double decay_per_s,
                              double tau_s, vs_field** out);
/* Direct circular-convolution evaluation of the same operator (slow). */
VS_API vs_status vs_propagate_direct(const vs_field*, double diffusion_m2_per_s, double decay_per_s,
                                     double tau_s, vs_field** out);

/* ---- pulse sequence ---------------------------------------------------- */

VS_API vs_status vs_group_delay(double group_velocity_m_per_s, double cell_length_m, double* delay_s);
VS_API vs_status vs_stored_fraction(double sigma_probe_s, double t_peak_s,
                                    double group_velocity_m_per_s, double cell_length_m,
                                    double t_off_s, double* fraction);

/* ---- analysis ----------------------------------------------------------- */

/* Visibility between regions 1 and 2 of the target for each tau. */
VS_API vs_status vs_visibility_sweep(const vs_target*, const double* phases_or_null, size_t n_phases,
                                     double diffusion_m2_per_s, double decay_per_s,
                                     const double* taus_s, size_t n_taus, double* visibility_out);

typedef struct vs_fit_options {
  int fit_diffusion;       /* nonzero: diffusion coefficient is free */
  int fit_phase_error;     /* nonzero: phase offset on region 1 is free */
  double diffusion_lo;     /* m^2/s bounds, used when fit_diffusion */
  double diffusion_hi;
  double phase_error_lo;   /* rad bounds, used when fit_phase_error */
  double phase_error_hi;
} vs_fit_options;

typedef struct vs_fit_result {
  double diffusion;     /* m^2/s */
  double phase_error;   /* rad */
  double residual_norm;
  int iterations;
  int converged;
} vs_fit_result;

VS_API vs_status vs_fit(const vs_target*, const double* phases_or_null, size_t n_phases,
                        const double* taus_s, const double* visibility, size_t n_points,
                        double diffusion_m2_per_s, double decay_per_s, const vs_fit_options*,
                        vs_fit_result*);

/* ---- phase design -------------------------------------------------------- */

/* Two-colors the adjacency graph at 3*blur_sigma(tau) and refines. phases_out
 * holds one value per region. */
VS_API vs_status vs_design_phases(const vs_target*, double diffusion_m2_per_s, double decay_per_s,
                                  double tau_s, double* phases_out, double* objective_out,
                                  int* conflicts_out);

/* ---- configuration and runs --------------------------------------------- */

VS_API vs_status vs_config_default(vs_config** out);
VS_API vs_status vs_config_parse(const char* text, vs_config** out);
VS_API vs_status vs_config_set(vs_config*, const char* key, const char* value);
/* Returns a heap string; release it with vs_string_free. */
VS_API vs_status vs_config_serialize(const vs_config*, char** text);
VS_API void vs_string_free(char*);
VS_API void vs_config_destroy(vs_config*);

/* Verbs: simulate, sweep, fit, design, traces. */
VS_API vs_status vs_run(const vs_config*, const char* verb);

#ifdef __cplusplus
}
#endif

#endif /* VAPORSTORE_H */
