/* incadapt — incremental adaptive control simulation library.
 *
 * C interface over the simulation core: opaque handles, integer status
 * codes, thread-local error messages. Handles are not thread-safe; one
 * handle belongs to one thread at a time. Distinct handles may be used
 * concurrently.
 */
#ifndef INCADAPT_H
#define INCADAPT_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef INCADAPT_BUILD
#    define INCADAPT_API __declspec(dllexport)
#  else
#    define INCADAPT_API __declspec(dllimport)
#  endif
#else
#  define INCADAPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct incadapt_scenario incadapt_scenario;
typedef struct incadapt_run incadapt_run;

/* Status values double as CLI exit codes. */
typedef enum incadapt_status {
    INCADAPT_OK = 0,
    INCADAPT_ERR_MONITOR = 1,    /* a convergence/boundedness monitor failed */
    INCADAPT_ERR_VALIDATION = 2, /* bad configuration or arguments */
    INCADAPT_ERR_IO = 3,
    INCADAPT_ERR_NUMERIC = 4,    /* non-finite quantity or internal fault */
    INCADAPT_ERR_INVALID_HANDLE = 5,
} incadapt_status;

INCADAPT_API const char* incadapt_version(void);

/* Message describing the most recent failure on this thread. */
INCADAPT_API const char* incadapt_last_error(void);

/* --- scenarios ------------------------------------------------------- */

INCADAPT_API incadapt_status incadapt_scenario_parse_file(const char* path,
                                                          incadapt_scenario** out);
INCADAPT_API incadapt_status incadapt_scenario_parse_text(const char* text,
                                                          incadapt_scenario** out);

/* assignment: "section.key=value", e.g. "adaptation.tau=0.05". Cross-field
 * validation is deferred to simulation/command time so related keys can be
 * overridden one assignment at a time. */
INCADAPT_API incadapt_status incadapt_scenario_override(incadapt_scenario* s,
                                                        const char* assignment);

/* Canonical serialization. Writes up to cap bytes (NUL-terminated when cap
 * > 0); *needed receives the full length excluding the terminator. */
INCADAPT_API incadapt_status incadapt_scenario_serialize(const incadapt_scenario* s, char* buf,
                                                         size_t cap, size_t* needed);

INCADAPT_API void incadapt_scenario_free(incadapt_scenario* s);

/* --- simulation ------------------------------------------------------ */

INCADAPT_API incadapt_status incadapt_simulate(const incadapt_scenario* s, incadapt_run** out);

INCADAPT_API size_t incadapt_run_record_count(const incadapt_run* r);

/* Column names follow the trajectory CSV schema: t, x1..xn, yd, e1..en, ef,
 * eps, iota, sigma, e_eps, u, w, th1..thp, V, L, winV, winTh, winU.
 * Copies min(cap, record count) values; *written receives the copy count. */
INCADAPT_API incadapt_status incadapt_run_column(const incadapt_run* r, const char* column,
                                                 double* out, size_t cap, size_t* written);

/* Scalar summary metrics: sup_abs_err, final_abs_err, settling_time,
 * sup_x_norm, final_window_V, sup_window_theta_energy, sup_window_u_energy,
 * L_margin_offset0, L_margin_half, sup_abs_vdot, final_e1, final_abs_ef. */
INCADAPT_API incadapt_status incadapt_run_metric(const incadapt_run* r, const char* name,
                                                 double* out);

/* 1 when every enabled monitor passed. */
INCADAPT_API int incadapt_run_passed(const incadapt_run* r);

INCADAPT_API incadapt_status incadapt_run_write_csv(const incadapt_run* r, const char* path);
INCADAPT_API incadapt_status incadapt_run_write_report(const incadapt_run* r, const char* path);

INCADAPT_API void incadapt_run_free(incadapt_run* r);

/* --- command drivers (what the CLI wraps) ----------------------------- */

INCADAPT_API incadapt_status incadapt_cmd_run(const incadapt_scenario* s, const char* out_dir);

/* grid_spec: "param=v1,v2,...[;param=...]" over gamma_prime, tau, kappa,
 * epsilon. jobs <= 0 means one worker. */
INCADAPT_API incadapt_status incadapt_cmd_sweep(const incadapt_scenario* base,
                                                const char* grid_spec, const char* out_dir,
                                                int jobs);

INCADAPT_API incadapt_status incadapt_cmd_compare(const incadapt_scenario* a,
                                                  const incadapt_scenario* b,
                                                  const char* out_dir);

/* family: exponential | rational_decay | bump_train | from_run:<run dir>. */
INCADAPT_API incadapt_status incadapt_cmd_verify_lemma(const char* family, const char* out_dir);

/* --- custom evaluators ------------------------------------------------ */

/* Fills out[0..dim-1] from (t, x[0..n-1]). Must be pure and reentrant. */
typedef void (*incadapt_regressor_fn)(double t, const double* x, size_t n, double* out,
                                      void* user);
typedef double (*incadapt_nonlinearity_fn)(double t, const double* x, size_t n, void* user);

/* bound < 0 registers an unbounded family. Re-registering a name replaces
 * the previous entry; registration must not race with running simulations. */
INCADAPT_API incadapt_status incadapt_register_regressor(const char* name, size_t dim,
                                                         double bound, incadapt_regressor_fn fn,
                                                         void* user);
INCADAPT_API incadapt_status incadapt_register_nonlinearity(const char* name, double bound,
                                                            incadapt_nonlinearity_fn fn,
                                                            void* user);

#ifdef __cplusplus
}
#endif

#endif /* INCADAPT_H */
