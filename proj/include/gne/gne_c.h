/*
 * C interface to the Gestalt Nash equilibrium solver.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible function returns a gne_status; on failure a description of the
 * last error on the calling thread is available from gne_last_error().
 * Strings returned through char** out-parameters are owned by the caller and
 * released with gne_string_free().
 *
 * Matrices are dense, row-major, N*N doubles. Agent indices are 0-based.
 */
#ifndef GNE_C_H
#define GNE_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GNE_BUILDING_LIBRARY)
#    define GNE_API __declspec(dllexport)
#  else
#    define GNE_API __declspec(dllimport)
#  endif
#else
#  define GNE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gne_status {
  GNE_OK = 0,
  GNE_ERR_INVALID_ARGUMENT = 1,
  GNE_ERR_INVALID_GAME = 2,
  GNE_ERR_CONFIG = 3,
  GNE_ERR_IO = 4,
  GNE_ERR_SINGULAR = 5,
  GNE_ERR_CALIBRATION = 6,
  GNE_ERR_DOMAIN = 7,
  GNE_ERR_INTERNAL = 99
} gne_status;

typedef enum gne_br_method {
  GNE_BR_DIRECT = 0,
  GNE_BR_GAUSS_SEIDEL = 1,
  GNE_BR_JACOBI = 2
} gne_br_method;

/* Process exit codes of a configured run. */
typedef enum gne_run_status {
  GNE_RUN_OK = 0,
  GNE_RUN_NOT_CONVERGED = 2,
  GNE_RUN_VERIFICATION_FAILED = 3
} gne_run_status;

typedef struct gne_game gne_game;
typedef struct gne_outcome gne_outcome;
typedef struct gne_config gne_config;
typedef struct gne_run gne_run;

GNE_API const char* gne_version(void);
GNE_API const char* gne_last_error(void);
GNE_API const char* gne_status_name(gne_status status);
GNE_API void gne_string_free(char* s);

/* ---- games ------------------------------------------------------------ */

GNE_API gne_status gne_game_create(size_t n, const double* influence, const double* returns,
                                   const double* budgets, gne_game** out);
GNE_API void gne_game_destroy(gne_game* game);
GNE_API size_t gne_game_size(const gne_game* game);

/* GNE_OK when the game satisfies every modelling assumption, otherwise
 * GNE_ERR_INVALID_GAME with one violation per line in *report (may be NULL). */
GNE_API gne_status gne_game_validate(const gne_game* game, char** report);

GNE_API gne_status gne_true_cost(const gne_game* game, size_t agent, const double* u, double* out);
GNE_API gne_status gne_perceived_cost(const gne_game* game, size_t agent, const double* u,
                                      const double* attention, double* out);
GNE_API gne_status gne_rbp(const gne_game* game, size_t agent, const double* u, const double* attention,
                           double* out);

GNE_API gne_status gne_rational_ne(const gne_game* game, double* u_out);
/* Investment equilibrium for a fixed N*N attention matrix. */
GNE_API gne_status gne_brne(const gne_game* game, const double* attention, gne_br_method method,
                            double* u_out);

GNE_API gne_status gne_homogeneous_closed_form(double r1, double r2, double r, int n, double beta,
                                               double* m_out, double* u_out);

/* ---- equilibrium solve ------------------------------------------------ */

typedef struct gne_solve_options {
  double outer_tol;
  int max_rounds;
  gne_br_method br_method;
  double apg_tol;
  int apg_max_iters;
  unsigned threads; /* 0: hardware concurrency */
} gne_solve_options;

GNE_API void gne_solve_options_default(gne_solve_options* opts);
/* opts may be NULL for defaults. */
GNE_API gne_status gne_solve(const gne_game* game, const gne_solve_options* opts, gne_outcome** out);
GNE_API void gne_outcome_destroy(gne_outcome* outcome);
GNE_API int gne_outcome_converged(const gne_outcome* outcome);
GNE_API int gne_outcome_rounds(const gne_outcome* outcome);
/* Copy out arrays; len must equal N (u, alphas, rbp) or N*N (attention). */
GNE_API gne_status gne_outcome_u(const gne_outcome* outcome, double* out, size_t len);
GNE_API gne_status gne_outcome_attention(const gne_outcome* outcome, double* out, size_t len);
GNE_API gne_status gne_outcome_alphas(const gne_outcome* outcome, double* out, size_t len);
GNE_API gne_status gne_outcome_rbp(const gne_outcome* outcome, double* out, size_t len);
GNE_API gne_status gne_verify(const gne_game* game, const gne_outcome* outcome, int n_probes, uint64_t seed,
                              int* passed);

/* ---- configured runs -------------------------------------------------- */

GNE_API gne_status gne_config_load_file(const char* path, gne_config** out);
GNE_API gne_status gne_config_parse(const char* json, gne_config** out);
GNE_API gne_status gne_config_builtin(const char* name, gne_config** out);
/* Name of built-in scenario `index`, NULL past the end. */
GNE_API const char* gne_builtin_name(size_t index);
GNE_API void gne_config_destroy(gne_config* config);
GNE_API gne_status gne_config_set_seed(gne_config* config, uint64_t seed);
GNE_API gne_status gne_config_to_json(const gne_config* config, char** out);
/* Builds the configured game and validates it; see gne_game_validate. */
GNE_API gne_status gne_config_validate(const gne_config* config, char** report);

GNE_API gne_status gne_run_create(const gne_config* config, unsigned threads, gne_run** out);
GNE_API void gne_run_destroy(gne_run* run);
GNE_API gne_run_status gne_run_get_status(const gne_run* run);
GNE_API double gne_run_wall_time(const gne_run* run);
/* format: "json" or "csv". */
GNE_API gne_status gne_run_summary(const gne_run* run, const char* format, char** out);
GNE_API gne_status gne_run_write(const gne_run* run, const char* dir, int with_trace);

#ifdef __cplusplus
}
#endif

#endif /* GNE_C_H */
