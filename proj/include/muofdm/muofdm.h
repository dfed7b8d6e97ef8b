/* C interface for the multi-user OFDM-DCSK resource-allocation library.
 *
 * Every function returns a muofdm_status; results travel through out
 * parameters.  All pointers must be non-NULL unless documented otherwise.
 * The library never prints and never aborts; invalid inputs surface as
 * status codes.
 */
#ifndef MUOFDM_H
#define MUOFDM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define MUOFDM_API __declspec(dllexport)
#else
#  define MUOFDM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum muofdm_status {
    MUOFDM_OK = 0,
    MUOFDM_ERR_INVALID_ARGUMENT = 1, /* malformed inputs, NULL pointers */
    MUOFDM_ERR_VALIDATION = 2,       /* structured parameter violations */
    MUOFDM_ERR_NO_CONVERGENCE = 3,   /* iterative solver hit its budget */
    MUOFDM_ERR_DEGENERATE = 4        /* chaotic sequence collapsed */
} muofdm_status;

/* System-wide constants: m sub-carriers per user (n of them references),
 * spreading factor beta, p users, noise density n0, energy per bit eb. */
typedef struct muofdm_params {
    int32_t m;
    int32_t beta;
    int32_t p;
    double n0;
    double eb;
} muofdm_params;

/* One allocation decision: n reference sub-carriers, data power a,
 * reference power b (a = b = 1 models the equal-power system). */
typedef struct muofdm_alloc {
    int32_t n;
    double a;
    double b;
} muofdm_alloc;

typedef struct muofdm_ber_estimate {
    uint64_t bits;
    uint64_t errors;
    double ber;
    double ci_low;
    double ci_high;
} muofdm_ber_estimate;

typedef struct muofdm_solve_options {
    double epsilon;       /* |V| convergence threshold, > 0 */
    double q_hi_init;     /* first upper bracket guess, > 0 */
    int32_t max_doublings;
    int32_t max_bisections;
    int32_t inner;        /* 0: numeric maximizer, 1: closed-form updates */
} muofdm_solve_options;

typedef struct muofdm_dinkelbach_result {
    double q_star;
    muofdm_alloc alloc_star;
    double u_star;
    double v_residual;
    int32_t bracket_iterations;
    int32_t bisection_iterations;
    int32_t converged; /* 1 when |V(q_star)| < epsilon */
    int32_t kkt_fallbacks;
} muofdm_dinkelbach_result;

typedef struct muofdm_sim_options {
    uint64_t seed;
    int32_t shards;     /* worker threads; 0 picks hardware concurrency */
    int32_t map;        /* 0: second-order Chebyshev, 1: logistic */
    double confidence;  /* Wilson interval level in (0, 1) */
} muofdm_sim_options;

/* Stable name for a status code (e.g. "MUOFDM_OK"). */
MUOFDM_API const char* muofdm_status_name(muofdm_status status);

/* Semantic version of the library, e.g. "1.0.0". */
MUOFDM_API const char* muofdm_version(void);

/* Per-bit energy for an Eb/N0 given in dB: eb = n0 * 10^(db/10).  Fails on
 * non-finite input or non-positive n0. */
MUOFDM_API muofdm_status muofdm_ebn0_db_to_linear(double db, double n0, double* out);

/* Validates params and optionally an allocation against an optional total
 * power budget (pass NULL to skip either).  Returns MUOFDM_OK when clean;
 * otherwise MUOFDM_ERR_VALIDATION with the number of violations in
 * *violation_count (may be NULL) and the first messages joined with '\n'
 * into msg_buf (may be NULL; always NUL-terminated when given). */
MUOFDM_API muofdm_status muofdm_validate(const muofdm_params* params,
                                         const muofdm_alloc* alloc,
                                         const double* budget,
                                         char* msg_buf, size_t msg_buf_len,
                                         int32_t* violation_count);

/* Equal-power inverse squared SNR at reference count n. */
MUOFDM_API muofdm_status muofdm_objective_sa(const muofdm_params* params, int32_t n,
                                             double* out);

/* Equal-power BER: 0.5 * erfc(objective^(-1/2)). */
MUOFDM_API muofdm_status muofdm_ber_sa(const muofdm_params* params, int32_t n,
                                       double* out);

/* Numerator and denominator of the power-allocated SNR-like ratio U. */
MUOFDM_API muofdm_status muofdm_ratio_parts(const muofdm_params* params,
                                            const muofdm_alloc* alloc,
                                            double* numerator, double* denominator);

/* U itself. */
MUOFDM_API muofdm_status muofdm_ratio_u(const muofdm_params* params,
                                        const muofdm_alloc* alloc, double* out);

/* Power-allocated BER: 0.5 * erfc(sqrt(U)). */
MUOFDM_API muofdm_status muofdm_ber_psa(const muofdm_params* params,
                                        const muofdm_alloc* alloc, double* out);

/* V(q) = numerator - q * denominator. */
MUOFDM_API muofdm_status muofdm_dinkelbach_v(const muofdm_params* params,
                                             const muofdm_alloc* alloc, double q,
                                             double* out);

/* Stationarity cubic coefficients, highest degree first:
 * out[0]*n^3 + out[1]*n^2 + out[2]*n + out[3] = 0. */
MUOFDM_API muofdm_status muofdm_cubic_coeffs(const muofdm_params* params,
                                             double out[4]);

/* Depressed form of the stationarity cubic: x^3 + zeta*x + xi = 0 with
 * n = x + shift and discriminant delta = zeta^3/27 + xi^2/4. */
MUOFDM_API muofdm_status muofdm_depressed_cubic(const muofdm_params* params,
                                                double* zeta, double* xi,
                                                double* delta, double* shift);

/* Integer minimizer of the equal-power objective via the cubic's real roots
 * (closed form) or an exhaustive scan (brute force). */
MUOFDM_API muofdm_status muofdm_optimal_n_closed_form(const muofdm_params* params,
                                                      int32_t* out);
MUOFDM_API muofdm_status muofdm_optimal_n_bruteforce(const muofdm_params* params,
                                                     int32_t* out);

/* Joint allocation: maximizes U subject to (m-n)a + nb <= budget with the
 * ratio-subtraction bisection.  options may be NULL for defaults
 * (epsilon 1e-9, q_hi_init 1, 128 doublings, 200 bisections, numeric inner).
 * A solver that exhausts its iteration budget reports
 * MUOFDM_ERR_NO_CONVERGENCE and still fills *out with the best iterate. */
MUOFDM_API muofdm_status muofdm_dinkelbach_solve(const muofdm_params* params,
                                                 double budget,
                                                 const muofdm_solve_options* options,
                                                 muofdm_dinkelbach_result* out);

/* Independent check: exhaustive feasible scan of U over a log-spaced grid
 * of (a, b) pairs crossed with every n. */
MUOFDM_API muofdm_status muofdm_grid_oracle(const muofdm_params* params,
                                            double budget, int32_t a_points,
                                            int32_t b_points, double min_frac,
                                            muofdm_alloc* out_alloc, double* out_u);

/* Monte Carlo link simulator.  A handle accumulates frames across run
 * calls; the estimate after k calls equals one run with the summed frame
 * count, regardless of sharding. */
typedef struct muofdm_sim muofdm_sim;

/* options may be NULL for defaults (seed 1, shards 0, Chebyshev map,
 * confidence 0.99). */
MUOFDM_API muofdm_status muofdm_sim_create(const muofdm_params* params,
                                           const muofdm_alloc* alloc,
                                           const muofdm_sim_options* options,
                                           muofdm_sim** out);
MUOFDM_API muofdm_status muofdm_sim_run(muofdm_sim* sim, uint64_t frames,
                                        muofdm_ber_estimate* out);
MUOFDM_API void muofdm_sim_destroy(muofdm_sim* sim);

/* Deterministic report quantifying the internal inconsistencies among the
 * transcribed closed-form expressions.  *out receives a heap string owned
 * by the caller; release it with muofdm_string_free. */
MUOFDM_API muofdm_status muofdm_errata_report(char** out);
MUOFDM_API void muofdm_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MUOFDM_H */
