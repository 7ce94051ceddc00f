/*
 * C interface to the netduo engine: duopoly price competition with two
 * consumer groups linked by a 2x2 network-effects matrix.
 *
 * Every function returns a netduo_status. On failure, netduo_last_error()
 * gives a thread-local message describing the error; a successful call
 * clears it. Strings returned through `char** out` are owned by the
 * caller and released with netduo_string_free().
 */
#ifndef NETDUO_NETDUO_H
#define NETDUO_NETDUO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NETDUO_API __declspec(dllexport)
#else
#define NETDUO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netduo_status {
    NETDUO_OK = 0,
    NETDUO_E_INVALID_ARGUMENT = 1,
    NETDUO_E_DEGENERATE_MATRIX = 2,
    NETDUO_E_NOT_APPLICABLE = 3,
    NETDUO_E_NO_HOTELLING_SELECTION = 4,
    NETDUO_E_CLASS_ABSENT = 5,
    NETDUO_E_OUT_OF_DOMAIN = 6,
    NETDUO_E_UNBOUNDED = 7,
    NETDUO_E_SAMPLING_EXHAUSTED = 8,
    NETDUO_E_IO = 9,
    NETDUO_E_INTERNAL = 10,
    NETDUO_STATUS_MAX_ENUM = 0x7FFFFFFF
} netduo_status;

typedef enum netduo_lambda_variant {
    NETDUO_LAMBDA_PAPER_TIGHT = 0,
    NETDUO_LAMBDA_SIMPLE = 1,
    NETDUO_LAMBDA_LITERAL = 2,
    NETDUO_LAMBDA_MAX_ENUM = 0x7FFFFFFF
} netduo_lambda_variant;

/* Equilibrium class tags, in the order families are reported. The MAX_ENUM
 * entries only pin the enums to int width. */
typedef enum netduo_class {
    NETDUO_C00 = 0,
    NETDUO_C01 = 1,
    NETDUO_C10 = 2,
    NETDUO_C11 = 3,
    NETDUO_S0 = 4,
    NETDUO_S1 = 5,
    NETDUO_ZS = 6,
    NETDUO_OS = 7,
    NETDUO_SS = 8,
    NETDUO_CLASS_MAX_ENUM = 0x7FFFFFFF
} netduo_class;

typedef enum netduo_constraint {
    NETDUO_CONSTRAINT_NONE = 0,
    NETDUO_CONSTRAINT_KAPPA_SUM_NEG = 1,
    NETDUO_CONSTRAINT_EXISTENCE_OK = 2,
    NETDUO_CONSTRAINT_POS_DET_NEG_SUM = 4,
    NETDUO_CONSTRAINT_MAX_ENUM = 0x7FFFFFFF
} netduo_constraint;

/* A validated interaction matrix (opaque). */
typedef struct netduo_game netduo_game;

NETDUO_API const char* netduo_last_error(void);
NETDUO_API const char* netduo_status_name(netduo_status status);
NETDUO_API const char* netduo_version(void);
NETDUO_API void netduo_string_free(char* s);

NETDUO_API netduo_status netduo_game_create(double a11, double a12, double a21, double a22,
                                            netduo_game** out);
/* {"a11": x, "a12": x, "a21": x, "a22": x} */
NETDUO_API netduo_status netduo_game_from_json(const char* json, netduo_game** out);
NETDUO_API void netduo_game_destroy(netduo_game* game);
NETDUO_API netduo_status netduo_game_entries(const netduo_game* game, double out[4]);

NETDUO_API netduo_status netduo_determinant(const netduo_game* game, double* out);
NETDUO_API netduo_status netduo_kappas(const netduo_game* game, double* kappa1, double* kappa2);
NETDUO_API netduo_status netduo_lambda(const netduo_game* game, netduo_lambda_variant variant,
                                       double* out);
/* Canonical orientation (kappa1 > 0); NETDUO_E_NOT_APPLICABLE unless kappa1*kappa2 < 0. */
NETDUO_API netduo_status netduo_canonical(const netduo_game* game, netduo_game** out,
                                          int* swapped);
NETDUO_API netduo_status netduo_star_price(const netduo_game* game, double* out);
NETDUO_API netduo_status netduo_existence_check(const netduo_game* game,
                                                netduo_lambda_variant variant, int* holds);

/* Number of equilibrium families at (p_a, p_b); classes written to `classes`
 * when non-null (capacity 9 is always enough). */
NETDUO_API netduo_status netduo_equilibrium_classes(const netduo_game* game, double p_a,
                                                    double p_b, netduo_class* classes,
                                                    size_t* count);

/* Selection under a policy token: both-split | min | max | monopoly-a |
 * monopoly-b | appendix-a | priority:C11,SS,... */
NETDUO_API netduo_status netduo_select(const netduo_game* game, double p_a, double p_b,
                                       const char* policy, double* s1, double* s2,
                                       netduo_class* cls);
NETDUO_API netduo_status netduo_demand(const netduo_game* game, double p_a, double p_b,
                                       const char* policy, double* d_a, double* d_b);

/* Report producers. JSON documents and CSV tables as written by the CLI. */
NETDUO_API netduo_status netduo_analyze_json(const netduo_game* game, char** out);
NETDUO_API netduo_status netduo_equilibria_json(const netduo_game* game, double p_a, double p_b,
                                                char** out);
NETDUO_API netduo_status netduo_correspondence_csv(const netduo_game* game, double p_b,
                                                   double lo, double hi, double step, char** out);
NETDUO_API netduo_status netduo_price_eq_json(const netduo_game* game, const char* policy,
                                              char** out);
NETDUO_API netduo_status netduo_curve_csv(const netduo_game* game, double p_b, const char* policy,
                                          double lo, double hi, double step, char** out);

typedef struct netduo_verify_options {
    const char* policy; /* NULL: appendix-a */
    double lo;          /* negative: 0 */
    double hi;          /* non-positive: 3 p_star */
    double step;        /* non-positive: p_star / 4000 */
    int lattice_n;      /* non-positive: 200 */
} netduo_verify_options;

NETDUO_API netduo_verify_options netduo_verify_options_default(void);
/* `passed` receives 1 when every check passes. */
NETDUO_API netduo_status netduo_verify_json(const netduo_game* game,
                                            const netduo_verify_options* options, char** out,
                                            int* passed);

/* entries: template a11, a12, a21, a22; free_entry: 0..3. */
NETDUO_API netduo_status netduo_sweep_csv(const double entries[4], int free_entry, double lo,
                                          double hi, double step, int verify, char** out);

/* game may be NULL to draw `count` random matrices from `seed`. `constraint`
 * is a bitwise OR of netduo_constraint values. */
NETDUO_API netduo_status netduo_oracle_json(const netduo_game* game, uint64_t seed, size_t count,
                                            unsigned constraint, int lattice_n, char** out,
                                            int* passed);

NETDUO_API netduo_status netduo_random_matrix(uint64_t seed, unsigned constraint,
                                              netduo_game** out);

#ifdef __cplusplus
}
#endif

#endif /* NETDUO_NETDUO_H */
