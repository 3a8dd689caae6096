/* C interface to the online-learning laboratory: exact minimax game values,
 * sequential complexities, bound calculators, approachability and calibration
 * runners, lower-bound witnesses, and Monte Carlo concentration checks.
 *
 * Every fallible function returns an olab_status; on failure,
 * olab_last_error() holds a human-readable message for the calling thread.
 * Operations beyond the convenience functions below run through olab_exec(),
 * which executes one JSON-encoded operation (schema in docs/SCHEMA.md).
 */
#ifndef OLAB_H
#define OLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum olab_status {
  OLAB_OK = 0,
  OLAB_ERR_INVALID = 1,  /* out-of-contract inputs */
  OLAB_ERR_PARSE = 2,    /* JSON syntax or schema violation */
  OLAB_ERR_BUDGET = 3,   /* computation would exceed its work budget */
  OLAB_ERR_CHECK = 4,    /* an asserted property failed to hold */
  OLAB_ERR_INTERNAL = 5  /* invariant breach inside the library */
} olab_status;

/* Library version string, e.g. "0.1.0". Static storage; do not free. */
const char* olab_version(void);

/* Message for the most recent failure on the calling thread. Valid until the
 * next failing call on the same thread. Static storage; do not free. */
const char* olab_last_error(void);

/* An opaque validated game description. */
typedef struct olab_game olab_game;

/* Parse a JSON game description (the inline-game schema of docs/SCHEMA.md:
 * fields F, X, T, payoff, aggregator, transforms, or a "make" factory).
 * On success *out receives a new handle; release it with olab_game_free. */
olab_status olab_game_parse(const char* json_text, olab_game** out);
void olab_game_free(olab_game* game);

/* Exact minimax value of the T-round game by backward induction.
 * budget caps the number of leaf histories the recursion may touch
 * (budget <= 0 selects the default, 10^7). */
olab_status olab_exact_value(const olab_game* game, long long budget, double* out_value);

/* Solve the zero-sum matrix game with row-major payoff matrix `values`
 * (nf rows, nx columns); the row player minimizes, the column player
 * maximizes. On success *out_value receives the game value, and when
 * row_mix / col_mix are non-NULL they receive optimal mixed strategies
 * (lengths nf and nx). */
olab_status olab_solve_matrix_game(const double* values, int nf, int nx, double* out_value,
                                   double* row_mix, double* col_mix);

/* Execute one JSON-encoded operation (docs/SCHEMA.md). On success *out_json
 * receives a newly allocated JSON result string; release it with
 * olab_string_free. */
olab_status olab_exec(const char* config_json, char** out_json);
void olab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* OLAB_H */
