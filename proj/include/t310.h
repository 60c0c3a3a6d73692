/*
 * C API for the T-310 invariant-analysis toolkit.
 *
 * Every function returns a t310_status (T310_OK on success) unless noted.
 * On failure t310_last_error() returns a thread-local message describing the
 * problem.  Strings written through char** out-parameters are heap-allocated
 * and must be released with t310_string_free(); handles are released with
 * their matching *_free() function.
 *
 * Text conventions (shared with the command-line tool):
 *   - polynomials use single-letter state variables a..z, M..V (a = bit 36,
 *     V = bit 1), '+' for XOR, juxtaposition for AND, '1' for the constant,
 *     Z1..Z4 for opaque Boolean-function outputs; parenthesized factors are
 *     accepted on input
 *   - wirings use the "name: P=...,... D=...,..." form
 *   - truth tables are 16 hex digits, bit i = value on input i, input bit 0
 *     (LSB) = first argument; states are 9 hex digits (x1 = MSB of the first
 *     digit); keys are 60 hex digits
 */
#ifndef T310_H
#define T310_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct t310_poly_t t310_poly_t;
typedef struct t310_lzs_t t310_lzs_t;
typedef struct t310_zfunc_t t310_zfunc_t;

typedef enum {
    T310_OK = 0,
    T310_ERR_PARSE = 1,
    T310_ERR_RANGE = 2,
    T310_ERR_DOMAIN = 3,
    T310_ERR_BUDGET = 4,
    T310_ERR_NOT_FOUND = 5,
    T310_ERR_INVALID = 6, /* null or malformed argument */
    T310_ERR_INTERNAL = 7
} t310_status;

const char* t310_last_error(void);
void t310_string_free(char* s);

/* ---------------------------------------------------------- polynomials */

t310_status t310_poly_parse(const char* text, t310_poly_t** out);
/* style: 0 = global (Z1..Z4), 1 = local (placeholders print as plain Z) */
t310_status t310_poly_print(const t310_poly_t* p, int style, char** out);
void t310_poly_free(t310_poly_t* p);

t310_status t310_poly_add(const t310_poly_t* p, const t310_poly_t* q, t310_poly_t** out);
t310_status t310_poly_mul(const t310_poly_t* p, const t310_poly_t* q, t310_poly_t** out);
/* *is_zero is set for the zero polynomial, whose degree is not a number */
t310_status t310_poly_degree(const t310_poly_t* p, int* degree, int* is_zero);
t310_status t310_poly_equal(const t310_poly_t* p, const t310_poly_t* q, int* equal);
/* assignment: comma-separated "a=1,b=0,..." covering the support */
t310_status t310_poly_eval(const t310_poly_t* p, const char* assignment, int* value);
/* map: semicolon-separated "a:b+c;d:1"; every support variable needs an entry */
t310_status t310_poly_substitute(const t310_poly_t* p, const char* map, t310_poly_t** out);
t310_status t310_poly_divides(const t310_poly_t* a, const t310_poly_t* p, int* result);
t310_status t310_poly_irreducible(const t310_poly_t* p, int* result);
/* removes a support-disjoint affine factor, verifying quotient*factor == p */
t310_status t310_poly_drop_factor(const t310_poly_t* p, const t310_poly_t* affine,
                                  t310_poly_t** out);

/* -------------------------------------------------------------- wirings */

t310_status t310_lzs_parse(const char* text, t310_lzs_t** out);
t310_status t310_lzs_print(const t310_lzs_t* lzs, char** out);
void t310_lzs_free(t310_lzs_t* lzs);

/* ----------------------------------------------------- Boolean functions */

t310_status t310_zfunc_from_anf(const char* text, t310_zfunc_t** out);
t310_status t310_zfunc_from_hex(const char* hex16, t310_zfunc_t** out);
t310_status t310_zfunc_print_anf(const t310_zfunc_t* z, char** out);
t310_status t310_zfunc_print_hex(const t310_zfunc_t* z, char** out);
void t310_zfunc_free(t310_zfunc_t* z);

t310_status t310_zfunc_metrics(const t310_zfunc_t* z, int* weight, int* degree,
                               int* degree_is_zero, int* nonlinearity);

/* -------------------------------------------------------------- fixtures */

/* newline-separated fixture names */
t310_status t310_fixture_names(char** out);
t310_status t310_fixture(const char* name, t310_lzs_t** lzs_out, t310_zfunc_t** z_out);
/* "A = e+m\n..." plus the known proven/refuted invariants */
t310_status t310_fixture_info(const char* name, char** out);

/* ---------------------------------------------------------------- cipher */

t310_status t310_encrypt(const t310_lzs_t* lzs, const t310_zfunc_t* z, const char* state_hex,
                         const char* key_hex, const char* f_bits, long rounds, char** out_hex);

/* verdict: 0 evidence, 1 proven (exhaustive), 2 collision found */
t310_status t310_check_bijective(const t310_lzs_t* lzs, const t310_zfunc_t* z, int exhaustive,
                                 long samples, uint64_t seed, int jobs, int* verdict,
                                 char** report);

/* ------------------------------------------------------- symbolic engine */

/* z may be NULL for symbolic mode; survivors receives "none" or "F,K,L" */
t310_status t310_derive_fe(const t310_lzs_t* lzs, const t310_zfunc_t* z, const t310_poly_t* p,
                           t310_poly_t** fe_out, char** survivors);
/* rewrite fe over the local inputs a..f of placeholder 1..4 */
t310_status t310_fe_local(const t310_lzs_t* lzs, const t310_poly_t* fe, int placeholder,
                          t310_poly_t** out);
/* the 36 substitution lines of one round; z may be NULL for symbolic mode */
t310_status t310_round_anf(const t310_lzs_t* lzs, const t310_zfunc_t* z, char** out);

/* ------------------------------------------------------------ invariants */

/* proven: 1/0.  On refutation, witness receives the violating context. */
t310_status t310_verify(const t310_lzs_t* lzs, const t310_zfunc_t* z, const t310_poly_t* p,
                        int rounds, int* proven, char** witness);
t310_status t310_verify_chain(const t310_lzs_t* lzs, const t310_zfunc_t* z,
                              const t310_poly_t* const* chain, size_t chain_len, int* proven,
                              char** witness);
t310_status t310_empirical(const t310_lzs_t* lzs, const t310_zfunc_t* z, const t310_poly_t* p,
                           long trials, int rounds_per_trial, uint64_t seed, int jobs,
                           long* violations, char** witness);

/* variables: letters, e.g. "efghmnop"; basis: newline-separated polynomials */
t310_status t310_search(const t310_lzs_t* lzs, const t310_zfunc_t* z, const char* variables,
                        int max_degree, int rounds, char** basis);

/* factor cycle derived from a fresh output pair (both = 1 mod 4) */
t310_status t310_cycle(const t310_lzs_t* lzs, int seed_i, int seed_j, char** report);

/* status_out: 0 met-and-invariant, 1 unmet, 2 met-but-violated */
t310_status t310_theorem3(const t310_lzs_t* lzs, const t310_zfunc_t* z, int* status_out,
                          char** report);

/* offset/factor: local polynomials over a..f */
t310_status t310_check_annihilation(const t310_zfunc_t* z, const char* offset,
                                    const char* factor, int* holds, int* counterexample);
t310_status t310_solve_z(const char* offset, const char* factor, int* forced, int* free_count,
                         t310_zfunc_t** sample);

/* constraints: semicolon-separated "D8=P6;D6=32;...".
 * require: semicolon-separated "offset|factor" annihilation conditions.
 * forbidden: semicolon-separated "vars:efgh,deg:3[,rounds:1]" search specs.
 * base and z may be NULL (z defaults to a solve_z sample of require[0]).
 * candidates: newline-separated wiring strings. */
t310_status t310_synthesize(const char* constraints, const t310_lzs_t* base, const char* require,
                            const char* forbidden, const t310_zfunc_t* z, uint64_t seed,
                            int max_candidates, long budget, char** candidates);

/* DIMACS CNF of the FE coefficient system with Z00..Z63 unknown */
t310_status t310_export_cnf(const t310_lzs_t* lzs, const t310_poly_t* p, char** cnf);

/* ---------------------------------------------------------------- suite */

/* one line per acceptance criterion; *all_passed set accordingly */
t310_status t310_selftest(int quick, uint64_t seed, int jobs, int* all_passed, char** report);

#ifdef __cplusplus
}
#endif

#endif /* T310_H */
