#ifndef THRACKLE_H
#define THRACKLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThrStatus {
  THR_STATUS_OK = 0,
  THR_STATUS_NULL_POINTER = 1,
  THR_STATUS_INVALID_UTF8 = 2,
  THR_STATUS_PARSE = 3,
  THR_STATUS_INVALID_DRAWING = 4,
  THR_STATUS_INVALID_ARGUMENT = 5,
  THR_STATUS_FAILED = 6,
  THR_STATUS_PANIC = 7,
} ThrStatus;

/*
 Opaque drawing handle.
 */
typedef struct ThrDrawing ThrDrawing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Owned by the library.
 */
const char *thr_last_error(void);

/*
 # Safety
 `s` must come from this library and not have been freed.
 */
void thr_string_free(char *s);

/*
 Parses a drawing document.

 # Safety
 `json` must be a NUL-terminated string; `out_d` must be writable.
 */
enum ThrStatus thr_drawing_from_json(const char *json, struct ThrDrawing **out_d);

/*
 # Safety
 `d` must come from this library and not have been freed.
 */
void thr_drawing_free(struct ThrDrawing *d);

/*
 # Safety
 Pointers must be valid; the string is released with `thr_string_free`.
 */
enum ThrStatus thr_drawing_to_json(const struct ThrDrawing *d, char **out_json);

/*
 # Safety
 Pointers must be valid.
 */
enum ThrStatus thr_drawing_counts(const struct ThrDrawing *d, size_t *n, size_t *m);

/*
 Writes the number of violations; zero means the drawing is valid.

 # Safety
 Pointers must be valid.
 */
enum ThrStatus thr_validate(const struct ThrDrawing *d, size_t *violations);

/*
 # Safety
 Pointers must be valid.
 */
enum ThrStatus thr_classify(const struct ThrDrawing *d,
                            bool *is_thrackle,
                            bool *is_tangled_thrackle,
                            bool *is_simple_out);

/*
 Pair table as JSON.

 # Safety
 Pointers must be valid; the string is released with `thr_string_free`.
 */
enum ThrStatus thr_pair_table_json(const struct ThrDrawing *d, char **out_json);

/*
 # Safety
 Pointers must be valid.
 */
enum ThrStatus thr_has_disjoint_biclique(const struct ThrDrawing *d, size_t t, bool *found);

/*
 Splits vertices of degree above `delta`; the result is a new handle.

 # Safety
 Pointers must be valid.
 */
enum ThrStatus thr_split(const struct ThrDrawing *d, size_t delta, struct ThrDrawing **out_d);

/*
 Removes tangencies; the result is a new handle.

 # Safety
 Pointers must be valid.
 */
enum ThrStatus thr_perturb(const struct ThrDrawing *d, struct ThrDrawing **out_d);

/*
 Strip redrawing of a labelled bipartite drawing, returned as JSON.

 # Safety
 Pointers must be valid; the string is released with `thr_string_free`.
 */
enum ThrStatus thr_strip_redraw(const struct ThrDrawing *d, bool *parity_holds, char **out_json);

/*
 # Safety
 Output pointers must be valid.
 */
enum ThrStatus thr_strip_crossing_formula(uint64_t k1, uint64_t k2, uint64_t *result);

/*
 # Safety
 Output pointers must be valid.
 */
enum ThrStatus thr_alpha(uint64_t t, double *result);

double thr_lambda3_upper(uint64_t n);

/*
 # Safety
 Output pointers must be valid.
 */
enum ThrStatus thr_euler_density_check(uint64_t k, double *ratio, bool *contradiction);

/*
 # Safety
 `seq` must point to `len` readable values (may be null when `len` is 0).
 */
enum ThrStatus thr_is_ds_sequence(const uint32_t *seq, size_t len, size_t s, bool *result);

/*
 # Safety
 Output pointers must be valid.
 */
enum ThrStatus thr_lambda_brute(size_t n, size_t s, size_t *result);

/*
 Bisection width of the graph on `n` vertices whose edges are the pairs
 `(edges[2i], edges[2i+1])`. Exact when `exact` is set, otherwise the
 seeded heuristic.

 # Safety
 `edges` must point to `2 * m` readable values (may be null when `m` is 0).
 */
enum ThrStatus thr_bisection_width(size_t n,
                                   const uint32_t *edges,
                                   size_t m,
                                   bool exact,
                                   uint64_t seed,
                                   size_t *width);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THRACKLE_H */
