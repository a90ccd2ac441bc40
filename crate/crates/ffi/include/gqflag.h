#ifndef GQFLAG_H
#define GQFLAG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GqfStatus {
  GQF_STATUS_OK = 0,
  GQF_STATUS_NULL_POINTER = 1,
  GQF_STATUS_INVALID_ARGUMENT = 2,
  GQF_STATUS_OUT_OF_RANGE = 3,
  GQF_STATUS_COMPOSITE_PARAMETER = 4,
  GQF_STATUS_AXIOM_FAILURE = 5,
  GQF_STATUS_NOT_A_SCHEME = 6,
  GQF_STATUS_PARSE_ERROR = 7,
  GQF_STATUS_IO_ERROR = 8,
  GQF_STATUS_RECONSTRUCTION_FAILED = 9,
} GqfStatus;

/*
 Opaque relation matrix; the intersection numbers are computed on first use.
 */
typedef struct GqfScheme GqfScheme;

/*
 Opaque incidence structure.
 */
typedef struct GqfStructure GqfStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or null. Valid until the next failing call.
 */
const char *gqf_last_error_message(void);

/*
 `(s+1) x (s+1)` grid, order `(s, 1)`.
 */
enum GqfStatus gqf_structure_build_grid(uint64_t s, struct GqfStructure **out);

/*
 Dual grid, order `(1, t)`.
 */
enum GqfStatus gqf_structure_build_dual_grid(uint64_t t, struct GqfStructure **out);

/*
 Symplectic quadrangle of order `(q, q)` for prime `q`.
 */
enum GqfStatus gqf_structure_build_symplectic(uint64_t q, struct GqfStructure **out);

/*
 Reads a JSON structure file.
 */
enum GqfStatus gqf_structure_load(const char *path, struct GqfStructure **out);

enum GqfStatus gqf_structure_save(const struct GqfStructure *handle, const char *path);

/*
 Checks the quadrangle axioms and writes the order.
 */
enum GqfStatus gqf_structure_verify(const struct GqfStructure *handle, uint64_t *s, uint64_t *t);

enum GqfStatus gqf_structure_counts(const struct GqfStructure *handle,
                                    size_t *points,
                                    size_t *lines,
                                    size_t *flags);

/*
 Points and lines swapped.
 */
enum GqfStatus gqf_structure_dualize(const struct GqfStructure *handle, struct GqfStructure **out);

void gqf_structure_free(struct GqfStructure *handle);

/*
 Seven-class flag scheme of a quadrangle; fails unless the axioms hold.
 */
enum GqfStatus gqf_scheme_from_structure(const struct GqfStructure *structure,
                                         struct GqfScheme **out);

/*
 Reads a relation-matrix file.
 */
enum GqfStatus gqf_scheme_load(const char *path, struct GqfScheme **out);

enum GqfStatus gqf_scheme_save(const struct GqfScheme *handle, const char *path);

/*
 Number of vertices and of non-identity classes.
 */
enum GqfStatus gqf_scheme_dimensions(const struct GqfScheme *handle, size_t *n, size_t *d);

/*
 Class of the ordered pair `(x, y)`.
 */
enum GqfStatus gqf_scheme_relation(const struct GqfScheme *handle, size_t x, size_t y, size_t *out);

/*
 Counted intersection number `p[k][i][j]`; verifies the scheme axioms on first use.
 */
enum GqfStatus gqf_scheme_intersection_number(struct GqfScheme *handle,
                                              size_t k,
                                              size_t i,
                                              size_t j,
                                              int64_t *out);

enum GqfStatus gqf_scheme_valency(struct GqfScheme *handle, size_t i, int64_t *out);

/*
 Merges a seven-class scheme into four classes: `{1,2}`, `{3,4}`, `{5,6}`, `{7}`.
 */
enum GqfStatus gqf_scheme_fuse_four_class(struct GqfScheme *handle, struct GqfScheme **out);

/*
 Seeded random vertex order and class names (class 0 kept).
 */
enum GqfStatus gqf_scheme_scramble(const struct GqfScheme *handle,
                                   uint64_t seed,
                                   struct GqfScheme **out);

/*
 Rebuilds the quadrangle from seven-class data. Class names are used as
 given when they fit the table; otherwise they are relabeled, and for
 `s != t` the orientation `(target_s, target_t)` is used when both are
 nonzero.
 */
enum GqfStatus gqf_reconstruct_7class(const struct GqfScheme *handle,
                                      uint64_t target_s,
                                      uint64_t target_t,
                                      struct GqfStructure **out);

/*
 Rebuilds a quadrangle of order `(s, s)` from four-class fused data, with
 class names restored first.
 */
enum GqfStatus gqf_reconstruct_4class(const struct GqfScheme *handle, struct GqfStructure **out);

void gqf_scheme_free(struct GqfScheme *handle);

/*
 Closed-form flag intersection number `p[k][i][j]` at `(s, t)`.
 */
enum GqfStatus gqf_flag_number(size_t k, size_t i, size_t j, int64_t s, int64_t t, int64_t *out);

/*
 Closed-form four-class intersection number `p[k][i][j]` at `s`.
 */
enum GqfStatus gqf_fused_number(size_t k, size_t i, size_t j, int64_t s, int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GQFLAG_H */
