#ifndef UNISHEAF_H
#define UNISHEAF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call.
typedef enum UsStatus {
  US_STATUS_OK = 0,
  // A required pointer argument was null.
  US_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  US_STATUS_INVALID_UTF8 = 2,
  // Input text failed to parse; the message carries line and column.
  US_STATUS_PARSE = 3,
  // Input parsed but violates a structural requirement.
  US_STATUS_INVALID = 4,
  // The computation could not be carried out (size limits, arithmetic).
  US_STATUS_COMPUTATION = 5,
  // An internal panic was caught at the boundary.
  US_STATUS_PANIC = 6,
} UsStatus;

// A differential operator with its singular set.
typedef struct UsConnection UsConnection;

// A sheaf of finite-dimensional vector spaces on a finite space.
typedef struct UsSheaf UsSheaf;

// A parsed space file (quasi-uniformity, covering family or topology).
typedef struct UsSpace UsSpace;

// A covering tower built to a fixed depth.
typedef struct UsTower UsTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if there was none.
// The caller owns the returned string.
char *us_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` is null or was returned by this library and not yet freed.
void us_string_free(char *s);

// Library version as a static string; do not free.
const char *us_version(void);

// Parses a space file.
//
// # Safety
// `source` is a NUL-terminated string; `out` is writable.
enum UsStatus us_space_parse(const char *source, struct UsSpace **out);

// # Safety
// `space` is null or a live handle from [`us_space_parse`].
void us_space_free(struct UsSpace *space);

// Number of points.
//
// # Safety
// `space` is a live handle; `out` is writable.
enum UsStatus us_space_size(const struct UsSpace *space, size_t *out);

// Quasi-uniformity axioms of the entourage basis, and the smallest
// entourage as `(a,b) (b,b) ...`.
//
// # Safety
// `space` is a live handle; output pointers are writable (`e_min` may be null).
enum UsStatus us_space_check(const struct UsSpace *space,
                             bool *quasi_uniform,
                             bool *uniform,
                             char **e_min);

// Canonical text of the space file.
//
// # Safety
// `space` is a live handle; `out` is writable.
enum UsStatus us_space_to_string(const struct UsSpace *space, char **out);

// Parses an operator file.
//
// # Safety
// `source` is a NUL-terminated string; `out` is writable.
enum UsStatus us_connection_parse(const char *source, struct UsConnection **out);

// # Safety
// `c` is null or a live handle from [`us_connection_parse`].
void us_connection_free(struct UsConnection *c);

// Irregularity at a point written as `0`, `1/2` or `inf`.
//
// # Safety
// `c` is a live handle; `point` is a NUL-terminated string; `out` is writable.
enum UsStatus us_connection_irregularity(const struct UsConnection *c,
                                         const char *point,
                                         int64_t *out);

// Euler characteristic from the index formula.
//
// # Safety
// `c` is a live handle; `out` is writable.
enum UsStatus us_connection_chi(const struct UsConnection *c, int64_t *out);

// Index from the truncated De Rham complex, growing windows up to `dmax`;
// `agree` reports whether it stabilized at the formula's value.
//
// # Safety
// `c` is a live handle; output pointers are writable.
enum UsStatus us_connection_oracle_index(const struct UsConnection *c,
                                         size_t dmax,
                                         int64_t *index,
                                         bool *agree);

// Builds a tower from a generator name (`metric`, `sectorial`, `padic`,
// `formal`); `p` is the prime for the last two and ignored otherwise.
//
// # Safety
// `generator` is a NUL-terminated string; `out` is writable.
enum UsStatus us_tower_new(const char *generator, uint64_t p, size_t depth, struct UsTower **out);

// Parses a one-line tower file such as `tower sectorial depth=4`.
//
// # Safety
// `source` is a NUL-terminated string; `out` is writable.
enum UsStatus us_tower_parse(const char *source, struct UsTower **out);

// # Safety
// `t` is null or a live tower handle.
void us_tower_free(struct UsTower *t);

// Number of blocks at level `level`.
//
// # Safety
// `t` is a live handle; `out` is writable.
enum UsStatus us_tower_level_size(const struct UsTower *t, size_t level, size_t *out);

// Whether every level star-refines the one a stride above it.
//
// # Safety
// `t` is a live handle; `out` is writable.
enum UsStatus us_tower_star_verified(const struct UsTower *t, bool *out);

// Constant-sheaf cohomology dimensions of the boundary quotient, as `1 1`.
//
// # Safety
// `t` is a live handle; `out` is writable.
enum UsStatus us_tower_boundary_cohomology(const struct UsTower *t, char **out);

// Parses a sheaf file.
//
// # Safety
// `source` is a NUL-terminated string; `out` is writable.
enum UsStatus us_sheaf_parse(const char *source, struct UsSheaf **out);

// # Safety
// `s` is null or a live sheaf handle.
void us_sheaf_free(struct UsSheaf *s);

// Cohomology dimensions as space-separated integers.
//
// # Safety
// `s` is a live handle; `out` is writable.
enum UsStatus us_sheaf_cohomology(const struct UsSheaf *s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNISHEAF_H */
