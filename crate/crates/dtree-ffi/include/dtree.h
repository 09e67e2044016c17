#ifndef DTREE_H
#define DTREE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status code returned by every fallible function.
 */
typedef enum DtreeStatus {
  /*
   Success.
   */
  DTREE_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  DTREE_STATUS_NULL_ARGUMENT = 1,
  /*
   A string argument was not valid UTF-8.
   */
  DTREE_STATUS_INVALID_UTF8 = 2,
  /*
   The text is not in the `.dtree` format.
   */
  DTREE_STATUS_PARSE = 3,
  /*
   The text describes a structure that is not a decorated tree.
   */
  DTREE_STATUS_INVALID_TREE = 4,
  /*
   A node id does not occur in the tree.
   */
  DTREE_STATUS_UNKNOWN_NODE = 5,
  /*
   Two nodes are not joined by an edge.
   */
  DTREE_STATUS_UNKNOWN_EDGE = 6,
  /*
   The input does not meet the precondition of the operation.
   */
  DTREE_STATUS_PRECONDITION = 7,
  /*
   The operation needs a tree with a `root` line.
   */
  DTREE_STATUS_NOT_ROOTED = 8,
  /*
   The value does not fit in a signed 64-bit integer.
   */
  DTREE_STATUS_OVERFLOW = 9,
  /*
   No suite has the given name.
   */
  DTREE_STATUS_UNKNOWN_SUITE = 10,
  /*
   A property suite found a counterexample.
   */
  DTREE_STATUS_SUITE_FAILED = 11,
  /*
   An internal consistency check failed.
   */
  DTREE_STATUS_INTERNAL = 12,
  /*
   The library panicked.
   */
  DTREE_STATUS_PANIC = 13,
} DtreeStatus;

/*
 Which global invariant to read.
 */
typedef enum DtreeInvariant {
  /*
   `M(T)`.
   */
  DTREE_INVARIANT_M = 0,
  /*
   `F(T)`.
   */
  DTREE_INVARIANT_F = 1,
  /*
   `g(T) = (2 - M - F)/2`.
   */
  DTREE_INVARIANT_GENUS = 2,
  /*
   `δ(T) = (F - M)/2`.
   */
  DTREE_INVARIANT_DELTA = 3,
  /*
   The degree of a rooted tree.
   */
  DTREE_INVARIANT_DEGREE = 4,
} DtreeInvariant;

/*
 Opaque handle to a decorated tree, possibly with a root.
 */
typedef struct DtreeTree DtreeTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on the calling thread, or null.

 The pointer stays valid until the next call into this library on the same thread.
 */
const char *dtree_last_error(void);

/*
 Version string of the library. The pointer is static.
 */
const char *dtree_version(void);

/*
 Parses `.dtree` text into a new handle stored in `*out`.

 # Safety

 `text` must be null or a nul-terminated string; `out` must be null or writable.
 */
enum DtreeStatus dtree_parse(const char *text, struct DtreeTree **out);

/*
 Releases a handle. Null is ignored.

 # Safety

 `tree` must be null or a handle from this library that has not been freed.
 */
void dtree_free(struct DtreeTree *tree);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety

 `s` must be null or a string from this library that has not been freed.
 */
void dtree_string_free(char *s);

/*
 Writes the tree in `.dtree` format to `*out`.

 # Safety

 `tree` must be null or a live handle; `out` must be null or writable.
 */
enum DtreeStatus dtree_serialize(const struct DtreeTree *tree, char **out);

/*
 Writes the tree in DOT format to `*out`.

 # Safety

 `tree` must be null or a live handle; `out` must be null or writable.
 */
enum DtreeStatus dtree_to_dot(const struct DtreeTree *tree,
                              bool fill_zero_multiplicity,
                              bool show_ids,
                              char **out);

/*
 Whether the handle carries a root. Null gives false.

 # Safety

 `tree` must be null or a live handle.
 */
bool dtree_is_rooted(const struct DtreeTree *tree);

/*
 Writes a global invariant as a decimal string to `*out`.

 # Safety

 `tree` must be null or a live handle; `out` must be null or writable.
 */
enum DtreeStatus dtree_invariant(const struct DtreeTree *tree,
                                 enum DtreeInvariant which,
                                 char **out);

/*
 Writes a global invariant to `*out` if it fits in 64 bits.

 # Safety

 `tree` must be null or a live handle; `out` must be null or writable.
 */
enum DtreeStatus dtree_invariant_i64(const struct DtreeTree *tree,
                                     enum DtreeInvariant which,
                                     int64_t *out);

/*
 Writes the multiplicity `N` of a vertex or zero arrow as a decimal string to `*out`.

 # Safety

 `tree` must be null or a live handle; `node` must be null or a nul-terminated
 string; `out` must be null or writable.
 */
enum DtreeStatus dtree_multiplicity(const struct DtreeTree *tree, const char *node, char **out);

/*
 Applies the simplification rules until none applies and stores the result in `*out`.

 The result carries no root.

 # Safety

 `tree` must be null or a live handle; `out` must be null or writable.
 */
enum DtreeStatus dtree_normalize(const struct DtreeTree *tree, struct DtreeTree **out);

/*
 Checks the genus formula on a rooted tree and writes both sides to `*genus` and `*formula`.

 # Safety

 `tree` must be null or a live handle; `genus` and `formula` must be null or writable.
 */
enum DtreeStatus dtree_genus_formula(const struct DtreeTree *tree, char **genus, char **formula);

/*
 Splits at the edge joining `a` and `b`.

 The two pieces go to `*t1` and `*t2` and the degree, as a decimal string, to `*degree`.

 # Safety

 `tree` must be null or a live handle; `a` and `b` must be null or
 nul-terminated strings; the out-parameters must be null or writable.
 */
enum DtreeStatus dtree_split_edge(const struct DtreeTree *tree,
                                  const char *a,
                                  const char *b,
                                  struct DtreeTree **t1,
                                  struct DtreeTree **t2,
                                  char **degree);

/*
 EN-splits at the edge joining `a` and `b`.

 The two pieces go to `*t1` and `*t2`, the degree to `*degree` and the type to `*kind`.

 # Safety

 `tree` must be null or a live handle; `a` and `b` must be null or
 nul-terminated strings; the out-parameters must be null or writable.
 */
enum DtreeStatus dtree_ensplit_edge(const struct DtreeTree *tree,
                                    const char *a,
                                    const char *b,
                                    struct DtreeTree **t1,
                                    struct DtreeTree **t2,
                                    char **degree,
                                    int8_t *kind);

/*
 Runs a named property suite on `count` random trees from `seed`.

 The number of failing instances goes to `*failures`. A suite that fails
 returns `DTREE_STATUS_SUITE_FAILED` and leaves its report in the last error.

 # Safety

 `name` must be null or a nul-terminated string; `failures` must be null or writable.
 */
enum DtreeStatus dtree_check_suite(const char *name,
                                   uint64_t seed,
                                   size_t count,
                                   uint64_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DTREE_H */
