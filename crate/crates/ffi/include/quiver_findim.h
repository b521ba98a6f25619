#ifndef QUIVER_FINDIM_H
#define QUIVER_FINDIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes. The nonzero values match the exit codes of the
 `quiver-findim` binary, except for the last two.
 */
typedef enum QfStatus {
  QF_STATUS_OK = 0,
  QF_STATUS_INVALID_ARGUMENT = 1,
  QF_STATUS_PARSE = 2,
  QF_STATUS_NOT_ADMISSIBLE = 3,
  QF_STATUS_CERTIFICATE = 4,
  QF_STATUS_INVARIANT = 5,
  QF_STATUS_NULL_POINTER = 6,
  QF_STATUS_PANIC = 7,
} QfStatus;

/*
 A parsed and completed bound quiver algebra.
 */
typedef struct QfAlgebra QfAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses an algebra description and computes its Gröbner basis.

 # Safety
 `text` must be a nul-terminated string and `out` a valid pointer. On
 success `*out` owns a handle to be released with [`qf_algebra_free`].
 */
enum QfStatus qf_algebra_parse(const char *text, struct QfAlgebra **out);

/*
 Releases a handle. Null is accepted.

 # Safety
 `alg` must come from [`qf_algebra_parse`] and not have been freed.
 */
void qf_algebra_free(struct QfAlgebra *alg);

/*
 Dimension of the algebra over its field.

 # Safety
 `alg` must be a live handle and `out` a valid pointer.
 */
enum QfStatus qf_algebra_dimension(const struct QfAlgebra *alg, size_t *out);

/*
 Normal form of an element written in the input syntax.

 # Safety
 `alg` must be a live handle, `element` a nul-terminated string and `out`
 a valid pointer. The string stored in `*out` is freed with
 [`qf_string_free`].
 */
enum QfStatus qf_normal_form(const struct QfAlgebra *alg, const char *element, char **out);

/*
 Projective dimension of `S<v>`, `P<v>` or `ideal:<arrow>`, resolving at
 most `cutoff` steps. `*exact` is false when only the lower bound
 `*value` is known.

 # Safety
 `alg` must be a live handle, `module` a nul-terminated string, `value`
 and `exact` valid pointers.
 */
enum QfStatus qf_projective_dimension(const struct QfAlgebra *alg,
                                      const char *module,
                                      size_t cutoff,
                                      size_t *value,
                                      bool *exact);

/*
 Runs the bound pipeline for `arrow` and writes the report as JSON.
 A report without an upper bound is still `QF_STATUS_OK`; inspect its
 `fpd_upper` field.

 # Safety
 `alg` must be a live handle, `arrow` a nul-terminated string and `out` a
 valid pointer. The string stored in `*out` is freed with
 [`qf_string_free`].
 */
enum QfStatus qf_bound_report_json(const struct QfAlgebra *alg,
                                   const char *arrow,
                                   size_t cutoff,
                                   char **out);

/*
 Message of the last failed call on this thread, or null. The pointer
 stays valid until the next library call on the same thread.
 */
const char *qf_last_error_message(void);

/*
 Releases a string returned by the library. Null is accepted.

 # Safety
 `s` must come from this library and not have been freed.
 */
void qf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUIVER_FINDIM_H */
