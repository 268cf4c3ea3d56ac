#ifndef RG_LAB_H
#define RG_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  RG_STATUS_OK = 0,
  RG_STATUS_NULL_ARGUMENT = 1,
  RG_STATUS_INVALID_UTF8 = 2,
  RG_STATUS_PARSE = 3,
  RG_STATUS_BUDGET = 4,
  RG_STATUS_INVALID = 5,
  RG_STATUS_INTERNAL = 6,
} RgStatus;

// A parsed presentation.
typedef struct RgPresentation RgPresentation;

// A coset table together with the presentation it was built over.
typedef struct RgTable RgTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call into this library on the same thread.
const char *rg_last_error(void);

// # Safety
// `s` is null or was returned by this library and not yet freed.
void rg_string_free(char *s);

// Parses `a b ; abAB`-style text.
//
// # Safety
// `text` is a nul-terminated string; `out` is writable.
RgStatus rg_presentation_parse(const char *text, RgPresentation **out);

// Presentation from the built-in catalog.
//
// # Safety
// `name` is a nul-terminated string; `out` is writable.
RgStatus rg_presentation_preset(const char *name, RgPresentation **out);

// # Safety
// `p` is null or a live handle, not used afterwards.
void rg_presentation_free(RgPresentation *p);

// # Safety
// `p` is a live handle.
size_t rg_presentation_generator_count(const RgPresentation *p);

// Sum of relator lengths.
//
// # Safety
// `p` is a live handle.
size_t rg_presentation_relator_length_sum(const RgPresentation *p);

// Table from quotient JSON (`{"degree": n, "images": {...}}`).
//
// # Safety
// `p` is a live handle, `json` a nul-terminated string, `out` writable.
RgStatus rg_table_from_quotient(const RgPresentation *p, const char *json, RgTable **out);

// Coset enumeration for the subgroup generated by comma-separated words.
//
// # Safety
// `p` is a live handle, `subgroup` a nul-terminated string, `out` writable.
RgStatus rg_table_enumerate(const RgPresentation *p,
                            const char *subgroup,
                            size_t max_cosets,
                            RgTable **out);

// # Safety
// `t` is null or a live handle, not used afterwards.
void rg_table_free(RgTable *t);

// Index of the subgroup.
//
// # Safety
// `t` is a live handle.
size_t rg_table_degree(const RgTable *t);

// Exact Cheeger constant `num/den` of the quotient Cayley graph.
//
// # Safety
// `t` is a live handle; `num`, `den` are writable.
RgStatus rg_cheeger_exact(const RgTable *t, size_t vertex_limit, int64_t *num, int64_t *den);

// Second-smallest normalized Laplacian eigenvalue.
//
// # Safety
// `t` is a live handle; `out` is writable.
RgStatus rg_lambda1(const RgTable *t, double *out);

// Rank interval `[lower, upper]` of the subgroup.
//
// # Safety
// `t` is a live handle; `lower`, `upper` are writable.
RgStatus rg_rank_interval(const RgTable *t, uint64_t *lower, uint64_t *upper);

// Splitting certificate for the cut, as JSON.
//
// # Safety
// `t` is a live handle; `cut` points to `cut_len` readable values; `out`
// is writable.
RgStatus rg_split_certificate(const RgTable *t,
                              const size_t *cut,
                              size_t cut_len,
                              int64_t epsilon_num,
                              int64_t epsilon_den,
                              char **out);

// Trichotomy report for a family spec such as `cyclic:n=4..8`, as JSON.
//
// # Safety
// `spec` is a nul-terminated string; `out` is writable.
RgStatus rg_family_report(const char *spec, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RG_LAB_H */
