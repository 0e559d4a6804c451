#ifndef HILBCONF_H
#define HILBCONF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  HC_STATUS_PARSE_ERROR = 3,
  HC_STATUS_DOMAIN_ERROR = 4,
  HC_STATUS_PANIC = 5,
} HcStatus;

/**
 * An enrichment owned by the library.
 */
typedef struct HcEnrichment HcEnrichment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses compact notation (`R^{3,123}_{3,12,123}`) or JSON over `{1..n}`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_enrichment_parse(const char *text, uint32_t n, struct HcEnrichment **out);

/**
 * # Safety
 * `h` must come from [`hc_enrichment_parse`] and not be freed twice.
 */
void hc_enrichment_free(struct HcEnrichment *h);

/**
 * `{"n": …, "structures": […]}`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_enrichment_to_json(const struct HcEnrichment *h, char **out);

/**
 * Classification report of one enrichment.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_classify(const struct HcEnrichment *h, char **out);

/**
 * `{"G": …, "H": …, "acting": label}`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_groups(const struct HcEnrichment *h, char **out);

/**
 * Summary of classifying every enrichment up to `max_level`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HcStatus hc_classify_all(uint32_t n, uint32_t max_level, char **out);

/**
 * Chart verification report; `mode` is `substituted` or `symbolic-w`.
 *
 * # Safety
 * `target` and `mode` must be valid strings and `out` a valid pointer.
 */
enum HcStatus hc_verify_chart(const char *target, uint32_t dim, const char *mode, char **out);

/**
 * The colon ideal `(ideal : by)`; `vars`, `ideal` and `by` are
 * comma-separated lists.
 *
 * # Safety
 * All string arguments must be valid and `out` a valid pointer.
 */
enum HcStatus hc_colon_ideal(const char *vars, const char *ideal, const char *by, char **out);

/**
 * Message for the last failure on this thread, or null. The caller owns
 * the returned string.
 */
char *hc_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void hc_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *hc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HILBCONF_H */
