#ifndef SIGMA_RACE_H
#define SIGMA_RACE_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_POINTER = 1,
  SR_STATUS_INVALID_UTF8 = 2,
  SR_STATUS_PARSE = 3,
  SR_STATUS_DOMAIN = 4,
  SR_STATUS_PRECONDITION = 5,
  SR_STATUS_WRONG_REGIME = 6,
  SR_STATUS_RESOURCE = 7,
  SR_STATUS_PRECISION_UNREACHABLE = 8,
  SR_STATUS_UNDECIDED = 9,
  SR_STATUS_PARTIAL_FACTORIZATION = 10,
  SR_STATUS_BUDGET = 11,
  SR_STATUS_NO_SOLUTION = 12,
  SR_STATUS_VERIFICATION = 13,
  SR_STATUS_IO = 14,
  SR_STATUS_JSON = 15,
  SR_STATUS_PANIC = 16,
} SrStatus;

/**
 * Run configuration.
 */
typedef struct SrConfig SrConfig;

/**
 * A race `σ_s(an+b)` against `σ_s(cn+d)` with a direction.
 */
typedef struct SrRace SrRace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sr_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * NUL-terminated) and returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to at least `len` writable bytes.
 */
size_t sr_last_error_message(char *buf, size_t len);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer previously returned through a `char **`
 * out-parameter of this library, not yet freed.
 */
void sr_string_free(char *s);

/**
 * A configuration with the library defaults.
 */
struct SrConfig *sr_config_new(void);

/**
 * Parses a TOML configuration; absent keys keep their defaults.
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `out` must be writable.
 */
enum SrStatus sr_config_from_toml(const char *toml, struct SrConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from this library, not yet freed.
 */
void sr_config_free(struct SrConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum SrStatus sr_config_set_parallelism(struct SrConfig *cfg, size_t threads);

/**
 * Sets the working precision, raising the cap if needed.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum SrStatus sr_config_set_precision(struct SrConfig *cfg, uint32_t bits);

/**
 * Creates a race. `s` accepts `2`, `-1`, `1/2`, `0.75`; `greater` selects
 * `σ_s(an+b) > σ_s(cn+d)` as the sought inequality.
 *
 * # Safety
 * `s` must be a NUL-terminated string; `out` must be writable.
 */
enum SrStatus sr_race_new(uint64_t a,
                          uint64_t b,
                          uint64_t c,
                          uint64_t d,
                          const char *s,
                          bool greater,
                          struct SrRace **out);

/**
 * # Safety
 * `race` must be null or a handle from this library, not yet freed.
 */
void sr_race_free(struct SrRace *race);

/**
 * First `n <= limit` where the race's inequality holds. `cfg` may be null
 * for defaults. `*found` is false when there is none.
 *
 * # Safety
 * `race` must be a live handle, `cfg` null or live, outputs writable.
 */
enum SrStatus sr_race_first_crossing(const struct SrRace *race,
                                     const struct SrConfig *cfg,
                                     uint64_t limit,
                                     bool *found,
                                     uint64_t *n);

/**
 * Checks the race's inequality for every `n <= limit`; `*first_violation`
 * is 0 when it holds throughout.
 *
 * # Safety
 * `race` must be a live handle, `cfg` null or live, output writable.
 */
enum SrStatus sr_race_scan(const struct SrRace *race,
                           const struct SrConfig *cfg,
                           uint64_t limit,
                           uint64_t *first_violation);

/**
 * `σ_s(n)` for a decimal `n`, rendered exactly (`p/q`) when the value is
 * rational and otherwise to 30 significant digits.
 *
 * # Safety
 * `n`, `s` must be NUL-terminated strings; `out` must be writable.
 */
enum SrStatus sr_sigma(const char *n, const char *s, const struct SrConfig *cfg, char **out);

/**
 * Builds a witness document as JSON, with a ratio certificate when `s` is
 * non-null.
 *
 * # Safety
 * `s` must be null or NUL-terminated; `cfg` null or live; `out` writable.
 */
enum SrStatus sr_witness_newman(uint64_t a,
                                uint64_t b,
                                uint64_t c,
                                uint64_t d,
                                size_t k,
                                const char *s,
                                const struct SrConfig *cfg,
                                char **out);

/**
 * Re-verifies a witness document. Returns `SR_STATUS_VERIFICATION` on any
 * mismatch; `*certified` reports a reproduced `certified_less` verdict.
 *
 * # Safety
 * `json` must be NUL-terminated; `cfg` null or live; `certified` writable.
 */
enum SrStatus sr_witness_verify(const char *json, const struct SrConfig *cfg, bool *certified);

/**
 * `d = (M + q1/q2)(a-c) + b` and the least integer `s0` beyond which the
 * single crossing sits at `n = M + 1`.
 *
 * # Safety
 * `cfg` null or live; outputs writable.
 */
enum SrStatus sr_one_change_params(uint64_t m,
                                   uint64_t a,
                                   uint64_t b,
                                   uint64_t c,
                                   uint64_t q1,
                                   uint64_t q2,
                                   const struct SrConfig *cfg,
                                   uint64_t *d_out,
                                   int64_t *s0_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGMA_RACE_H */
