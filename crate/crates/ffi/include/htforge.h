#ifndef HTFORGE_H
#define HTFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call. The numeric values of `GateRejected`,
// `VerificationFailed` and `BudgetExceeded` match the CLI exit codes.
typedef enum {
  HTFORGE_STATUS_OK = 0,
  HTFORGE_STATUS_INVALID_ARGUMENT = 1,
  HTFORGE_STATUS_GATE_REJECTED = 2,
  HTFORGE_STATUS_VERIFICATION_FAILED = 3,
  HTFORGE_STATUS_BUDGET_EXCEEDED = 4,
  HTFORGE_STATUS_PARSE_ERROR = 5,
  HTFORGE_STATUS_INTERNAL = 6,
} HtforgeStatus;

// Opaque certificate handle.
typedef struct HtforgeCertificate HtforgeCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Synthesizes a certificate for `G * H` with factor specs such as `c2`,
// `c3` or `z`. On success `*out` receives a new handle.
//
// # Safety
// `g` and `h` must be NUL-terminated strings; `out` must be writable.
HtforgeStatus htforge_synthesize(const char *g,
                                 const char *h,
                                 uint32_t k_max,
                                 uint32_t word_len_max,
                                 uint32_t window,
                                 HtforgeCertificate **out);

// Parses certificate text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
HtforgeStatus htforge_certificate_parse(const char *text, HtforgeCertificate **out);

// Re-checks every witness. Returns `VerificationFailed` if any fails;
// `failed`, when not NULL, receives the number of failing witnesses.
//
// # Safety
// `cert` must be a live handle; `failed` must be NULL or writable.
HtforgeStatus htforge_certificate_verify(const HtforgeCertificate *cert, size_t *failed);

// Serializes the certificate; release the text with
// [`htforge_string_free`].
//
// # Safety
// `cert` must be a live handle; `out` must be writable.
HtforgeStatus htforge_certificate_to_string(const HtforgeCertificate *cert, char **out);

// Number of witnesses, or 0 for a NULL handle.
//
// # Safety
// `cert` must be NULL or a live handle.
size_t htforge_certificate_witness_count(const HtforgeCertificate *cert);

// # Safety
// `cert` must be NULL or a handle not freed before.
void htforge_certificate_free(HtforgeCertificate *cert);

// # Safety
// `s` must be NULL or a string returned by this library, not freed before.
void htforge_string_free(char *s);

// Message of the last failed call on this thread, or NULL. Valid until
// the next call into the library on the same thread.
const char *htforge_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HTFORGE_H */
