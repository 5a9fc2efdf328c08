#ifndef SCPIR_H
#define SCPIR_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ScpirMethod {
  SCPIR_METHOD_EQUAL = 0,
  SCPIR_METHOD_GREEDY = 1,
  SCPIR_METHOD_IMPROVED = 2,
} ScpirMethod;

typedef enum ScpirStatus {
  SCPIR_STATUS_OK = 0,
  SCPIR_STATUS_NULL_POINTER = 1,
  SCPIR_STATUS_INVALID_ARGUMENT = 2,
  SCPIR_STATUS_DEGENERATE = 3,
  SCPIR_STATUS_DIVISIBILITY = 4,
  SCPIR_STATUS_BUDGET_EXCEEDED = 5,
  SCPIR_STATUS_PROTOCOL_VIOLATION = 6,
  SCPIR_STATUS_BUFFER_TOO_SMALL = 7,
  SCPIR_STATUS_PANIC = 8,
} ScpirStatus;

// A planned deployment with its seeded file library.
typedef struct ScpirScheme ScpirScheme;

// A storage design array.
typedef struct ScpirSda ScpirSda;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread.
//
// # Safety
// `buf` must be valid for `cap` bytes; `out_len` may be null.
enum ScpirStatus scpir_last_error_message(char *buf, size_t cap, size_t *out_len);

// # Safety
// `out` must be a valid pointer; the handle it receives is owned by the
// caller.
enum ScpirStatus scpir_sda_build(size_t n,
                                 size_t m,
                                 enum ScpirMethod method,
                                 struct ScpirSda **out);

// # Safety
// `sda` must come from `scpir_sda_build` and not be used afterwards.
void scpir_sda_free(struct ScpirSda *sda);

// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_sda_eta(const struct ScpirSda *sda, size_t *out);

// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_sda_dims(const struct ScpirSda *sda, size_t *rows, size_t *cols);

// Zero-based cell lookup.
//
// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_sda_cell(const struct ScpirSda *sda, size_t row, size_t col, bool *out);

// ASCII form, NUL-terminated.
//
// # Safety
// `buf` must be valid for `cap` bytes; `out_len` may be null.
enum ScpirStatus scpir_sda_to_ascii(const struct ScpirSda *sda,
                                    char *buf,
                                    size_t cap,
                                    size_t *out_len);

// # Safety
// `out` must be valid.
enum ScpirStatus scpir_eta_recursion(size_t n, size_t m, size_t *out);

// # Safety
// `out` must be valid.
enum ScpirStatus scpir_eta_lower_bound(size_t n, size_t m, size_t *out);

// Builds a scheme with files of `l_mult * N(M-1)/gcd(N,M)` bytes.
//
// # Safety
// `out` must be valid; the handle it receives is owned by the caller.
enum ScpirStatus scpir_scheme_new(size_t n,
                                  size_t m,
                                  size_t k,
                                  size_t l_mult,
                                  enum ScpirMethod method,
                                  uint64_t seed,
                                  struct ScpirScheme **out);

// # Safety
// `scheme` must come from `scpir_scheme_new` and not be used afterwards.
void scpir_scheme_free(struct ScpirScheme *scheme);

// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_scheme_file_len(const struct ScpirScheme *scheme, size_t *out);

// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_scheme_subpacketization(const struct ScpirScheme *scheme, size_t *out);

// Expected download per retrieval as a reduced fraction.
//
// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_scheme_average_download(const struct ScpirScheme *scheme,
                                               uint64_t *numer,
                                               uint64_t *denom);

// Retrieves file `theta` (1-based) with base vectors drawn from `seed`,
// writing the decoded file into `buf`.
//
// # Safety
// `buf` must be valid for `cap` bytes; `downloaded` may be null.
enum ScpirStatus scpir_scheme_retrieve(const struct ScpirScheme *scheme,
                                       size_t theta,
                                       uint64_t seed,
                                       uint8_t *buf,
                                       size_t cap,
                                       uint64_t *downloaded);

// Copies file `theta` (1-based) of the library into `buf`.
//
// # Safety
// `buf` must be valid for `cap` bytes.
enum ScpirStatus scpir_scheme_file(const struct ScpirScheme *scheme,
                                   size_t theta,
                                   uint8_t *buf,
                                   size_t cap);

// Runs every exhaustive audit; `pass` receives the overall verdict.
//
// # Safety
// Pointers must be valid.
enum ScpirStatus scpir_scheme_audit(const struct ScpirScheme *scheme, bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCPIR_H */
