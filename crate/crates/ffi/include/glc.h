#ifndef GLC_H
#define GLC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call; the values match the exit codes of `glc`.
typedef enum GlcStatus {
  GLC_STATUS_OK = 0,
  GLC_STATUS_TYPE_ERROR = 1,
  GLC_STATUS_PARSE_ERROR = 2,
  GLC_STATUS_BUDGET_EXCEEDED = 3,
  GLC_STATUS_PROPERTY_FAILURE = 4,
  GLC_STATUS_INVALID_ARGUMENT = 5,
  GLC_STATUS_INTERNAL = 6,
} GlcStatus;

// A checked program: the prelude plus any parsed definitions.
typedef struct GlcProgram GlcProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, empty after success.
// The pointer is valid until the next call on this thread.
const char *glc_last_error(void);

// Load the shipped prelude.
//
// # Safety
// `out` must be valid for writes.
enum GlcStatus glc_load_prelude(struct GlcProgram **out);

// Parse and check `source` on top of the prelude.
//
// # Safety
// `source` must be a NUL-terminated string and `out` valid for writes.
enum GlcStatus glc_parse(const char *source, struct GlcProgram **out);

// Release a program. Null is ignored.
//
// # Safety
// `p` must come from this library and not be used afterwards.
void glc_program_free(struct GlcProgram *p);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void glc_string_free(char *s);

// Write the first `n` elements of the stream `name` to `buf`.
//
// # Safety
// `buf` must be valid for `n` writes.
enum GlcStatus glc_take(const struct GlcProgram *p,
                        const char *name,
                        uintptr_t n,
                        uint64_t budget,
                        uint64_t *buf);

// Evaluate `name` and print its value.
//
// # Safety
// Pointers must be valid; `out` receives a string to free.
enum GlcStatus glc_eval(const struct GlcProgram *p, const char *name, uint64_t budget, char **out);

// Render the denotation of `name` at `index`.
//
// # Safety
// Pointers must be valid; `out` receives a string to free.
enum GlcStatus glc_denote(const struct GlcProgram *p,
                          const char *name,
                          uintptr_t index,
                          char **out);

// Check that `name` is related to its denotation at `index`. A failed
// check returns `PropertyFailure`; `exact` reports whether no sampling
// was needed.
//
// # Safety
// Pointers must be valid; `exact` may be null.
enum GlcStatus glc_adequacy(const struct GlcProgram *p,
                            const char *name,
                            uintptr_t index,
                            bool *exact);

// Compile a stream-equation specification. With `depth > 0` the equations
// are checked on sample streams to that depth. `out` receives the
// compiled definitions.
//
// # Safety
// Pointers must be valid; `out` receives a string to free.
enum GlcStatus glc_bde(const char *spec, uintptr_t depth, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLC_H */
