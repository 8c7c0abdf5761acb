#ifndef QCONTEXT_H
#define QCONTEXT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_UTF8 = 2,
  QC_STATUS_PARSE = 3,
  QC_STATUS_DIMENSION_MISMATCH = 4,
  QC_STATUS_INVALID_ARGUMENT = 5,
  QC_STATUS_NOT_UNITARY = 6,
  QC_STATUS_VALIDATION = 7,
  QC_STATUS_SIZE_BOUND = 8,
  QC_STATUS_LP_INDETERMINATE = 9,
  QC_STATUS_STRICTNESS_FAILS = 10,
  QC_STATUS_UNKNOWN_FAMILY = 11,
  QC_STATUS_PANIC = 12,
} QcStatus;

// Position in the contextuality hierarchy, weakest first.
typedef enum QcLabel {
  QC_LABEL_NON_CONTEXTUAL = 0,
  QC_LABEL_WEAK = 1,
  QC_LABEL_LOGICAL = 2,
  QC_LABEL_STRONG = 3,
} QcLabel;

// Class predicted from a polynomial's algebraic normal form.
typedef enum QcPredicted {
  QC_PREDICTED_NON_CONTEXTUAL = 0,
  QC_PREDICTED_WEAK = 1,
  QC_PREDICTED_AT_LEAST_LOGICAL = 2,
  QC_PREDICTED_STRONG = 3,
} QcPredicted;

// An empirical model: one probability row per measurement context.
typedef struct QcModel QcModel;

// A parsed state together with the family it came from.
typedef struct QcState QcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next library call on the same thread.
const char *qc_last_error(void);

// Library version as a static nul-terminated string.
const char *qc_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void qc_string_free(char *s);

// Parses a state spec such as `dicke:3,2`, `ghz:3`, `bell:+` or `fd:q1q2`.
//
// # Safety
// `spec` must be a nul-terminated string; `out` must be writable.
enum QcStatus qc_state_parse(const char *spec, struct QcState **out);

// # Safety
// `state` must be null or a handle from [`qc_state_parse`], not yet freed.
void qc_state_free(struct QcState *state);

// Number of qubits, or 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
uint32_t qc_state_n_qubits(const struct QcState *state);

// Builds the empirical model of `state`. `observables` uses the CLI syntax
// (`Y/Z`, or one `first/second` pair per party); null selects the family preset.
//
// # Safety
// `state` must be a live handle, `observables` null or nul-terminated, `out` writable.
enum QcStatus qc_model_build(const struct QcState *state,
                             const char *observables,
                             struct QcModel **out);

// Reads a model from its JSON form.
//
// # Safety
// `json` must be nul-terminated; `out` writable.
enum QcStatus qc_model_from_json(const char *json, struct QcModel **out);

// Writes the JSON form of `model` to `out`; free it with [`qc_string_free`].
//
// # Safety
// `model` must be a live handle; `out` writable.
enum QcStatus qc_model_to_json(const struct QcModel *model, char **out);

// # Safety
// `model` must be null or a live handle.
void qc_model_free(struct QcModel *model);

// Places `model` in the hierarchy. `consistent`, if non-null, receives the
// number of global assignments consistent with the support.
//
// # Safety
// `model` must be a live handle; `label` writable; `consistent` null or writable.
enum QcStatus qc_classify(const struct QcModel *model, enum QcLabel *label, uint64_t *consistent);

// Exact logical Bell violation of the Dicke state S(n,k) under X/Z, as a
// reduced fraction `num/den` written to `out` (free with [`qc_string_free`]).
//
// # Safety
// `out` must be writable.
enum QcStatus qc_dicke_violation(uint32_t n, uint32_t k, char **out);

// Predicted class of the functionally dependent state of `poly` (ANF text,
// e.g. `q1q2 + q3`).
//
// # Safety
// `poly` must be nul-terminated; `out` writable.
enum QcStatus qc_poly_predicted_class(const char *poly, enum QcPredicted *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCONTEXT_H */
