#ifndef LTL_TASKS_H
#define LTL_TASKS_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every fallible call.
typedef enum LtltStatus {
  LTLT_STATUS_OK = 0,
  LTLT_STATUS_NULL_POINTER = 1,
  LTLT_STATUS_INVALID_UTF8 = 2,
  LTLT_STATUS_SYNTAX = 3,
  LTLT_STATUS_UNKNOWN_PROPOSITION = 4,
  LTLT_STATUS_INVALID_ARGUMENT = 5,
  LTLT_STATUS_CAP_EXCEEDED = 6,
  LTLT_STATUS_RESOLVED = 7,
  LTLT_STATUS_PANIC = 8,
  LTLT_STATUS_OTHER = 9,
} LtltStatus;

// Rendering style for [`ltlt_formula_render`].
typedef enum LtltNotation {
  LTLT_NOTATION_INFIX = 0,
  LTLT_NOTATION_PREFIX = 1,
} LtltNotation;

// Opaque handle to an immutable formula.
typedef struct LtltFormula LtltFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *ltlt_last_error(void);

// Parses infix text. The formula is kept as written; progression
// results are simplified.
//
// # Safety
// `text` is a valid NUL-terminated string; `out` is writable.
enum LtltStatus ltlt_formula_parse(const char *text, struct LtltFormula **out);

// Releases a handle. Null is a no-op.
//
// # Safety
// `f` is null or a handle not yet freed.
void ltlt_formula_free(struct LtltFormula *f);

// Renders a formula; free the result with [`ltlt_string_free`].
//
// # Safety
// `f` is a live handle; `out` is writable.
enum LtltStatus ltlt_formula_render(const struct LtltFormula *f,
                                    enum LtltNotation notation,
                                    char **out);

// Progresses `f` by one truth assignment, given as comma- or
// space-separated proposition names (`""` or `"{}"` for none). The
// input handle is left unchanged; the result is a new handle.
//
// # Safety
// `f` is a live handle, `assignment` a valid string, `out` writable.
enum LtltStatus ltlt_formula_progress(const struct LtltFormula *f,
                                      const char *assignment,
                                      struct LtltFormula **out);

// Reward for reaching this formula: 1 if it is `true`, −1 if `false`,
// 0 otherwise. A null handle yields 0.
//
// # Safety
// `f` is null or a live handle.
int32_t ltlt_formula_reward(const struct LtltFormula *f);

// Number of AST nodes.
//
// # Safety
// `f` is null or a live handle.
size_t ltlt_formula_size(const struct LtltFormula *f);

// Labeled AST graph as JSON with one-hot node features. `vocab` is a
// comma-separated proposition list or null for the formula's own.
//
// # Safety
// `f` is a live handle, `vocab` null or a valid string, `out` writable.
enum LtltStatus ltlt_formula_graph_json(const struct LtltFormula *f, const char *vocab, char **out);

// Per-proposition effect (`progress`, `no_effect`, `falsify`) as a JSON
// object. Fails with `Resolved` on `true`/`false`.
//
// # Safety
// As [`ltlt_formula_graph_json`].
enum LtltStatus ltlt_formula_classify_json(const struct LtltFormula *f,
                                           const char *vocab,
                                           char **out);

// Exact number of distinct tasks of a named preset, as a decimal string.
//
// # Safety
// `preset_name` is a valid string; `out` is writable.
enum LtltStatus ltlt_count_tasks(const char *preset_name, char **out);

// Releases a string returned by this library. Null is a no-op.
//
// # Safety
// `s` is null or a string from this library not yet freed.
void ltlt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTL_TASKS_H */
