/* C API for the dr checker/evaluator.
 *
 * Kept in sync with src/lib.rs; regenerate with
 *   cbindgen --config cbindgen.toml --crate dr-ffi --output include/dr.h
 * when cbindgen is available.
 */

#ifndef DR_H
#define DR_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes (mirroring the CLI exit codes). */
#define DR_OK 0
#define DR_REJECTED 1
#define DR_UNKNOWN 2
#define DR_USAGE 64
#define DR_PARSE_ERROR 65

/* Roles. */
#define DR_ROLE_NOM 0
#define DR_ROLE_REP 1

/* Opaque session handle: a parsed, well-formed signature. */
typedef struct DrSession DrSession;

/* Parse and check a signature. Returns NULL on failure and writes a
 * diagnostic to *err_out (free with dr_string_free). */
DrSession *dr_session_open(const char *source, char **err_out);

void dr_session_free(DrSession *session);

/* Check a signature source; per-declaration verdicts go to *report_out. */
int dr_check(const char *source, char **report_out);

/* Typecheck and evaluate expr at a role; fuel 0 means the default
 * (10000 steps). The normal form or diagnostic goes to *out. */
int dr_eval(const DrSession *session, const char *expr, int role,
            uint64_t fuel, char **out);

/* Definitional equality of two expressions at a role: DR_OK equal,
 * DR_REJECTED not equal (or ill-typed), DR_UNKNOWN fuel exhausted. */
int dr_equal(const DrSession *session, const char *expr_a,
             const char *expr_b, int role, uint64_t fuel, char **out);

/* Declared roles still expected by a constant-headed path. */
int dr_roles(const DrSession *session, const char *expr, char **out);

/* Free any string returned through an out-parameter. */
void dr_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* DR_H */
