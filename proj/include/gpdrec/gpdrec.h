#ifndef GPDREC_GPDREC_H
#define GPDREC_GPDREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GPDREC_API __declspec(dllexport)
#else
#define GPDREC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpdrec_status {
  GPDREC_OK = 0,
  GPDREC_PROPERTY_FAILED = 1,
  GPDREC_INVALID_INPUT = 2,
  GPDREC_CAPACITY = 3,
  GPDREC_INTERNAL = 4
} gpdrec_status;

typedef struct gpdrec_session gpdrec_session;

GPDREC_API const char* gpdrec_version(void);

/* Returns NULL only on allocation failure. */
GPDREC_API gpdrec_session* gpdrec_session_new(void);
GPDREC_API void gpdrec_session_free(gpdrec_session* s);

/*
 * Options: cap, seed, seeds (non-negative integers), format ("text" or
 * "machine"), ring ("mod4", "prod2x3"), group ("cyclic2"), engine ("brute",
 * "generated", "both"), and the switches build-groupoid, verify-ck,
 * hypothesis ("1"/"0", "true"/"false").
 */
GPDREC_API gpdrec_status gpdrec_set_option(gpdrec_session* s, const char* key, const char* value);
GPDREC_API void gpdrec_clear_options(gpdrec_session* s);

/* Appends a JSON document (instance, presentation, graph, semigroup, action
 * or report).  Syntax errors return GPDREC_INVALID_INPUT. */
GPDREC_API gpdrec_status gpdrec_add_input(gpdrec_session* s, const char* json_text);
GPDREC_API void gpdrec_clear_inputs(gpdrec_session* s);

/* Runs a subcommand over the inputs and options; the result is the exit
 * code of the report. */
GPDREC_API gpdrec_status gpdrec_run(gpdrec_session* s, const char* command);

/* Owned by the session, valid until the next run or free. */
GPDREC_API const char* gpdrec_report(const gpdrec_session* s);
/* "presentation" (scramble) or "groupoid" (reconstruct, germ); NULL if absent. */
GPDREC_API const char* gpdrec_artifact(const gpdrec_session* s, const char* name);
GPDREC_API const char* gpdrec_last_error(const gpdrec_session* s);

/* Exhaustive unit census of R[G] for ring and group short forms. */
GPDREC_API gpdrec_status gpdrec_unit_census(const char* ring, const char* group, size_t* units,
                                            size_t* trivial_units);

/* Local bisection hypothesis for an instance; *holds is 1 or 0. */
GPDREC_API gpdrec_status gpdrec_lbh(gpdrec_session* s, const char* instance_json, int* holds);

#ifdef __cplusplus
}
#endif

#endif
