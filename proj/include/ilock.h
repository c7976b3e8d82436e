/* C interface to the interlocking table verifier.
 *
 * Every function returns an ilock_status. On failure a description is
 * available from ilock_last_error() until the next call on the same thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with ilock_string_free().
 */
#ifndef ILOCK_H_
#define ILOCK_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ILOCK_API __declspec(dllexport)
#else
#define ILOCK_API __attribute__((visibility("default")))
#endif

typedef enum {
  ILOCK_OK = 0,
  ILOCK_ERR_IO = 1,         /* file could not be read */
  ILOCK_ERR_PARSE = 2,      /* syntax error in an input file */
  ILOCK_ERR_INVALID = 3,    /* well-formed input violating an invariant */
  ILOCK_ERR_ARGUMENT = 4,   /* bad argument: null pointer, unknown key ... */
  ILOCK_ERR_NOT_FOUND = 5,  /* unknown digest */
  ILOCK_ERR_CAP = 6,        /* oracle state cap exceeded */
  ILOCK_ERR_INTERNAL = 7
} ilock_status;

typedef enum { ILOCK_FORMAT_TEXT = 0, ILOCK_FORMAT_MACHINE = 1 } ilock_format;

typedef enum {
  ILOCK_FLANK_PASS = 0,
  ILOCK_FLANK_FAIL = 1,
  ILOCK_FLANK_VACUOUS = 2
} ilock_flank_verdict;

typedef struct ilock_scenario ilock_scenario;
typedef struct ilock_report ilock_report;

typedef struct {
  uint64_t nodes;
  uint64_t arcs;
  uint64_t terminals;
  uint64_t empty_of_trains;
  uint64_t safe_deadlocks;
  uint64_t accident_terminals;
  uint64_t accident_markings;
  uint64_t derailment_markings;
  int incomplete;
  double elapsed_seconds;
} ilock_counts;

ILOCK_API const char* ilock_last_error(void);
ILOCK_API const char* ilock_status_name(ilock_status status);
ILOCK_API void ilock_string_free(char* s);

/* Parses both files and checks the table against the layout. Diagnostics are
 * written one per line to *diagnostics (may be empty). */
ILOCK_API ilock_status ilock_validate_files(const char* layout_path,
                                            const char* table_path,
                                            char** diagnostics,
                                            size_t* error_count,
                                            size_t* warning_count);

ILOCK_API ilock_status ilock_scenario_load(const char* path,
                                           ilock_scenario** out);
/* A scenario with only the queues written in the layout file. */
ILOCK_API ilock_status ilock_scenario_from_files(const char* layout_path,
                                                 const char* table_path,
                                                 ilock_scenario** out);
/* key: "auto", "priorities" or "flank" with value "on"/"off", or
 * "remove_signal" with a comma-separated list ("-" clears it). */
ILOCK_API ilock_status ilock_scenario_set_mode(ilock_scenario* s,
                                               const char* key,
                                               const char* value);
ILOCK_API void ilock_scenario_free(ilock_scenario* s);

/* cap == 0 selects the default state cap. */
ILOCK_API ilock_status ilock_explore(const ilock_scenario* s, uint64_t cap,
                                     ilock_report** out);
ILOCK_API ilock_status ilock_report_counts(const ilock_report* r,
                                           ilock_counts* out);
ILOCK_API ilock_status ilock_report_render(const ilock_report* r,
                                           ilock_format format, char** out);
ILOCK_API ilock_status ilock_report_terminal_table(const ilock_report* r,
                                                   char** out);
/* Shortest firing sequence to the marking with the given 32-digit hex
 * digest, replayed and checked before it is returned. */
ILOCK_API ilock_status ilock_report_trace(const ilock_report* r,
                                          const char* digest_hex, char** out);
ILOCK_API void ilock_report_free(ilock_report* r);

/* Requires at least one removed signal in the scenario. */
ILOCK_API ilock_status ilock_flank_check(const ilock_scenario* s,
                                         uint64_t cap,
                                         ilock_flank_verdict* verdict,
                                         char** rendering);

/* Reference exploration for cross-checking; fails with ILOCK_ERR_CAP above
 * `cap` states (0 selects the default). */
ILOCK_API ilock_status ilock_oracle_counts(const ilock_scenario* s,
                                           uint64_t cap, ilock_counts* out);

#ifdef __cplusplus
}
#endif

#endif /* ILOCK_H_ */
