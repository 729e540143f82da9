#ifndef MVL_MVL_H
#define MVL_MVL_H

/* C interface to the lattice and cognitive-map library.
 *
 * Every call returns an mvl_status. On failure the message of the last error
 * on the calling thread is available from mvl_last_error(). Strings returned
 * through char** out parameters are owned by the caller and released with
 * mvl_string_free(). Handles are released with their matching *_free call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(MVL_BUILDING_LIBRARY)
#define MVL_API __attribute__((visibility("default")))
#else
#define MVL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mvl_status {
  MVL_OK = 0,
  MVL_E_NOT_A_LATTICE = 10,
  MVL_E_CYCLE_IN_ORDER,
  MVL_E_DUPLICATE_LABEL,
  MVL_E_BAD_MONOID,
  MVL_E_LATTICE_TOO_LARGE,
  MVL_E_FOREIGN_ELEMENT,
  MVL_E_UNKNOWN_LABEL,
  MVL_E_NOT_BROUWER,
  MVL_E_NOT_RESIDUATED,
  MVL_E_NOT_ATOM_REPRESENTABLE,
  MVL_E_SUM_NOT_IN_LATTICE,
  MVL_E_UNINTERPRETABLE_TERM,
  MVL_E_UNKNOWN_CONSTANT,
  MVL_E_MISSING_VARIABLE,
  MVL_E_MISMATCHED_SCALES,
  MVL_E_MISMATCHED_CARRIERS,
  MVL_E_FEWER_THAN_TWO_SETS,
  MVL_E_EMPTY_ASSESSMENT,
  MVL_E_NOT_CONVERGED,
  MVL_E_INVALID_SPEC,
  MVL_E_SYNTAX,
  MVL_E_UNRESOLVED_REFERENCE,
  MVL_E_UNKNOWN_FIXTURE,
  MVL_E_INVALID_ARGUMENT,
  MVL_E_INTERNAL = 99
} mvl_status;

typedef struct mvl_document mvl_document;
typedef struct mvl_lattice mvl_lattice;

typedef uint16_t mvl_element;

typedef enum mvl_combine { MVL_COMBINE_JOIN = 0, MVL_COMBINE_SUM = 1 } mvl_combine;

typedef enum mvl_weights {
  MVL_WEIGHTS_SINGLE = 0,
  MVL_WEIGHTS_ENUMERATE = 1,
  MVL_WEIGHTS_PESSIMISTIC = 2,
  MVL_WEIGHTS_OPTIMISTIC = 3
} mvl_weights;

typedef enum mvl_format { MVL_FORMAT_TSV = 0, MVL_FORMAT_MARKDOWN = 1, MVL_FORMAT_JSON = 2 } mvl_format;

typedef enum mvl_mean_kind { MVL_MEAN_PESSIMISTIC = 0, MVL_MEAN_OPTIMISTIC = 1 } mvl_mean_kind;

typedef struct mvl_run_options {
  mvl_combine combine;
  mvl_weights weights;
  size_t matrix; /* 0-based, used with MVL_WEIGHTS_SINGLE */
  int max_iter;
  int branch_depth;
  mvl_format format;
} mvl_run_options;

/* Name of a status code, e.g. "NotConverged". */
MVL_API const char* mvl_status_name(mvl_status status);
/* Message of the last failure on this thread; empty after a success. */
MVL_API const char* mvl_last_error(void);
MVL_API void mvl_string_free(char* s);
MVL_API void mvl_run_options_init(mvl_run_options* options);

/* Documents are parsed and fully validated on load. */
MVL_API mvl_status mvl_document_parse(const char* text, size_t length, mvl_document** out);
MVL_API mvl_status mvl_document_load_fixture(const char* name, mvl_document** out);
MVL_API void mvl_document_free(mvl_document* doc);
MVL_API mvl_status mvl_document_serialize(const mvl_document* doc, char** out);
MVL_API mvl_status mvl_document_to_json(const mvl_document* doc, char** out);
/* Newline-separated block names of one kind ("lattice", "term", "set",
 * "mvset", "map") in declaration order. */
MVL_API mvl_status mvl_document_names(const mvl_document* doc, const char* kind, char** out);
/* Newline-separated built-in fixture names. */
MVL_API mvl_status mvl_fixture_names(char** out);

/* NULL picks the last declared lattice that is not a factor of a product. */
MVL_API mvl_status mvl_document_lattice(const mvl_document* doc, const char* name, mvl_lattice** out);
MVL_API void mvl_lattice_free(mvl_lattice* l);
MVL_API size_t mvl_lattice_size(const mvl_lattice* l);
/* Valid while the handle lives; NULL for an out-of-range element. */
MVL_API const char* mvl_lattice_label(const mvl_lattice* l, mvl_element e);
MVL_API mvl_status mvl_lattice_find(const mvl_lattice* l, const char* label, mvl_element* out);
MVL_API mvl_element mvl_lattice_top(const mvl_lattice* l);
MVL_API mvl_element mvl_lattice_bottom(const mvl_lattice* l);
MVL_API mvl_status mvl_lattice_leq(const mvl_lattice* l, mvl_element a, mvl_element b, int* out);
MVL_API mvl_status mvl_lattice_join(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* out);
MVL_API mvl_status mvl_lattice_meet(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* out);
MVL_API mvl_status mvl_lattice_implies(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* out);
/* Right residual a→b and left residual b←a. */
MVL_API mvl_status mvl_lattice_residuals(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* right,
                                         mvl_element* left);
MVL_API mvl_status mvl_lattice_ring_sum(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* out);
MVL_API mvl_status mvl_lattice_set_difference(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* out);
/* Structure report: size, distributive, atomic, residuated, integrally closed, ... */
MVL_API mvl_status mvl_lattice_report(const mvl_lattice* l, char** out);
/* Elements with heights and covers. */
MVL_API mvl_status mvl_lattice_show(const mvl_lattice* l, char** out);

/* Evaluates a term; `bindings` is "x=a,y=b". Writes the result label.
 * `lattice` defaults as in mvl_document_lattice. */
MVL_API mvl_status mvl_eval(const mvl_document* doc, const char* term, const char* lattice, const char* bindings,
                            char** out);
/* Extends a term over named mvsets; `classical` selects the min-based rule. */
MVL_API mvl_status mvl_extend(const mvl_document* doc, const char* term, const char* const* mvsets, size_t count,
                              int classical, char** out);
MVL_API mvl_status mvl_mean(const mvl_document* doc, mvl_mean_kind kind, const char* const* sets, size_t count,
                            char** out);
MVL_API mvl_status mvl_diff(const mvl_document* doc, const char* a, const char* b, char** out);

/* Runs a map (NULL picks the first declared). The trace and a one-line status
 * are written even when the run does not converge, in which case the return
 * value is MVL_E_NOT_CONVERGED. */
MVL_API mvl_status mvl_map_run(const mvl_document* doc, const char* map, const mvl_run_options* options,
                               char** trace, char** status);

#ifdef __cplusplus
}
#endif

#endif
