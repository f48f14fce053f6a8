/* causal: end-to-end causal inference (model -> identify -> estimate ->
 * refute) behind a C ABI.
 *
 * Every function that can fail returns a causal_status; CAUSAL_OK means
 * success and anything else leaves a message in causal_last_error().
 * Objects come back as opaque handles that must be released with the
 * matching *_free function. Strings returned as `const char*` are owned by
 * the handle they came from; strings returned through `char**` must be
 * released with causal_string_free.
 */
#ifndef CAUSAL_CAUSAL_H
#define CAUSAL_CAUSAL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum causal_status {
    CAUSAL_OK = 0,
    CAUSAL_ERROR = 1,
    CAUSAL_NOT_IDENTIFIED = 2
} causal_status;

typedef struct causal_graph causal_graph;
typedef struct causal_dataset causal_dataset;
typedef struct causal_report causal_report;

const char* causal_version(void);

/* Message from the most recent failing call on this thread ("" if none). */
const char* causal_last_error(void);

void causal_string_free(char* text);

/* --- graphs ------------------------------------------------------------ */

/* format: "dot", "gml" or "auto" (sniffs the first word). */
causal_status causal_graph_parse(const char* text, const char* format, causal_graph** out);
void causal_graph_free(causal_graph* graph);
size_t causal_graph_node_count(const causal_graph* graph);
size_t causal_graph_edge_count(const causal_graph* graph);
causal_status causal_graph_render_dot(const causal_graph* graph, char** out_text);

/* --- datasets ----------------------------------------------------------- */

causal_status causal_dataset_load_csv(const char* path, const char* treatment,
                                      const char* outcome, causal_dataset** out);
void causal_dataset_free(causal_dataset* dataset);
size_t causal_dataset_num_rows(const causal_dataset* dataset);
size_t causal_dataset_num_columns(const causal_dataset* dataset);

/* --- identification ----------------------------------------------------- */

/* JSON: {"identified": bool, "estimands": [...]}. Returns
 * CAUSAL_NOT_IDENTIFIED (with valid JSON) when no strategy applies. */
causal_status causal_identify(const causal_graph* graph, const char* treatment,
                              const char* outcome, char** out_json);

/* --- batch pipeline ------------------------------------------------------ */

/* argv holds the `causal analyze` flags (no subcommand word). On success or
 * CAUSAL_NOT_IDENTIFIED a report handle is produced; CAUSAL_ERROR leaves
 * *out untouched. */
causal_status causal_analyze_args(int argc, const char* const* argv, causal_report** out);

const char* causal_report_json(const causal_report* report);
const char* causal_report_text(const causal_report* report);
/* Rendered in the format the configuration asked for. */
const char* causal_report_rendered(const causal_report* report);
/* Configured output path ("" when the report goes to stdout). */
const char* causal_report_output_path(const causal_report* report);
void causal_report_free(causal_report* report);

/* argv holds the `causal generate` flags: --spec-json PATH --out-prefix P.
 * Writes <prefix>.csv, .dot, .gml and .truth.json. */
causal_status causal_generate_args(int argc, const char* const* argv);

#ifdef __cplusplus
}
#endif

#endif /* CAUSAL_CAUSAL_H */
