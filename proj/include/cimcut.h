#ifndef CIMCUT_H
#define CIMCUT_H

/* C interface to the MAX-CUT solver suite: graph handling, the coherent
 * Ising machine simulator and classical baselines, the brute-force oracle,
 * and the benchmark harness. All functions returning cimcut_status leave a
 * human-readable message in cimcut_last_error() on failure. Strings returned
 * through char** are heap-allocated; release them with cimcut_string_free().
 * Handles are not thread-safe individually, but distinct handles may be used
 * from distinct threads.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cimcut_status {
    CIMCUT_OK = 0,
    CIMCUT_ERROR_INVALID_ARGUMENT = 1,
    CIMCUT_ERROR_PARSE = 2,
    CIMCUT_ERROR_IO = 3,
    CIMCUT_ERROR_DIVERGED = 4,
    CIMCUT_ERROR_NO_CONVERGENCE = 5,
    CIMCUT_ERROR_TOO_LARGE = 6,
    CIMCUT_ERROR_INTERNAL = 7
} cimcut_status;

typedef struct cimcut_graph cimcut_graph;
typedef struct cimcut_result cimcut_result;

/* Thread-local message for the most recent failure in this thread. Never
 * NULL; empty when the last call succeeded. */
const char* cimcut_last_error(void);

void cimcut_string_free(char* s);

/* ---- graphs -------------------------------------------------------- */

/* Reads a G-set text file: "N m" header, then m lines "i j w", 1-based. */
cimcut_status cimcut_graph_load(const char* path, cimcut_graph** out);

/* Same format from memory. */
cimcut_status cimcut_graph_parse(const char* text, cimcut_graph** out);

/* generator_json: {"kind": "complete-pm1" | "gnp", "n": ..., "seed": ...,
 *                  "edge_prob": ..., "weights": "pm1"|"unit"|"real"} */
cimcut_status cimcut_graph_generate(const char* generator_json,
                                    cimcut_graph** out);

cimcut_status cimcut_graph_write(const cimcut_graph* g, const char* path);

int32_t cimcut_graph_vertices(const cimcut_graph* g);
int64_t cimcut_graph_edges(const cimcut_graph* g);

void cimcut_graph_free(cimcut_graph* g);

/* ---- solving ------------------------------------------------------- */

/* solver_json: {"kind": "cim"|"sa"|"bls"|"sg3"|"gw", "params": {...}}.
 * Unknown parameter keys are rejected. */
cimcut_status cimcut_solve(const cimcut_graph* g, const char* solver_json,
                           uint64_t seed, cimcut_result** out);

double cimcut_result_cut(const cimcut_result* r);
double cimcut_result_energy(const cimcut_result* r);
/* +1 or -1; vertex out of range returns 0. */
int32_t cimcut_result_spin(const cimcut_result* r, int32_t vertex);
/* Borrowed pointer, valid until the result is freed: JSON with solver
 * details (wall_seconds plus solver-specific fields). */
const char* cimcut_result_details(const cimcut_result* r);
/* Full trace as CSV text (work,seconds,best_energy,current_energy). */
cimcut_status cimcut_result_trace_csv(const cimcut_result* r, char** out);

void cimcut_result_free(cimcut_result* r);

/* ---- oracle -------------------------------------------------------- */

/* Exhaustive optimum for graphs up to 24 vertices; larger graphs return
 * CIMCUT_ERROR_TOO_LARGE. Reports {cut, energy, optima_count,
 * optima_truncated, optima: [spin strings]} as JSON. */
cimcut_status cimcut_brute_force(const cimcut_graph* g, uint64_t optima_limit,
                                 char** report_json);

/* ---- harness ------------------------------------------------------- */

/* Runs a benchmark spec (JSON, see docs) and writes summary.csv and friends
 * under its output_dir; returns the report as JSON. */
cimcut_status cimcut_bench_run(const char* spec_json, char** report_json);

/* Same for a scaling spec over instance sizes. */
cimcut_status cimcut_scaling_run(const char* spec_json, char** report_json);

/* Counter-based seed fan-out used by the harness, exposed so external
 * drivers can reproduce per-trial seeds. */
uint64_t cimcut_derive_seed(uint64_t master, const char* tag, uint64_t index);

#ifdef __cplusplus
}
#endif

#endif /* CIMCUT_H */
