#ifndef NONCLASH_H
#define NONCLASH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every ABI entry point.
typedef enum NcStatus {
  // Success (for decision calls: feasible).
  NC_STATUS_OK = 0,
  // The instance is infeasible at the requested dimension, or the map has
  // conflicts.
  NC_STATUS_INFEASIBLE = 1,
  // Null pointer or otherwise invalid argument.
  NC_STATUS_INVALID_ARGUMENT = 2,
  // Input text failed to parse; see `nc_last_error_message`.
  NC_STATUS_PARSE_ERROR = 3,
  // Unexpected internal failure.
  NC_STATUS_INTERNAL = 4,
} NcStatus;

typedef struct NcFamily NcFamily;

typedef struct NcGraph NcGraph;

typedef struct NcMap NcMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *nc_last_error_message(void);

// Parses the graph text format into a new handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum NcStatus nc_graph_parse(const char *text, struct NcGraph **out);

// # Safety
// `graph` must come from `nc_graph_parse` and not be freed twice.
void nc_graph_free(struct NcGraph *graph);

// # Safety
// `graph` must be a live handle or null.
size_t nc_graph_vertex_count(const struct NcGraph *graph);

// # Safety
// `graph` must be a live handle or null.
size_t nc_graph_edge_count(const struct NcGraph *graph);

// Builds the family of all balls of the graph.
//
// # Safety
// `graph` must be a live handle and `out` a valid pointer.
enum NcStatus nc_family_strict(const struct NcGraph *graph, struct NcFamily **out);

// Parses the ball-family text format (either `STRICT` or center/radius
// lines) against the graph.
//
// # Safety
// `graph` must be a live handle, `text` a valid NUL-terminated string, and
// `out` a valid pointer.
enum NcStatus nc_family_parse(const struct NcGraph *graph, const char *text, struct NcFamily **out);

// # Safety
// `family` must come from a family constructor and not be freed twice.
void nc_family_free(struct NcFamily *family);

// # Safety
// `family` must be a live handle or null.
size_t nc_family_ball_count(const struct NcFamily *family);

// Searches for a teaching map of dimension at most `k`. On `Ok` and when
// `out_map` is non-null, stores a fresh map handle there.
//
// # Safety
// `family` must be a live handle; `out_map` may be null.
enum NcStatus nc_solve(const struct NcFamily *family, size_t k, struct NcMap **out_map);

// Least feasible dimension plus a witness map.
//
// # Safety
// `family` must be a live handle; `out_dimension` and `out_map` may be null.
enum NcStatus nc_min_dimension(const struct NcFamily *family,
                               size_t *out_dimension,
                               struct NcMap **out_map);

// Solves through the kernelization pipeline. `retain` = 0 selects the
// provable retention bound; any other value keeps that many twins per class
// (minimum 3).
//
// # Safety
// `family` must be a live handle; `out_map` may be null.
enum NcStatus nc_fpt_solve(const struct NcFamily *family,
                           size_t k,
                           size_t retain,
                           struct NcMap **out_map);

// Checks the non-clashing condition; `Ok` when conflict-free, `Infeasible`
// with the pair count in `out_conflicts` otherwise.
//
// # Safety
// `family` and `map` must be live handles; `out_conflicts` may be null.
enum NcStatus nc_verify(const struct NcFamily *family,
                        const struct NcMap *map,
                        size_t *out_conflicts);

// Parses a teaching-map JSON document against the family.
//
// # Safety
// `family` must be a live handle, `text` a valid NUL-terminated string, and
// `out` a valid pointer.
enum NcStatus nc_map_parse(const struct NcFamily *family, const char *text, struct NcMap **out);

// Serializes a map to its JSON format; free the result with
// `nc_string_free`. Returns null on failure.
//
// # Safety
// `family` and `map` must be live handles.
char *nc_map_to_json(const struct NcFamily *family, const struct NcMap *map);

// # Safety
// `map` must be a live handle or null.
size_t nc_map_dimension(const struct NcMap *map);

// # Safety
// `map` must come from a map constructor and not be freed twice.
void nc_map_free(struct NcMap *map);

// Releases a string returned by `nc_map_to_json`.
//
// # Safety
// `s` must come from this library and not be freed twice.
void nc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONCLASH_H */
