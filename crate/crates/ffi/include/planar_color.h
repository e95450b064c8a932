#ifndef PLANAR_COLOR_H
#define PLANAR_COLOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_VERIFICATION_FAILED = 1,
  PC_STATUS_INPUT_ERROR = 2,
  PC_STATUS_INTERNAL_ERROR = 3,
  PC_STATUS_NULL_ARGUMENT = 4,
  PC_STATUS_PANIC = 5,
} PcStatus;

/**
 * The result of a coloring run.
 */
typedef struct PcColoring PcColoring;

/**
 * An undirected simple graph on 64-bit vertex ids.
 */
typedef struct PcGraph PcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *pc_last_error(void);

/**
 * Creates an empty graph.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle.
 */
enum PcStatus pc_graph_new(struct PcGraph **out);

/**
 * Parses a graph from JSON or edge-list text.
 *
 * # Safety
 * `text` must be null or a nul-terminated string; `out` as for
 * [`pc_graph_new`].
 */
enum PcStatus pc_graph_parse(const char *text, struct PcGraph **out);

/**
 * Generates a graph from a named family such as `"grid"`.
 *
 * # Safety
 * `family` must be null or a nul-terminated string; `out` as for
 * [`pc_graph_new`].
 */
enum PcStatus pc_graph_generate(const char *family, size_t n, uint64_t seed, struct PcGraph **out);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
enum PcStatus pc_graph_add_vertex(struct PcGraph *g, uint64_t v);

/**
 * Adds the edge `{u, v}`, creating missing endpoints.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
enum PcStatus pc_graph_add_edge(struct PcGraph *g, uint64_t u, uint64_t v);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t pc_graph_vertex_count(const struct PcGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t pc_graph_edge_count(const struct PcGraph *g);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void pc_graph_free(struct PcGraph *g);

/**
 * Colors `g` with `palette` colors: 4 for triangle-free planar graphs, 6 for
 * planar graphs.
 *
 * # Safety
 * `g` must be null or a live graph handle; `out` must be null or point to
 * writable storage for a handle.
 */
enum PcStatus pc_color(const struct PcGraph *g, uint32_t palette, struct PcColoring **out);

/**
 * Writes the color of `v` to `color`.
 *
 * # Safety
 * `c` must be null or a live coloring handle; `color` null or writable.
 */
enum PcStatus pc_coloring_get(const struct PcColoring *c, uint64_t v, uint32_t *color);

/**
 * Communication rounds the coloring used, or 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live coloring handle.
 */
size_t pc_coloring_rounds(const struct PcColoring *c);

/**
 * Number of distinct colors used, or 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live coloring handle.
 */
size_t pc_coloring_colors(const struct PcColoring *c);

/**
 * Checks that `c` colors every vertex of `g` properly from `1..=palette`.
 *
 * # Safety
 * Both handles must be null or live.
 */
enum PcStatus pc_verify(const struct PcGraph *g, const struct PcColoring *c, uint32_t palette);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void pc_coloring_free(struct PcColoring *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLANAR_COLOR_H */
