#ifndef NMK_H
#define NMK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum NmkStatus {
  NMK_STATUS_OK = 0,
  NMK_STATUS_NULL_POINTER = 1,
  NMK_STATUS_INVALID_UTF8 = 2,
  NMK_STATUS_PARSE = 3,
  NMK_STATUS_CAP_EXCEEDED = 4,
  NMK_STATUS_BUFFER_TOO_SMALL = 5,
  NMK_STATUS_FAILED = 6,
  NMK_STATUS_PANIC = 7,
} NmkStatus;

/*
 Opaque graph handle.
 */
typedef struct NmkGraph NmkGraph;

/*
 Message for the last failed call on this thread, or NULL. Valid until the
 next call into the library from the same thread.
 */
const char *nmk_last_error(void);

/*
 Parses an edge list: a vertex count line (`n`, or `n = a b` for a
 bipartite graph), then one `u v` pair per line.

 # Safety
 `edge_list` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NmkStatus nmk_graph_parse(const char *edge_list, struct NmkGraph **out);

/*
 The complete graph on `n` vertices.

 # Safety
 `out` must be a valid pointer.
 */
enum NmkStatus nmk_graph_complete(size_t n, struct NmkGraph **out);

/*
 Releases a graph. NULL is ignored.

 # Safety
 `g` must come from this library and not be used afterwards.
 */
void nmk_graph_free(struct NmkGraph *g);

/*
 Size of a maximum matching.

 # Safety
 `g` must be a live handle and `out` a valid pointer.
 */
enum NmkStatus nmk_graph_matching_number(const struct NmkGraph *g, size_t *out);

/*
 Reduced Betti numbers of `NM_k(g)` over `field_name` (`"gf2"`, `"gf<p>"` or
 `"rational"`; NULL means GF(2)). `buf[i]` receives the number for
 dimension `i - 1`, starting at dimension -1. `*len` is set to the number of
 entries needed; if `cap` is smaller, nothing is written and the status is
 `NMK_STATUS_BUFFER_TOO_SMALL`.

 # Safety
 `g` must be a live handle, `buf` must hold `cap` entries (or be NULL when
 `cap` is 0) and `len` must be a valid pointer.
 */
enum NmkStatus nmk_betti(const struct NmkGraph *g,
                         size_t k,
                         const char *field_name,
                         size_t *buf,
                         size_t cap,
                         size_t *len);

/*
 Runs the matching construction for a family given as JSON, writing the
 verdict as JSON to `*out`. An empty family gives `"EMPTY_FAMILY"`.

 # Safety
 `spec_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NmkStatus nmk_morse_verify_json(const char *spec_json, const char *field_name, char **out);

/*
 Checks a rainbow instance (host edge list followed by `SET i: u v, ...`
 lines) for a rainbow `k`-matching, writing the verdict as JSON to `*out`.

 # Safety
 `instance` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NmkStatus nmk_rainbow_verify_json(const char *instance, size_t k, char **out);

/*
 Releases a string returned by the library. NULL is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void nmk_string_free(char *s);

#endif /* NMK_H */
