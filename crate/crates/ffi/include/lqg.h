/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef LQG_FFI_H
#define LQG_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Distance stored for vertices no path reaches.
#define LQG_UNREACHABLE 1.7976931348623157e308

// Result code of every fallible call.
typedef enum LqgStatus {
  LQG_STATUS_OK = 0,
  LQG_STATUS_NULL_POINTER = 1,
  LQG_STATUS_INVALID_ARGUMENT = 2,
  LQG_STATUS_OUT_OF_BOUNDS = 3,
  LQG_STATUS_UNREACHABLE = 4,
  LQG_STATUS_BUFFER_TOO_SMALL = 5,
  LQG_STATUS_IO = 6,
  LQG_STATUS_PANIC = 7,
} LqgStatus;

// Kind of a KPZ result.
typedef enum LqgDimensionKind {
  LQG_DIMENSION_KIND_FINITE = 0,
  // `Δ₀ = Q²/2`.
  LQG_DIMENSION_KIND_BOUNDARY = 1,
  // `Δ₀ > Q²/2`; the value is unset.
  LQG_DIMENSION_KIND_INFINITE = 2,
} LqgDimensionKind;

// Shortest-path distances and predecessors from a source set.
typedef struct LqgDistanceMap LqgDistanceMap;

// Square lattice field.
typedef struct LqgField LqgField;

// LFPP metric of a mollified field.
typedef struct LqgMetric LqgMetric;

// Jointly consistent parameters `(γ, ξ, Q, d_γ, c_M)`.
typedef struct LqgParameterTriple {
  double gamma;
  double xi;
  double q;
  double d;
  double c_m;
} LqgParameterTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *lqg_version(void);

// Description of the last failed call on this thread; empty after a
// success. Valid until the next call on the same thread.
const char *lqg_last_error(void);

// Static name of a status code; unknown codes map to "unknown status".
const char *lqg_status_name(int32_t status);

// Samples a zero-boundary discrete GFF on an `n × n` grid. With
// `continuum` nonzero the field is scaled so that `Var h_ε ≈ log(1/ε)`.
//
// # Safety
// `out` must be valid for a pointer write.
enum LqgStatus lqg_field_sample_gff(size_t n,
                                    double spacing,
                                    uint64_t seed,
                                    bool continuum,
                                    struct LqgField **out);

// Builds a field from `n²` row-major values.
//
// # Safety
// `values` must point to `n * n` readable doubles; `out` must be writable.
enum LqgStatus lqg_field_from_values(size_t n,
                                     double spacing,
                                     const double *values,
                                     struct LqgField **out);

// Side length of a field, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
size_t lqg_field_n(const struct LqgField *field);

// Copies the `n²` row-major values into `buf` of capacity `len`.
//
// # Safety
// `field` must be a live handle and `buf` valid for `len` writes.
enum LqgStatus lqg_field_values(const struct LqgField *field, double *buf, size_t len);

// New field equal to `field + c`.
//
// # Safety
// `field` must be a live handle; `out` must be writable.
enum LqgStatus lqg_field_add_constant(const struct LqgField *field,
                                      double c,
                                      struct LqgField **out);

// Releases a field handle. Null is ignored.
//
// # Safety
// `field` must be null or a handle not yet freed.
void lqg_field_free(struct LqgField *field);

// Mollifies `field` at scale `epsilon` and builds the LFPP metric with
// exponent `xi`. `connectivity` is 4 (axis neighbours) or 8 (king moves).
//
// # Safety
// `field` must be a live handle; `out` must be writable.
enum LqgStatus lqg_metric_build(const struct LqgField *field,
                                double epsilon,
                                double xi,
                                uint32_t connectivity,
                                struct LqgMetric **out);

// Left-right crossing distance of the grid.
//
// # Safety
// `metric` must be a live handle; `out` must be writable.
enum LqgStatus lqg_metric_crossing_distance(const struct LqgMetric *metric, double *out);

// Across- and around-distances of the closed annulus
// `r_in ≤ |v − (row, col)| ≤ r_out`.
//
// # Safety
// `metric` must be a live handle; both outputs must be writable.
enum LqgStatus lqg_metric_annulus(const struct LqgMetric *metric,
                                  size_t row,
                                  size_t col,
                                  double r_in,
                                  double r_out,
                                  double *across,
                                  double *around);

// Releases a metric handle. Null is ignored.
//
// # Safety
// `metric` must be null or a handle not yet freed.
void lqg_metric_free(struct LqgMetric *metric);

// Dijkstra distances from `count` source vertices (row-major indices).
// The result does not borrow the metric.
//
// # Safety
// `metric` must be a live handle, `sources` valid for `count` reads and
// `out` writable.
enum LqgStatus lqg_distance_map(const struct LqgMetric *metric,
                                const size_t *sources,
                                size_t count,
                                struct LqgDistanceMap **out);

// Number of vertices covered by a distance map, or 0 for null.
//
// # Safety
// `dmap` must be null or a live handle.
size_t lqg_distance_map_len(const struct LqgDistanceMap *dmap);

// Copies all distances; unreached vertices hold [`LQG_UNREACHABLE`].
//
// # Safety
// `dmap` must be a live handle and `buf` valid for `len` writes.
enum LqgStatus lqg_distance_map_distances(const struct LqgDistanceMap *dmap,
                                          double *buf,
                                          size_t len);

// Writes the geodesic from a source to `target` into `buf` (source first)
// and its vertex count into `out_len`. When `cap` is too small the required
// count is still stored in `out_len` and `BufferTooSmall` is returned.
//
// # Safety
// `dmap` must be a live handle, `buf` valid for `cap` writes (may be null
// when `cap` is 0) and `out_len` writable.
enum LqgStatus lqg_distance_map_geodesic(const struct LqgDistanceMap *dmap,
                                         size_t target,
                                         size_t *buf,
                                         size_t cap,
                                         size_t *out_len);

// Releases a distance map. Null is ignored.
//
// # Safety
// `dmap` must be null or a handle not yet freed.
void lqg_distance_map_free(struct LqgDistanceMap *dmap);

// Parameters for `gamma` in `(0, 2]` using the built-in dimension table.
//
// # Safety
// `out` must be writable.
enum LqgStatus lqg_parameter_triple(double gamma, struct LqgParameterTriple *out);

// KPZ relation `Δ = (Q − √(Q² − 2Δ₀))/ξ`. `value` is left untouched when
// the result is infinite.
//
// # Safety
// `kind` and `value` must be writable.
enum LqgStatus lqg_kpz(double delta0,
                       double xi,
                       double q,
                       enum LqgDimensionKind *kind,
                       double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LQG_FFI_H */
