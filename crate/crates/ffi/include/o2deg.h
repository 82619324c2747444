#ifndef O2DEG_H
#define O2DEG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum O2degStatus {
  O2DEG_STATUS_OK = 0,
  O2DEG_STATUS_NULL_POINTER = 1,
  O2DEG_STATUS_INVALID_UTF8 = 2,
  O2DEG_STATUS_INVALID_ARGUMENT = 3,
  O2DEG_STATUS_CONFIG = 4,
  O2DEG_STATUS_CONSISTENCY = 5,
  O2DEG_STATUS_GEOMETRY = 6,
  O2DEG_STATUS_INTERNAL = 7,
  O2DEG_STATUS_PANIC = 8,
} O2degStatus;

/**
 * Group shape selector for [`o2deg_engine_new`].
 */
typedef enum O2degGroupKind {
  O2DEG_GROUP_KIND_DIHEDRAL = 0,
  O2DEG_GROUP_KIND_CYCLIC = 1,
} O2degGroupKind;

/**
 * Outcome of [`o2deg_analyze_json`].
 */
typedef enum O2degOutcome {
  O2DEG_OUTCOME_CERTIFICATES = 0,
  O2DEG_OUTCOME_NO_CERTIFICATES = 10,
  O2DEG_OUTCOME_HYPOTHESES_FAILED = 20,
} O2degOutcome;

/**
 * Planar domain.
 */
typedef struct O2degDomain O2degDomain;

/**
 * Element of the Burnside ring, tied to the engine that produced it.
 */
typedef struct O2degElement O2degElement;

/**
 * Degree engine for one `Gamma` at a fixed truncation level.
 */
typedef struct O2degEngine O2degEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *o2deg_last_error(void);

/**
 * Library version as a static string.
 */
const char *o2deg_version(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void o2deg_string_free(char *s);

/**
 * Creates an engine for `O(2) x Gamma x Z2`. `level = 0` picks the default
 * level for Fourier modes `0..=max_mode`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum O2degStatus o2deg_engine_new(enum O2degGroupKind kind,
                                  uint32_t n,
                                  uint32_t level,
                                  uint32_t max_mode,
                                  struct O2degEngine **out);

/**
 * # Safety
 * `e` must come from [`o2deg_engine_new`] or be null.
 */
void o2deg_engine_free(struct O2degEngine *e);

/**
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_engine_level(const struct O2degEngine *e, uint32_t *out);

/**
 * Number of minus-type irreducibles (valid `irrep` indices).
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_engine_irrep_count(const struct O2degEngine *e, uint32_t *out);

/**
 * Basic degree of the component with Fourier mode `mode` and irreducible
 * `irrep`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_basic_degree(struct O2degEngine *e,
                                    uint32_t mode,
                                    uint32_t irrep,
                                    struct O2degElement **out);

/**
 * Unit `(G)` of the Burnside ring.
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_element_unit(const struct O2degEngine *e, struct O2degElement **out);

/**
 * Product `a * b` in the Burnside ring.
 *
 * # Safety
 * Pointers must be valid; `a` and `b` must come from the same engine.
 */
enum O2degStatus o2deg_element_multiply(struct O2degEngine *e,
                                        const struct O2degElement *a,
                                        const struct O2degElement *b,
                                        struct O2degElement **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_element_equal(const struct O2degElement *a,
                                     const struct O2degElement *b,
                                     bool *out);

/**
 * Number of nonzero terms.
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_element_len(const struct O2degElement *a, uint32_t *out);

/**
 * Amalgamated-notation rendering; free with [`o2deg_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_element_to_string(const struct O2degElement *a, char **out);

/**
 * # Safety
 * `a` must come from this library or be null.
 */
void o2deg_element_free(struct O2degElement *a);

/**
 * Full analysis of a JSON configuration. The JSON report is written to
 * `report` (free with [`o2deg_string_free`]) and the outcome to `outcome`.
 *
 * # Safety
 * Pointers must be valid; `config` must be NUL-terminated.
 */
enum O2degStatus o2deg_analyze_json(const char *config,
                                    bool skip_geometry,
                                    char **report,
                                    enum O2degOutcome *outcome);

/**
 * Domain from its JSON description (`eta`, `symmetry`, `radius`, ...).
 *
 * # Safety
 * Pointers must be valid; `json` must be NUL-terminated.
 */
enum O2degStatus o2deg_domain_from_json(const char *json, struct O2degDomain **out);

/**
 * # Safety
 * `d` must come from this library or be null.
 */
void o2deg_domain_free(struct O2degDomain *d);

/**
 * Boundary radius in direction `theta`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_domain_boundary_radius(const struct O2degDomain *d,
                                              double theta,
                                              double *out);

/**
 * Boundary curvature in direction `theta` (outward normal convention).
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_domain_curvature(const struct O2degDomain *d, double theta, double *out);

/**
 * `|grad eta|` at the boundary point in direction `theta`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum O2degStatus o2deg_domain_grad_norm(const struct O2degDomain *d, double theta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* O2DEG_H */
