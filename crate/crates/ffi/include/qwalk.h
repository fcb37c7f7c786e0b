#ifndef QWALK_H
#define QWALK_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QwalkStatus {
  QWALK_STATUS_OK = 0,
  QWALK_STATUS_NULL_POINTER = 1,
  QWALK_STATUS_INVALID_ARGUMENT = 2,
  QWALK_STATUS_CAPACITY = 3,
  QWALK_STATUS_NON_UNITARY = 4,
  QWALK_STATUS_LAYOUT = 5,
  QWALK_STATUS_PANIC = 6,
} QwalkStatus;

// Probability distribution over positions, with per-position standard errors
// when it comes from an ensemble.
typedef struct QwalkDistribution QwalkDistribution;

// Optical network for a fixed number of steps.
typedef struct QwalkNetwork QwalkNetwork;

// Walker state with a fixed step capacity.
typedef struct QwalkState QwalkState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null if none. The
// pointer stays valid until the next failing call on the same thread.
const char *qwalk_last_error(void);

// Library version as a static NUL-terminated string.
const char *qwalk_version(void);

// Creates a state `cos(theta)|H> + e^{i phi} sin(theta)|V>` at `start`,
// able to take up to `capacity` steps.
//
// # Safety
// `out` must be valid for writes.
enum QwalkStatus qwalk_state_new(double theta,
                                 double phi,
                                 int64_t start,
                                 size_t capacity,
                                 struct QwalkState **out);

// Takes `steps` steps with the half-wave-plate coin at `coin_axis`. Fails
// without changing the state if the capacity would be exceeded.
//
// # Safety
// `state` must be a live handle from `qwalk_state_new`.
enum QwalkStatus qwalk_state_evolve(struct QwalkState *state, double coin_axis, size_t steps);

// # Safety
// `state` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_state_step_count(const struct QwalkState *state, size_t *out);

// # Safety
// `state` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_state_norm(const struct QwalkState *state, double *out);

// Position distribution of the current state. The result is a new handle.
//
// # Safety
// `state` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_state_distribution(const struct QwalkState *state,
                                          struct QwalkDistribution **out);

// # Safety
// `state` must be null or a handle not yet freed.
void qwalk_state_free(struct QwalkState *state);

// Coherent walk from the origin in one call.
//
// # Safety
// `out` must be valid for writes.
enum QwalkStatus qwalk_walk(double theta,
                            double phi,
                            double coin_axis,
                            size_t steps,
                            struct QwalkDistribution **out);

// Exact unbiased classical walk of `steps` steps from `start`.
//
// # Safety
// `out` must be valid for writes.
enum QwalkStatus qwalk_classical_walk(size_t steps, int64_t start, struct QwalkDistribution **out);

// Mean of `trajectories` dephased trajectories from the origin. Output is
// bit-identical for equal arguments whatever the number of threads.
//
// # Safety
// `out` must be valid for writes.
enum QwalkStatus qwalk_ensemble_run(double theta,
                                    double phi,
                                    double coin_axis,
                                    size_t steps,
                                    double gamma,
                                    size_t trajectories,
                                    uint64_t seed,
                                    struct QwalkDistribution **out);

// Number of positions stored, `2 * steps + 1`, starting at
// `qwalk_distribution_min_position`.
//
// # Safety
// `d` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_distribution_len(const struct QwalkDistribution *d, size_t *out);

// # Safety
// `d` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_distribution_min_position(const struct QwalkDistribution *d, int64_t *out);

// Probability at `position`; zero outside the stored range.
//
// # Safety
// `d` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_distribution_get(const struct QwalkDistribution *d,
                                        int64_t position,
                                        double *out);

// Copies all stored probabilities into `buf`, which must hold at least
// `qwalk_distribution_len` values.
//
// # Safety
// `d` must be a live handle; `buf` must be valid for `buf_len` writes.
enum QwalkStatus qwalk_distribution_copy(const struct QwalkDistribution *d,
                                         double *buf,
                                         size_t buf_len);

// # Safety
// `d` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_distribution_std_dev(const struct QwalkDistribution *d, double *out);

// Standard error of the ensemble mean at `position`. Fails with
// `InvalidArgument` for distributions that do not come from an ensemble.
//
// # Safety
// `d` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_distribution_std_error(const struct QwalkDistribution *d,
                                              int64_t position,
                                              double *out);

// Total-variation distance between two distributions.
//
// # Safety
// `a` and `b` must be live handles; `out` must be valid for writes.
enum QwalkStatus qwalk_tv_distance(const struct QwalkDistribution *a,
                                   const struct QwalkDistribution *b,
                                   double *out);

// # Safety
// `d` must be null or a handle not yet freed.
void qwalk_distribution_free(struct QwalkDistribution *d);

// Builds the optical network for `steps` steps with coin plates at
// `coin_axis`.
//
// # Safety
// `out` must be valid for writes.
enum QwalkStatus qwalk_network_build(size_t steps, double coin_axis, struct QwalkNetwork **out);

// Sends one photon in polarization `cos(theta)|H> + e^{i phi} sin(theta)|V>`
// through the network; the result holds the detector probabilities.
//
// # Safety
// `net` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_network_propagate(const struct QwalkNetwork *net,
                                         double theta,
                                         double phi,
                                         struct QwalkDistribution **out);

// Text dump of the network layout. Release with `qwalk_string_free`.
//
// # Safety
// `net` must be a live handle; `out` must be valid for writes.
enum QwalkStatus qwalk_network_dump(const struct QwalkNetwork *net, char **out);

// # Safety
// `net` must be null or a handle not yet freed.
void qwalk_network_free(struct QwalkNetwork *net);

// Frees a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void qwalk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
