#ifndef FORGE_SIM_H
#define FORGE_SIM_H

/* Generated by cbindgen from forge-sim-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Anything but `Ok` leaves a message
 * retrievable through `forge_sim_last_error` on the same thread.
 */
typedef enum ForgeSimStatus {
  FORGE_SIM_STATUS_OK = 0,
  FORGE_SIM_STATUS_NULL_POINTER = 1,
  FORGE_SIM_STATUS_INVALID_UTF8 = 2,
  FORGE_SIM_STATUS_INVALID_CONFIG = 3,
  FORGE_SIM_STATUS_IO_ERROR = 4,
  FORGE_SIM_STATUS_SIMULATION_FAILED = 5,
  FORGE_SIM_STATUS_BUFFER_TOO_SMALL = 6,
} ForgeSimStatus;

/**
 * Opaque simulation configuration handle.
 */
typedef struct ForgeSimConfig ForgeSimConfig;

/**
 * Opaque handle to a completed run: final state plus the full event log.
 */
typedef struct ForgeSimRun ForgeSimRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *forge_sim_version(void);

/**
 * Creates a configuration holding the default full-scale setup.
 */
struct ForgeSimConfig *forge_sim_config_new(void);

/**
 * Frees a configuration. A null pointer is a no-op.
 *
 * # Safety
 * `config` must have come from `forge_sim_config_new` and not been freed.
 */
void forge_sim_config_free(struct ForgeSimConfig *config);

/**
 * Sets one configuration key (same keys as the config file format).
 *
 * # Safety
 * `config` must be a live handle; `key` and `value` must be NUL-terminated.
 */
enum ForgeSimStatus forge_sim_config_set(struct ForgeSimConfig *config,
                                         const char *key,
                                         const char *value);

/**
 * Replaces the configuration with one loaded from a config file.
 *
 * # Safety
 * `config` must be a live handle; `path` must be NUL-terminated.
 */
enum ForgeSimStatus forge_sim_config_load(struct ForgeSimConfig *config, const char *path);

/**
 * Runs the configured simulation, keeping the whole event log in memory,
 * and hands back a run handle through `out_run`. Intended for small and
 * medium runs; full-scale logs are better streamed with
 * `forge_sim_simulate_to_dir`.
 *
 * # Safety
 * `config` must be a live handle and `out_run` a valid location to store
 * the new pointer.
 */
enum ForgeSimStatus forge_sim_run(const struct ForgeSimConfig *config,
                                  struct ForgeSimRun **out_run);

/**
 * Runs the configured simulation and streams all artifacts into `dir`
 * without materializing the log.
 *
 * # Safety
 * `config` must be a live handle; `dir` must be NUL-terminated.
 */
enum ForgeSimStatus forge_sim_simulate_to_dir(const struct ForgeSimConfig *config, const char *dir);

/**
 * Frees a run handle. A null pointer is a no-op.
 *
 * # Safety
 * `run` must have come from `forge_sim_run` and not been freed.
 */
void forge_sim_run_free(struct ForgeSimRun *run);

/**
 * Number of logged events, or 0 for a null handle.
 *
 * # Safety
 * `run` must be a live handle or null.
 */
uint64_t forge_sim_run_event_count(const struct ForgeSimRun *run);

/**
 * Number of projects ever created, or 0 for a null handle.
 *
 * # Safety
 * `run` must be a live handle or null.
 */
uint64_t forge_sim_run_project_count(const struct ForgeSimRun *run);

/**
 * Number of bins in the final developers-per-project histogram; the
 * capacity needed by `forge_sim_run_histogram`.
 *
 * # Safety
 * `run` must be a live handle or null.
 */
size_t forge_sim_run_histogram_len(const struct ForgeSimRun *run);

/**
 * Copies the final histogram into caller buffers, bins in ascending
 * developer count: `developers[i]` paired with `projects[i]`.
 *
 * # Safety
 * `run` must be a live handle; both buffers must hold at least `capacity`
 * elements.
 */
enum ForgeSimStatus forge_sim_run_histogram(const struct ForgeSimRun *run,
                                            uint32_t *developers,
                                            uint64_t *projects,
                                            size_t capacity);

/**
 * Writes the run's artifacts (event log, project table, histogram,
 * manifest) into `dir`.
 *
 * # Safety
 * `run` must be a live handle; `dir` must be NUL-terminated.
 */
enum ForgeSimStatus forge_sim_run_write_outputs(const struct ForgeSimRun *run, const char *dir);

/**
 * Length in bytes, including the NUL terminator, of the last error message
 * on this thread; 0 when there is none.
 */
size_t forge_sim_last_error_length(void);

/**
 * Copies the last error message on this thread into `buf` as a
 * NUL-terminated string. With no pending error an empty string is written.
 *
 * # Safety
 * `buf` must hold at least `capacity` bytes.
 */
enum ForgeSimStatus forge_sim_last_error(char *buf, size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORGE_SIM_H */
