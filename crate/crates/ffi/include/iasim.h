#ifndef IASIM_H
#define IASIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IaStatus {
  IA_STATUS_OK = 0,
  IA_STATUS_NULL_POINTER = 1,
  IA_STATUS_CONFIG = 2,
  IA_STATUS_NUMERICAL = 3,
  IA_STATUS_SYNC_TIMEOUT = 4,
  IA_STATUS_INVALID_ARGUMENT = 5,
  IA_STATUS_IO = 6,
  IA_STATUS_PANIC = 7,
} IaStatus;

/**
 * Finished campaign: per-trial records and the summary.
 */
typedef struct IaCampaign IaCampaign;

/**
 * Simulation configuration.
 */
typedef struct IaConfig IaConfig;

typedef struct IaTrialSummary {
  double r_d;
  double r_ref_max_sinr;
  double r_ref_round_robin;
  double gain;
  size_t n_streams;
  uint64_t sync_slots;
} IaTrialSummary;

typedef struct IaCampaignSummary {
  size_t n_trials;
  double mean_gain;
  double median_gain;
  double min_gain;
  double max_gain;
  double ci95;
} IaCampaignSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *iasim_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void iasim_string_free(char *s);

/**
 * Demo configuration: 4 subcarriers, 1 free dimension, 3 users, 10 dB SNR
 * and INR. Release with `iasim_config_free`.
 */
struct IaConfig *iasim_config_default(void);

/**
 * Parses a TOML configuration document.
 *
 * # Safety
 * `toml` must be a nul-terminated string; `out` must be writable.
 */
enum IaStatus iasim_config_from_toml(const char *toml, struct IaConfig **out);

/**
 * # Safety
 * `cfg` must come from this library and not have been freed.
 */
void iasim_config_free(struct IaConfig *cfg);

/**
 * Sets SNR and INR in dB.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum IaStatus iasim_config_set_noise(struct IaConfig *cfg, double snr_db, double inr_db);

/**
 * Toggles perfect channel knowledge (no estimation noise).
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum IaStatus iasim_config_set_perfect_csi(struct IaConfig *cfg, bool perfect);

/**
 * Selects the OFDMA baseline: 0 = max SINR, 1 = round robin.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum IaStatus iasim_config_set_baseline(struct IaConfig *cfg, uint32_t policy);

/**
 * Runs one trial on `seed`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum IaStatus iasim_run_trial(const struct IaConfig *cfg,
                              uint64_t seed,
                              struct IaTrialSummary *out);

/**
 * Runs `n_trials` trials from `base_seed`, in parallel unless
 * `sequential`. Release the result with `iasim_campaign_free`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum IaStatus iasim_campaign_run(const struct IaConfig *cfg,
                                 size_t n_trials,
                                 uint64_t base_seed,
                                 bool sequential,
                                 struct IaCampaign **out);

/**
 * # Safety
 * `campaign` must come from this library and not have been freed.
 */
void iasim_campaign_free(struct IaCampaign *campaign);

/**
 * # Safety
 * `campaign` must be a live handle; `out` must be writable.
 */
enum IaStatus iasim_campaign_summary(const struct IaCampaign *campaign,
                                     struct IaCampaignSummary *out);

/**
 * Copies up to `len` per-trial gains into `buf`; `written` receives the
 * count copied.
 *
 * # Safety
 * `campaign` must be a live handle; `buf` must hold `len` doubles.
 */
enum IaStatus iasim_campaign_gains(const struct IaCampaign *campaign,
                                   double *buf,
                                   size_t len,
                                   size_t *written);

/**
 * JSON line of trial `index`. Free with `iasim_string_free`.
 *
 * # Safety
 * `campaign` must be a live handle; `out` must be writable.
 */
enum IaStatus iasim_campaign_record_json(const struct IaCampaign *campaign,
                                         size_t index,
                                         char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IASIM_H */
