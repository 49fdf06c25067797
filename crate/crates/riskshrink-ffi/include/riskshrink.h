#ifndef RISKSHRINK_H
#define RISKSHRINK_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RiskshrinkKind {
  RISKSHRINK_KIND_MSE = 0,
  RISKSHRINK_KIND_WE = 1,
  RISKSHRINK_KIND_LOG_MSE = 2,
  RISKSHRINK_KIND_IS = 3,
  RISKSHRINK_KIND_IS_II = 4,
  RISKSHRINK_KIND_COSH = 5,
  RISKSHRINK_KIND_WCOSH = 6,
} RiskshrinkKind;

typedef enum RiskshrinkStatus {
  RISKSHRINK_STATUS_OK = 0,
  RISKSHRINK_STATUS_NULL_POINTER = 1,
  RISKSHRINK_STATUS_INVALID_ARGUMENT = 2,
  RISKSHRINK_STATUS_CONFIG = 3,
  RISKSHRINK_STATUS_INPUT = 4,
  RISKSHRINK_STATUS_DOMAIN = 5,
  RISKSHRINK_STATUS_IO = 6,
  RISKSHRINK_STATUS_WAV = 7,
  RISKSHRINK_STATUS_PANIC = 8,
} RiskshrinkStatus;

/**
 * Opaque denoiser handle.
 */
typedef struct RiskshrinkDenoiser RiskshrinkDenoiser;

/**
 * Mirror of the denoiser settings. Start from `riskshrink_config_default`.
 */
typedef struct RiskshrinkConfig {
  uint32_t sample_rate;
  double frame_ms;
  double overlap_fraction;
  enum RiskshrinkKind kind;
  double alpha;
  double beta;
  double eta;
  size_t init_noise_frames;
  double vad_threshold;
  size_t vad_hangover;
} RiskshrinkConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct RiskshrinkConfig riskshrink_config_default(void);

/**
 * Creates a denoiser. On success `*out` owns a handle to release with
 * `riskshrink_denoiser_free`; on failure it is set to NULL.
 *
 * # Safety
 * `config` must point to a valid `RiskshrinkConfig` and `out` to writable storage.
 */
enum RiskshrinkStatus riskshrink_denoiser_new(const struct RiskshrinkConfig *config,
                                              struct RiskshrinkDenoiser **out);

/**
 * # Safety
 * `denoiser` must come from `riskshrink_denoiser_new` and not be used afterwards.
 * NULL is accepted.
 */
void riskshrink_denoiser_free(struct RiskshrinkDenoiser *denoiser);

/**
 * Denoises `len` samples from `input` into `output`. The buffers may be
 * the same; they must not otherwise overlap.
 *
 * # Safety
 * `input` must be readable and `output` writable for `len` doubles.
 */
enum RiskshrinkStatus riskshrink_denoiser_process(const struct RiskshrinkDenoiser *denoiser,
                                                  const double *input,
                                                  size_t len,
                                                  double *output);

/**
 * Gain of `kind` at a-posteriori SNR `xi` with over-subtraction `alpha`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RiskshrinkStatus riskshrink_gain(enum RiskshrinkKind kind,
                                      double xi,
                                      double alpha,
                                      double *out);

/**
 * Reads a 16-bit mono WAV, denoises it and writes the result.
 *
 * # Safety
 * Paths must be NUL-terminated UTF-8; `config` must be valid.
 */
enum RiskshrinkStatus riskshrink_denoise_file(const char *in_path,
                                              const char *out_path,
                                              const struct RiskshrinkConfig *config);

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *riskshrink_last_error_message(void);

const char *riskshrink_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RISKSHRINK_H */
