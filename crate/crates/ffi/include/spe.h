#ifndef SPE_H
#define SPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the non-zero values match the command-line exit codes.
typedef enum SpeStatus {
  SPE_STATUS_OK = 0,
  SPE_STATUS_INTERNAL = 1,
  SPE_STATUS_KILLER = 2,
  SPE_STATUS_UNSUPPORTED = 3,
  SPE_STATUS_INPUT = 4,
  SPE_STATUS_RESOURCE = 5,
  SPE_STATUS_NULL_ARGUMENT = 6,
} SpeStatus;

typedef enum SpeMode {
  // Whatever guarantee the dispatcher provides.
  SPE_MODE_ANY = 0,
  SPE_MODE_GP_SPE = 1,
} SpeMode;

typedef struct SpeCertificate SpeCertificate;

// A parsed game together with its expanded arena.
typedef struct SpeGame SpeGame;

// Killer pattern `z <a y <a x` and `x <b z <b y`, as player and outcome indices.
typedef struct SpeKiller {
  size_t a;
  size_t b;
  size_t x;
  size_t y;
  size_t z;
} SpeKiller;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty if none. Valid until the next call.
const char *spe_last_error(void);

// Parses a game document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SpeStatus spe_game_from_json(const char *json, struct SpeGame **out);

// # Safety
// `game` must come from [`spe_game_from_json`] and not be used afterwards.
void spe_game_free(struct SpeGame *game);

// # Safety
// `game` must be a live handle or null.
size_t spe_game_outcome_count(const struct SpeGame *game);

// # Safety
// `game` must be a live handle or null.
size_t spe_game_state_count(const struct SpeGame *game);

// Looks for the killer; `found` tells whether `out` was written.
//
// # Safety
// All pointers must be valid.
enum SpeStatus spe_find_killer(const struct SpeGame *game, struct SpeKiller *out, bool *found);

// Builds a verified certificate. Returns `SPE_STATUS_KILLER` when the preferences contain the killer.
//
// # Safety
// `game` must be a live handle and `out` a valid pointer.
enum SpeStatus spe_solve(const struct SpeGame *game,
                         enum SpeMode mode,
                         struct SpeCertificate **out);

// # Safety
// `cert` must come from [`spe_solve`] and not be used afterwards.
void spe_certificate_free(struct SpeCertificate *cert);

// Outcome index induced at the root.
//
// # Safety
// Both handles must be live.
size_t spe_certificate_root_outcome(const struct SpeGame *game, const struct SpeCertificate *cert);

// Certificate as JSON, borrowed from the handle.
//
// # Safety
// `cert` must be a live handle or null.
const char *spe_certificate_json(const struct SpeCertificate *cert);

// Checks a profile document (or the `profile` member of a certificate) for SPE, or GP-SPE.
//
// # Safety
// All pointers must be valid; `profile_json` NUL-terminated.
enum SpeStatus spe_verify_profile(const struct SpeGame *game,
                                  const char *profile_json,
                                  enum SpeMode mode,
                                  bool *holds);

// Number of SPE among positional profiles (`memory == 0`) or memory-bounded ones.
//
// # Safety
// `game` must be live and `count` valid.
enum SpeStatus spe_oracle_spe_count(const struct SpeGame *game,
                                    size_t memory,
                                    uint64_t cap,
                                    uint64_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPE_H */
