/* Copyright 2026 The sl3hecke Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to sl3hecke: mod p homology of Gamma_0(N) in SL3(Z), Hecke
 * eigensystems, and Frobenius predictions for Galois representations.
 *
 * Every fallible call returns an sl3_status.  On failure the message is
 * available from sl3_last_error() on the same thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * sl3_string_free.  Handles are released with their *_free function; passing
 * NULL to a free function is a no-op. */

#ifndef SL3HECKE_SL3HECKE_H_
#define SL3HECKE_SL3HECKE_H_

#include <stddef.h>

#if defined(_WIN32)
#define SL3_API __declspec(dllexport)
#else
#define SL3_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl3_status {
  SL3_OK = 0,
  SL3_ERR_INVALID_ARGUMENT = 1,
  SL3_ERR_DIVISION_BY_ZERO = 2,
  SL3_ERR_UNSUPPORTED = 3,
  SL3_ERR_COMPUTATION = 4,
  SL3_ERR_IO = 5,
  SL3_ERR_INTERNAL = 6
} sl3_status;

typedef struct sl3_homology sl3_homology;
typedef struct sl3_eigensystems sl3_eigensystems;
typedef struct sl3_rep sl3_rep;

typedef void (*sl3_log_fn)(const char* message, void* user);

SL3_API const char* sl3_version(void);
SL3_API const char* sl3_last_error(void);
SL3_API const char* sl3_status_name(sl3_status s);
SL3_API void sl3_string_free(char* s);

/* Parses "F(a,b,c)", "F(a,b,c)⊗det^s" or "a,b,c" and twists c into [0, p-2]. */
SL3_API sl3_status sl3_weight_parse(const char* text, unsigned p, int out[3]);

/* Homology ---------------------------------------------------------------- */

typedef struct sl3_homology_options {
  unsigned p;
  unsigned N;
  int weight[3];             /* (a, b, c) with a >= b >= c */
  const char* nebentype;     /* "trivial", "eps31", "eps3*eps13", ...; NULL: trivial */
  double restart_percent;    /* restart once this share of rows has been seen; < 0 disables */
  size_t row_block;          /* rows per streamed batch */
  size_t resident_rows;      /* echelon rows kept in memory before spilling; 0: no limit */
  const char* cache_dir;     /* NULL or "": no cache */
  unsigned workers;          /* threads building rows; results do not depend on it */
  sl3_log_fn log;            /* optional progress messages */
  void* log_user;
} sl3_homology_options;

/* Fills in the defaults. */
SL3_API void sl3_homology_options_init(sl3_homology_options* opt);

SL3_API sl3_status sl3_homology_compute(const sl3_homology_options* opt, sl3_homology** out);
SL3_API size_t sl3_homology_dim(const sl3_homology* h);
/* Summary: p, N, weight, nebentype, module and homology dimensions,
 * distinguished coordinates. */
SL3_API sl3_status sl3_homology_json(const sl3_homology* h, char** out);
SL3_API void sl3_homology_free(sl3_homology* h);

/* Hecke eigensystems ------------------------------------------------------ */

/* Eigensystems of T(ell,1), T(ell,2) for primes ell <= ell_max not dividing pN.
 * cache_dir may be NULL. */
SL3_API sl3_status sl3_eigensystems_compute(const sl3_homology* h, unsigned ell_max, const char* cache_dir,
                                            sl3_log_fn log, void* log_user, sl3_eigensystems** out);
SL3_API size_t sl3_eigensystems_count(const sl3_eigensystems* e);
/* One value row per system and prime ell <= ell_max; "*" where ell | pN. */
SL3_API sl3_status sl3_eigensystems_json(const sl3_eigensystems* e, char** out);
SL3_API void sl3_eigensystems_free(sl3_eigensystems* e);

/* Galois representations -------------------------------------------------- */

SL3_API sl3_status sl3_rep_parse(const char* json_text, sl3_rep** out);
SL3_API void sl3_rep_free(sl3_rep* r);
/* Predicted weights, strict parity diagnosis, level, nebentype and
 * Frobenius data up to ell_max. */
SL3_API sl3_status sl3_predict_json(const sl3_rep* r, unsigned ell_max, char** out);
/* Compares every eigensystem with the predictions.  *passed is set to 1 when
 * some eigensystem agrees at every common good prime. */
SL3_API sl3_status sl3_match_json(const sl3_rep* r, const sl3_eigensystems* e, char** out, int* passed);

/* Cache ------------------------------------------------------------------- */

SL3_API sl3_status sl3_cache_list(const char* dir, char** out);
SL3_API sl3_status sl3_cache_clear(const char* dir, size_t* removed);

/* Runs the built-in consistency checks; *failures counts failed checks. */
SL3_API sl3_status sl3_selftest(char** out, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* SL3HECKE_SL3HECKE_H_ */
