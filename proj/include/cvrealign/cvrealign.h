/*
 * Copyright 2026 The cvrealign Authors
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

#ifndef CVREALIGN_CVREALIGN_H_
#define CVREALIGN_CVREALIGN_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(CVREALIGN_BUILDING)
#define CVR_API __declspec(dllexport)
#else
#define CVR_API __declspec(dllimport)
#endif
#else
#define CVR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * C interface of the cvrealign library.
 *
 * Every fallible call returns a cvr_status. On failure the message of the
 * most recent error on the calling thread is available from
 * cvr_last_error(). Output arguments are written only on success.
 */

typedef enum cvr_status {
  CVR_OK = 0,
  CVR_ERR_INVALID_ARGUMENT = 1,
  CVR_ERR_SINGULAR_MATRIX = 2,
  CVR_ERR_DEGENERATE_STATE = 3,
  CVR_ERR_OVERFLOW_GUARD = 4,
  CVR_ERR_CAPACITY_EXCEEDED = 5,
  CVR_ERR_CUTOFF_TOO_SMALL = 6,
  CVR_ERR_DOMAIN = 7,
  CVR_ERR_ZERO_STATE = 8,
  CVR_ERR_IO = 9,
  CVR_ERR_INTERNAL = 99
} cvr_status;

typedef enum cvr_branch { CVR_BRANCH_NONE = 0, CVR_BRANCH_PLAIN = 1, CVR_BRANCH_PI = 2 } cvr_branch;

typedef enum cvr_photon_op { CVR_SUBTRACT = 0, CVR_ADD = 1 } cvr_photon_op;

typedef enum cvr_tmsv_criterion {
  CVR_REALIGN_SUB = 0,
  CVR_REALIGN_ADD = 1,
  CVR_SECOND_MOMENT_SUB = 2,
  CVR_SECOND_MOMENT_ADD = 3
} cvr_tmsv_criterion;

/* Symmetric standard-form second moments. */
typedef struct cvr_ccm {
  double b0;
  double c1;
  double c2;
} cvr_ccm;

/* Identical thermal damping channel on both modes; decay = Gamma * t. */
typedef struct cvr_channel {
  double decay;
  double nbar;
} cvr_channel;

#define CVR_DETAIL_LEN 512

typedef struct cvr_report {
  double value;
  double threshold;
  /* 1 when values above the threshold certify entanglement, 0 when below. */
  int above;
  int entangled;
  int boundary;
  cvr_branch branch;
  double tau;
  /* Product form of the Gaussian test; has_product = 0 elsewhere. */
  double product;
  double product_threshold;
  int has_product;
  int lower_bound_only;
  char detail[CVR_DETAIL_LEN];
} cvr_report;

typedef struct cvr_critical_time {
  /* 1 when a crossing was found (decay is then valid). */
  int found;
  double decay;
  int detected_initially;
  int non_monotonic;
  int sign_changes;
} cvr_critical_time;

typedef struct cvr_realigned_norms {
  double trace_norm;
  double trace;
  int blocks;
} cvr_realigned_norms;

typedef struct cvr_moments {
  double b1;
  double b2;
  double c1;
  double c2;
} cvr_moments;

/* Opaque truncated Fock-space density matrix. */
typedef struct cvr_fock cvr_fock;

CVR_API const char* cvr_version(void);
CVR_API const char* cvr_status_name(cvr_status status);
CVR_API const char* cvr_last_error(void);

/* Gaussian states */
CVR_API cvr_status cvr_tmsv_ccm(double lambda, cvr_ccm* out);
CVR_API cvr_status cvr_physicality_check(const cvr_ccm* ccm, int* physical);
CVR_API cvr_status cvr_simon_ppt_check(const cvr_ccm* ccm, int* separable);
CVR_API cvr_status cvr_mixture_ccm(double p, const cvr_ccm* a, const cvr_ccm* b, cvr_ccm* out);
CVR_API cvr_status cvr_gaussian_criterion(const cvr_ccm* ccm, cvr_report* out);
CVR_API cvr_status cvr_gaussian_criterion_nonsymmetric(double b1, double b2, double c1, double c2,
                                                       cvr_report* out);

/* Photon-subtracted / added states and mixtures */
CVR_API cvr_status cvr_photon_criterion(const cvr_ccm* ccm, cvr_photon_op op, int m, cvr_report* out);
CVR_API cvr_status cvr_photon_normalization(const cvr_ccm* ccm, cvr_photon_op op, int m, double* out);
/* out[0] second-moment, out[1] Fock, out[2] realignment. */
CVR_API cvr_status cvr_mixture_criteria(double w1, double w2, double p, cvr_report out[3]);

/* Channel evolution */
CVR_API cvr_status cvr_channel_from_rate(double gamma, double t, double nbar, cvr_channel* out);
CVR_API cvr_status cvr_evolve_ccm(const cvr_ccm* ccm, const cvr_channel* ch, cvr_ccm* out);
/* orders: derivative multi-index over (eps1, eps2, xi1, xi2, eta1, eta2, zeta1, zeta2). */
CVR_API cvr_status cvr_evolved_criterion_general(const cvr_ccm* kernel, const int orders[8],
                                                 const cvr_channel* ch, cvr_report* out);
CVR_API cvr_status cvr_parse_tmsv_criterion(const char* name, cvr_tmsv_criterion* out);
CVR_API const char* cvr_tmsv_criterion_name(cvr_tmsv_criterion c);
CVR_API cvr_status cvr_evaluate_tmsv_criterion(cvr_tmsv_criterion c, double lambda, const cvr_channel* ch,
                                               cvr_report* out);
CVR_API cvr_status cvr_critical_time_tmsv(cvr_tmsv_criterion c, double lambda, double nbar,
                                          cvr_critical_time* out);

/* Fock-space oracle */
CVR_API cvr_status cvr_fock_gaussian(const cvr_ccm* ccm, int cutoff, cvr_fock** out);
CVR_API cvr_status cvr_fock_gaussian_nonsymmetric(double b1, double b2, double c1, double c2, int cutoff,
                                                  cvr_fock** out);
/* raw_trace may be NULL. */
CVR_API cvr_status cvr_fock_photon(const cvr_fock* f, cvr_photon_op op, int m, cvr_fock** out,
                                   double* raw_trace);
/* Thermal channel via loss and amplifier Kraus maps (pure loss when nbar = 0). */
CVR_API cvr_status cvr_fock_evolve(const cvr_fock* f, const cvr_channel* ch, cvr_fock** out);
CVR_API cvr_status cvr_fock_joint(const cvr_ccm* kernel, const int orders[8], const cvr_channel* ch,
                                  int cutoff, cvr_fock** out, double* raw_trace);
CVR_API cvr_status cvr_fock_realigned_norms(const cvr_fock* f, cvr_realigned_norms* out);
CVR_API cvr_status cvr_fock_moments(const cvr_fock* f, cvr_moments* out);
CVR_API cvr_status cvr_fock_trace(const cvr_fock* f, double* out);
CVR_API cvr_status cvr_fock_cutoff(const cvr_fock* f, int* out);
CVR_API cvr_status cvr_fock_element(const cvr_fock* f, int k1, int k2, int m1, int m2, double* out);
CVR_API cvr_status cvr_fock_save(const cvr_fock* f, const char* path);
CVR_API cvr_status cvr_fock_load(const char* path, cvr_fock** out);
CVR_API void cvr_fock_free(cvr_fock* f);

#ifdef __cplusplus
}
#endif

#endif /* CVREALIGN_CVREALIGN_H_ */
