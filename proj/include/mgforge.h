/*
 * Copyright 2026 The mgforge developers
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

/* C interface to the mgforge two-qubit matchgate compiler and nonlocal
 * process analysis library. All structured payloads are JSON strings in
 * the library's documented formats; strings returned through char** are
 * owned by the caller and released with mg_string_free. Every function
 * returns MG_OK or an error code, with details from mg_last_error(). */

#ifndef MGFORGE_H
#define MGFORGE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mg_status {
  MG_OK = 0,
  MG_ERR_RUNTIME = 1,
  MG_ERR_INVALID_ARGUMENT = 2,
  MG_ERR_CONSTRAINT = 3,
  MG_ERR_UNKNOWN_NAME = 4,
  MG_ERR_PARSE = 5
} mg_status;

const char* mg_version(void);
/* Thread-local message describing the most recent failure. */
const char* mg_last_error(void);
void mg_string_free(char* s);

/* Opaque handles. */
typedef struct mg_chi mg_chi;
typedef struct mg_dataset mg_dataset;

/* Named gates. out_relaxed_matchgate (optional) is set to 1 for gates
 * that satisfy the matchgate layout only under the relaxed determinant
 * rule (G_IX = SWAP). */
mg_status mg_gate_json(const char* name, char** out_matrix_json,
                       int* out_relaxed_matchgate);
mg_status mg_gate_names_json(char** out_names_json);

/* Decompose a matchgate (JSON {"a":...,"b":...,"relaxed":...}) into the
 * general 4-op circuit, or the single-CZ_theta symmetric circuit.
 * out_residual receives the resimulation phase distance. */
mg_status mg_decompose_json(const char* matchgate_json, int symmetric,
                            char** out_circuit_json, double* out_residual);

/* Canonical coordinates, Makhlin invariants, perfect-entangler flag and
 * nearest named two-qubit gate of a 4x4 unitary. */
mg_status mg_kak_report_json(const char* matrix_json, char** out_report_json);

/* Chi handles. */
mg_status mg_chi_from_gate(const char* name, mg_chi** out);
mg_status mg_chi_from_unitary_json(const char* matrix_json, mg_chi** out);
mg_status mg_chi_from_json(const char* chi_json, mg_chi** out);
mg_status mg_chi_to_json(const mg_chi* chi, char** out_json);
mg_status mg_chi_purity(const mg_chi* chi, double* out);
mg_status mg_chi_fidelity(const mg_chi* a, const mg_chi* b, double* out);
void mg_chi_free(mg_chi* chi);

/* Tomography. */
mg_status mg_tomo_simulate(const mg_chi* chi, double n_nominal, uint64_t seed,
                           mg_dataset** out);
mg_status mg_dataset_from_jsonl(const char* text, mg_dataset** out);
mg_status mg_dataset_to_jsonl(const mg_dataset* ds, char** out_text);
void mg_dataset_free(mg_dataset* ds);
/* out_info_json: {"converged":..., "tp_converged":..., "iterations":...,
 * "log_likelihood":..., "tp_defect":...}. */
mg_status mg_tomo_reconstruct(const mg_dataset* ds, mg_chi** out_chi,
                              char** out_info_json);

/* Locally optimised fidelity map over a chamber grid. opts_json keys
 * (all optional): grid_target (int), seed, jobs, restarts, threshold,
 * target_point ({"c1":...,"c2":...,"c3":...}), label. Writes map.csv and
 * map_summary.json under out_dir and returns the summary JSON. */
mg_status mg_weylmap_run(const mg_chi* chi, const char* opts_json,
                         const char* out_dir, char** out_summary_json);

/* Full synthetic experiment from a config JSON; writes dataset.jsonl,
 * map.csv and map_summary.json under out_dir and returns the report.
 * opts_json keys (optional): grid_target, bootstrap_resamples, jobs,
 * restarts. */
mg_status mg_experiment_run(const char* config_json, const char* opts_json,
                            const char* out_dir, char** out_report_json);

/* Calibrate (depolarizing_p, visibility, eta) against targets
 * {"raw_fidelity":...,"f_max":...,"purity":...}; returns the config and
 * residuals. */
mg_status mg_experiment_calibrate(const char* targets_json,
                                  char** out_result_json);

#ifdef __cplusplus
}
#endif

#endif /* MGFORGE_H */
