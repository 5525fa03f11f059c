// Copyright 2026 The mgforge developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mgforge/process.hpp"

namespace mgforge {

/// Preparation states: |H> = |0>, |D> = (|H>+|V>)/sqrt2, |R> = (|H>+i|V>)/sqrt2.
enum class PrepLabel : std::uint8_t { H, V, D, R };
/// Measurement projectors add A = (|H>-|V>)/sqrt2 and L = (|H>-i|V>)/sqrt2.
enum class MeasLabel : std::uint8_t { H, V, D, A, R, L };

const char* to_string(PrepLabel l);
const char* to_string(MeasLabel l);
PrepLabel prep_label_from_string(const std::string& s);
MeasLabel meas_label_from_string(const std::string& s);

Eigen::Vector2cd prep_ket(PrepLabel l);
Eigen::Vector2cd meas_ket(MeasLabel l);

struct PrepSetting {
  PrepLabel q0, q1;
};
struct MeasSetting {
  MeasLabel q0, q1;
};

/// The 16 preparation pairs over {H,V,D,R}.
const std::vector<PrepSetting>& all_preps();
/// The 36 measurement pairs over {H,V,D,A,R,L}.
const std::vector<MeasSetting>& all_meas();

struct CountRecord {
  PrepSetting prep;
  MeasSetting meas;
  long long counts = 0;
};

/// Complete 16 x 36 design: exactly one record per (prep, meas) pair.
struct TomographyDataset {
  std::vector<CountRecord> records;
  double n_nominal = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Coincidence probability Tr(Pi_meas E(rho_prep)), including the map's
/// trace_norm (success scale of post-selected gates).
double predicted_probability(const ProcessMatrix& chi, const PrepSetting& prep,
                             const MeasSetting& meas);

TomographyDataset simulate_counts(const ProcessMatrix& chi, double n_nominal,
                                  std::uint64_t seed);

struct MleOptions {
  int max_iters = 5000;
  double rel_tol = 1e-10;
  double tp_tol = 1e-6;
  int penalty_rounds = 8;
};

struct MleResult {
  ProcessMatrix chi;
  bool converged = false;
  bool tp_converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  double tp_defect = 0.0;
  /// Accepted objective values, non-decreasing by construction.
  std::vector<double> likelihood_trace;

  MleResult() : chi(ProcessMatrix::depolarizing(0.0)) {}
};

/// Maximum-likelihood chi reconstruction: exact Poisson likelihood over a
/// PSD Cholesky-style parametrisation (T with 256 real parameters),
/// quasi-Newton (L-BFGS) with analytic gradients, restarted from the
/// linear-inversion estimate, trace preservation by escalating quadratic
/// penalty.
MleResult mle_reconstruct(const TomographyDataset& data,
                          const MleOptions& opts = {});

struct BootstrapResult {
  double mean = 0.0;
  double stddev = 0.0;
  int resamples = 0;
  int failures = 0;
};

/// Parametric Poisson bootstrap: resample each record around its observed
/// count, re-run the MLE, and report the statistic's mean and standard
/// deviation.
BootstrapResult bootstrap_errors(
    const TomographyDataset& data, int resamples,
    const std::function<double(const MleResult&)>& statistic,
    std::uint64_t seed, int jobs = 1, const MleOptions& opts = {});

/// Smallest/largest singular value ratio of the 576 x 256 design matrix;
/// finite iff the prep/meas design is informationally complete.
double design_condition_number();

}  // namespace mgforge
