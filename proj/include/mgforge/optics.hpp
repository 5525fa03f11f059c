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

#include "mgforge/tomography.hpp"
#include "mgforge/weylmap.hpp"

namespace mgforge {

/// Post-selected PPBS gate parameters. eta is the H reflectivity of the
/// central PPBS (ideal 1/3, transmission 1 - eta), kappa the V intensity
/// attenuation per output arm (ideal 1/3), visibility the two-photon
/// interference visibility.
struct PPBSParams {
  double eta = 1.0 / 3.0;
  double kappa = 1.0 / 3.0;
  double visibility = 1.0;

  void validate() const;
};

/// Mean coincidence-subspace operator over |HH>,|HV>,|VH>,|VV>:
/// diag(eta - v (1-eta), sqrt(eta kappa), sqrt(eta kappa), kappa).
/// At v = 1 the HH interference term gives 2 eta - 1 and the ideal point
/// realises a bit-flipped CZ with success probability 1/9.
Mat4 ppbs_postselected_operator(const PPBSParams& params);

/// True when the coherent operator's singular values spread by more than
/// `tol` relative to each other (non-unitary gate off the ideal point).
bool ppbs_nonunitary(const PPBSParams& params, double tol = 1e-3);

/// Chi of the post-selected gate. At v = 1 a single-Kraus map; at v < 1
/// the convex mixture of the interfering operator and the two
/// distinguishable-photon branches (both-reflect, both-transmit).
/// trace_norm records the mean success probability.
ProcessMatrix ppbs_process(const PPBSParams& params);

struct ExperimentConfig {
  PPBSParams ppbs;
  double depolarizing_p = 0.0;
  double dephasing_p = 0.0;
  /// Fixed coherent rotation error (radians) on the output local frames,
  /// modelling waveplate misalignment. It lowers the raw fidelity but is
  /// fully correctable by the nonlocal-map optimisation, which is what
  /// separates the raw fidelity from the locally optimised maximum.
  double local_misalignment = 0.0;
  double n_nominal = 1e4;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Full analytic model of the experiment's process: the fixed local
/// frames that turn the bit-flipped CZ into G_HH, the PPBS map between
/// them, then depolarising and dephasing noise.
ProcessMatrix experiment_model_chi(const ExperimentConfig& cfg);

struct ExperimentOptions {
  int grid_target = 1000;  // "desk" preset
  int bootstrap_resamples = 60;
  int jobs = 1;
  OrbitOptions orbit;
  MleOptions mle;
};

struct ExperimentReport {
  ExperimentConfig config;
  double raw_fidelity = 0.0;
  double raw_fidelity_std = 0.0;
  double purity = 0.0;
  double purity_std = 0.0;
  double f_max = 0.0;
  WeylPoint argmax_point;
  double delta_nl = 0.0;
  double volume_fraction_0p9 = 0.0;
  bool flat_map = false;
  double mle_tp_defect = 0.0;
  bool mle_converged = false;
  int bootstrap_failures = 0;

  TomographyDataset dataset;
  FidelityMap map;
  MleResult mle;
};

/// chi model -> Poissonian counts -> MLE -> bootstrap errors -> fidelity
/// map, maximum and nonlocal distance. Deterministic given cfg.seed.
ExperimentReport synthesize_experiment(const ExperimentConfig& cfg,
                                       const ExperimentOptions& opts = {});

struct CalibrationTargets {
  double raw_fidelity = 0.923;
  double f_max = 0.947;
  double purity = 0.898;
};

struct CalibrationBounds {
  double eta_min = 0.25, eta_max = 0.45;
  double visibility_min = 0.70, visibility_max = 1.0;
  double depol_min = 0.0, depol_max = 0.30;
  double misalignment_min = 0.0, misalignment_max = 0.5;
};

struct CalibrationResult {
  ExperimentConfig config;
  double residual_raw = 0.0;
  double residual_fmax = 0.0;
  double residual_purity = 0.0;
  bool feasible = false;  // all residuals < 0.015
};

/// Coordinate-descent lattice scan plus simplex refinement over
/// (depolarizing_p, visibility, eta, local_misalignment) with kappa =
/// eta, minimising the squared distance of the model's (raw fidelity,
/// locally optimised maximum, purity) to the targets. The misalignment
/// knob is what lets the locally optimised maximum exceed the raw
/// fidelity, as in the measured gate.
CalibrationResult calibrate_to_targets(const CalibrationTargets& targets,
                                       const CalibrationBounds& bounds = {},
                                       std::uint64_t seed = 0);

}  // namespace mgforge
