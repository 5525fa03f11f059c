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

#include "mgforge/optics.hpp"

#include <cmath>
#include <numbers>

#include "mgforge/circuit.hpp"
#include "mgforge/parallel.hpp"
#include "mgforge/simplex.hpp"

namespace mgforge {

namespace {
constexpr double kPi = std::numbers::pi;

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(std::string(what) + " must lie in [0,1]");
  }
}

Mat4 diag4(double a, double b, double c, double d) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

// Coherent (interfering) coincidence operator.
Mat4 coherent_operator(const PPBSParams& p) {
  const double s = std::sqrt(p.eta * p.kappa);
  return diag4(2.0 * p.eta - 1.0, s, s, p.kappa);
}

// Distinguishable-photon branches: both photons reflected (V always
// reflects; the single-path HV/VH/VV amplitudes live here) and both
// transmitted (only HH survives coincidence).
Mat4 reflect_branch(const PPBSParams& p) {
  const double s = std::sqrt(p.eta * p.kappa);
  return diag4(p.eta, s, s, p.kappa);
}

Mat4 transmit_branch(const PPBSParams& p) {
  return diag4(-(1.0 - p.eta), 0.0, 0.0, 0.0);
}

// Fixed local frames turning the PPBS's bit-flipped CZ into G_HH:
// G_HH = e^{i phase} (post (x) post) CZ (pre (x) pre) and
// CZ = (X (x) X) diag(-1,1,1,1) (X (x) X).
struct GhhFrames {
  Mat4 pre;   // applied before the PPBS operator
  Mat4 post;  // applied after
};

const GhhFrames& ghh_frames() {
  static const GhhFrames frames = [] {
    const Matchgate ghh(gate_h(), gate_h());
    const SymmetricDecomposition d = decompose_symmetric(ghh);
    GhhFrames f;
    f.pre = tensor(pauli_x() * d.pre_top, pauli_x() * d.pre_bottom);
    f.post = tensor(d.post_top * pauli_x(), d.post_bottom * pauli_x());
    return f;
  }();
  return frames;
}

}  // namespace

void PPBSParams::validate() const {
  require_unit_interval(eta, "PPBSParams: eta");
  require_unit_interval(kappa, "PPBSParams: kappa");
  require_unit_interval(visibility, "PPBSParams: visibility");
}

Mat4 ppbs_postselected_operator(const PPBSParams& params) {
  params.validate();
  Mat4 k = coherent_operator(params);
  k(0, 0) = params.eta - params.visibility * (1.0 - params.eta);
  return k;
}

bool ppbs_nonunitary(const PPBSParams& params, double tol) {
  params.validate();
  const Mat4 k = coherent_operator(params);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double s = std::abs(k(i, i));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (lo <= 0.0) return true;
  return hi / lo - 1.0 > tol;
}

ProcessMatrix ppbs_process(const PPBSParams& params) {
  params.validate();
  const double v = params.visibility;
  if (v >= 1.0) {
    return ProcessMatrix::from_kraus({coherent_operator(params)});
  }
  return ProcessMatrix::from_kraus_weighted(
      {{v, coherent_operator(params)},
       {1.0 - v, reflect_branch(params)},
       {1.0 - v, transmit_branch(params)}});
}

void ExperimentConfig::validate() const {
  ppbs.validate();
  require_unit_interval(depolarizing_p, "ExperimentConfig: depolarizing_p");
  require_unit_interval(dephasing_p, "ExperimentConfig: dephasing_p");
  if (!(std::abs(local_misalignment) <= 1.0)) {
    throw ValidationError(
        "ExperimentConfig: local_misalignment must lie in [-1, 1] rad");
  }
  if (n_nominal < 1.0) {
    throw ValidationError("ExperimentConfig: n_nominal must be >= 1");
  }
}

ProcessMatrix experiment_model_chi(const ExperimentConfig& cfg) {
  cfg.validate();
  const GhhFrames& fr = ghh_frames();
  Mat4 post = fr.post;
  if (cfg.local_misalignment != 0.0) {
    post = post * tensor(rot_x(cfg.local_misalignment),
                         rot_z(cfg.local_misalignment));
  }
  ProcessMatrix chi = ProcessMatrix::compose(
      ProcessMatrix::from_unitary(post),
      ProcessMatrix::compose(ppbs_process(cfg.ppbs),
                             ProcessMatrix::from_unitary(fr.pre)));
  if (cfg.depolarizing_p > 0.0) {
    chi = ProcessMatrix::compose(
        ProcessMatrix::depolarizing(cfg.depolarizing_p), chi);
  }
  if (cfg.dephasing_p > 0.0) {
    chi = ProcessMatrix::compose(ProcessMatrix::dephasing(cfg.dephasing_p),
                                 chi);
  }
  return chi;
}

namespace {

struct ModelTriple {
  double raw = 0.0;
  double f_max = 0.0;
  double purity = 0.0;
};

ModelTriple model_triple(const ExperimentConfig& cfg, int restarts,
                         std::uint64_t seed) {
  const ProcessMatrix chi = experiment_model_chi(cfg);
  static const ProcessMatrix ideal =
      ProcessMatrix::from_unitary(compose_matchgate(Matchgate(gate_h(), gate_h())));
  ModelTriple t;
  t.raw = process_fidelity(chi, ideal);
  t.purity = chi.purity();
  OrbitOptions orbit;
  orbit.restarts = restarts;
  orbit.seed = seed;
  t.f_max = local_orbit_fidelity(chi, WeylPoint{kPi / 2.0, 0.0, 0.0}, orbit).f_nl;
  return t;
}

}  // namespace

ExperimentReport synthesize_experiment(const ExperimentConfig& cfg,
                                       const ExperimentOptions& opts) {
  cfg.validate();
  ExperimentReport rep;
  rep.config = cfg;

  const ProcessMatrix chi_model = experiment_model_chi(cfg);
  static const ProcessMatrix chi_ideal =
      ProcessMatrix::from_unitary(compose_matchgate(Matchgate(gate_h(), gate_h())));

  rep.dataset = simulate_counts(chi_model, cfg.n_nominal, cfg.seed);
  rep.mle = mle_reconstruct(rep.dataset, opts.mle);
  rep.mle_converged = rep.mle.converged;
  rep.mle_tp_defect = rep.mle.tp_defect;

  rep.raw_fidelity = process_fidelity(rep.mle.chi, chi_ideal);
  rep.purity = rep.mle.chi.purity();

  // One bootstrap pass, both statistics.
  {
    struct Stats {
      double f_sum = 0, f_sq = 0, p_sum = 0, p_sq = 0;
      int n = 0, failures = 0;
    } st;
    const int resamples = opts.bootstrap_resamples;
    std::vector<double> fv(resamples), pv(resamples);
    std::vector<char> ok(resamples, 0);
    parallel_for(resamples, opts.jobs, [&](std::size_t i) {
      TomographyDataset resampled = rep.dataset;
      std::mt19937_64 rng(derive_seed(cfg.seed, 0xB007, i));
      for (auto& r : resampled.records) {
        if (r.counts > 0) {
          std::poisson_distribution<long long> poisson(
              static_cast<double>(r.counts));
          r.counts = poisson(rng);
        }
      }
      try {
        const MleResult m = mle_reconstruct(resampled, opts.mle);
        fv[i] = process_fidelity(m.chi, chi_ideal);
        pv[i] = m.chi.purity();
        ok[i] = 1;
      } catch (const Error&) {
        ok[i] = 0;
      }
    });
    for (int i = 0; i < resamples; ++i) {
      if (!ok[i]) {
        ++st.failures;
        continue;
      }
      st.f_sum += fv[i];
      st.f_sq += fv[i] * fv[i];
      st.p_sum += pv[i];
      st.p_sq += pv[i] * pv[i];
      ++st.n;
    }
    if (st.n >= 2) {
      const double fm = st.f_sum / st.n, pm = st.p_sum / st.n;
      rep.raw_fidelity_std =
          std::sqrt(std::max(0.0, (st.f_sq - st.n * fm * fm) / (st.n - 1)));
      rep.purity_std =
          std::sqrt(std::max(0.0, (st.p_sq - st.n * pm * pm) / (st.n - 1)));
    }
    rep.bootstrap_failures = st.failures;
  }

  const ChamberGrid grid = build_chamber_grid(opts.grid_target);
  MapOptions mopts;
  mopts.orbit = opts.orbit;
  mopts.orbit.seed = derive_seed(cfg.seed, 0x3A90);
  mopts.jobs = opts.jobs;
  rep.map = fidelity_map(rep.mle.chi, grid, mopts);
  rep.map.target = "experiment";

  const LocateResult loc =
      locate_maximum(rep.map, rep.mle.chi, WeylPoint{kPi / 2.0, 0.0, 0.0});
  rep.f_max = loc.f_max;
  rep.argmax_point = loc.point;
  rep.delta_nl = loc.delta_nl;
  rep.flat_map = loc.flat;
  rep.volume_fraction_0p9 = volume_fraction(rep.map, 0.9);
  return rep;
}

CalibrationResult calibrate_to_targets(const CalibrationTargets& targets,
                                       const CalibrationBounds& bounds,
                                       std::uint64_t seed) {
  require_unit_interval(targets.raw_fidelity, "targets.raw_fidelity");
  require_unit_interval(targets.f_max, "targets.f_max");
  require_unit_interval(targets.purity, "targets.purity");

  auto make_config = [&](double p, double v, double eta, double mis) {
    ExperimentConfig cfg;
    cfg.ppbs.eta = eta;
    cfg.ppbs.kappa = eta;
    cfg.ppbs.visibility = v;
    cfg.depolarizing_p = p;
    cfg.local_misalignment = mis;
    return cfg;
  };
  auto clampv = [](double x, double lo, double hi) {
    return std::min(hi, std::max(lo, x));
  };
  auto residuals = [&](const ModelTriple& t) {
    return std::array<double, 3>{t.raw - targets.raw_fidelity,
                                 t.f_max - targets.f_max,
                                 t.purity - targets.purity};
  };
  auto objective_at = [&](double p, double v, double eta, double mis,
                          int restarts) {
    const ModelTriple t =
        model_triple(make_config(p, v, eta, mis), restarts, seed);
    const auto r = residuals(t);
    return r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
  };

  // Coarse lattice scan.
  double best_p = 0.0, best_v = 1.0, best_eta = 1.0 / 3.0, best_mis = 0.0;
  double best_f = objective_at(best_p, best_v, best_eta, best_mis, 3);
  for (int ip = 0; ip <= 5; ++ip)
    for (int iv = 0; iv <= 3; ++iv)
      for (int ie = 0; ie <= 5; ++ie)
        for (int im = 0; im <= 5; ++im) {
          const double p = bounds.depol_min +
                           (bounds.depol_max - bounds.depol_min) * ip / 5.0;
          const double v =
              bounds.visibility_min +
              (bounds.visibility_max - bounds.visibility_min) * iv / 3.0;
          const double eta =
              bounds.eta_min + (bounds.eta_max - bounds.eta_min) * ie / 5.0;
          const double mis =
              bounds.misalignment_min +
              (bounds.misalignment_max - bounds.misalignment_min) * im / 5.0;
          const double f = objective_at(p, v, eta, mis, 2);
          if (f < best_f) {
            best_f = f;
            best_p = p;
            best_v = v;
            best_eta = eta;
            best_mis = mis;
          }
        }

  // Simplex refinement (bounded by clamping).
  SimplexOptions sopts;
  sopts.initial_step = 0.02;
  sopts.f_tol = 1e-10;
  sopts.x_tol = 1e-7;
  sopts.max_evals = 300;
  const SimplexResult res = nelder_mead(
      [&](const std::vector<double>& x) {
        const double p = clampv(x[0], bounds.depol_min, bounds.depol_max);
        const double v =
            clampv(x[1], bounds.visibility_min, bounds.visibility_max);
        const double eta = clampv(x[2], bounds.eta_min, bounds.eta_max);
        const double mis =
            clampv(x[3], bounds.misalignment_min, bounds.misalignment_max);
        return objective_at(p, v, eta, mis, 2);
      },
      {best_p, best_v, best_eta, best_mis}, sopts);

  CalibrationResult out;
  const double p = clampv(res.x[0], bounds.depol_min, bounds.depol_max);
  const double v = clampv(res.x[1], bounds.visibility_min, bounds.visibility_max);
  const double eta = clampv(res.x[2], bounds.eta_min, bounds.eta_max);
  const double mis =
      clampv(res.x[3], bounds.misalignment_min, bounds.misalignment_max);
  out.config = make_config(p, v, eta, mis);

  const ModelTriple t = model_triple(out.config, 8, seed);
  const auto r = residuals(t);
  out.residual_raw = std::abs(r[0]);
  out.residual_fmax = std::abs(r[1]);
  out.residual_purity = std::abs(r[2]);
  out.feasible = out.residual_raw < 0.015 && out.residual_fmax < 0.015 &&
                 out.residual_purity < 0.015;
  return out;
}

}  // namespace mgforge
