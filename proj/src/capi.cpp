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

#include "mgforge.h"

#include <cstring>
#include <fstream>
#include <numbers>
#include <string>

#include "mgforge/json_io.hpp"

namespace {

using namespace mgforge;

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
mg_status guarded(Fn&& fn) {
  try {
    fn();
    return MG_OK;
  } catch (const UnknownNameError& e) {
    g_last_error = e.what();
    return MG_ERR_UNKNOWN_NAME;
  } catch (const ConstraintError& e) {
    g_last_error = e.what();
    return MG_ERR_CONSTRAINT;
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return MG_ERR_PARSE;
  } catch (const ValidationError& e) {
    g_last_error = e.what();
    return MG_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MG_ERR_RUNTIME;
  }
}

mg_status invalid_argument(const char* msg) {
  g_last_error = msg;
  return MG_ERR_INVALID_ARGUMENT;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw Error("failed writing '" + path + "'");
}

}  // namespace

struct mg_chi {
  mgforge::ProcessMatrix value;
};

struct mg_dataset {
  mgforge::TomographyDataset value;
};

extern "C" {

const char* mg_version(void) {
#ifdef MGFORGE_VERSION
  return MGFORGE_VERSION;
#else
  return "0.0.0";
#endif
}

const char* mg_last_error(void) { return g_last_error.c_str(); }

void mg_string_free(char* s) { std::free(s); }

mg_status mg_gate_json(const char* name, char** out_matrix_json,
                       int* out_relaxed_matchgate) {
  if (!name || !out_matrix_json) return invalid_argument("null argument");
  return guarded([&] {
    const auto g = named_gate(name);
    json j;
    if (std::holds_alternative<Mat2>(g)) {
      j = matrix_to_json(std::get<Mat2>(g));
    } else {
      j = matrix_to_json(std::get<Mat4>(g));
    }
    *out_matrix_json = dup_string(j.dump(2));
    if (out_relaxed_matchgate) {
      *out_relaxed_matchgate = named_gate_is_relaxed(name) ? 1 : 0;
    }
  });
}

mg_status mg_gate_names_json(char** out_names_json) {
  if (!out_names_json) return invalid_argument("null argument");
  return guarded([&] {
    *out_names_json = dup_string(json(named_gate_names()).dump());
  });
}

mg_status mg_decompose_json(const char* matchgate_json, int symmetric,
                            char** out_circuit_json, double* out_residual) {
  if (!matchgate_json || !out_circuit_json) {
    return invalid_argument("null argument");
  }
  return guarded([&] {
    const Matchgate m = matchgate_from_json(parse_json(matchgate_json));
    Circuit circuit;
    if (symmetric) {
      circuit = decompose_symmetric(m).to_circuit();
    } else {
      circuit = decompose_general(m).circuit;
    }
    const double residual =
        phase_distance(simulate_circuit(circuit), compose_matchgate(m));
    *out_circuit_json = dup_string(circuit_to_json(circuit).dump(2));
    if (out_residual) *out_residual = residual;
  });
}

mg_status mg_kak_report_json(const char* matrix_json,
                             char** out_report_json) {
  if (!matrix_json || !out_report_json) return invalid_argument("null argument");
  return guarded([&] {
    const Mat4 u = mat4_from_json(parse_json(matrix_json));
    const WeylPoint p = kak_coordinates(u);
    const MakhlinInvariants inv = makhlin_invariants(u);
    const bool pe = is_perfect_entangler(p);

    std::string nearest;
    double nearest_distance = 0.0;
    bool first = true;
    for (const auto& name : named_gate_names()) {
      const auto g = named_gate(name);
      if (!std::holds_alternative<Mat4>(g)) continue;
      const WeylPoint q = kak_coordinates(std::get<Mat4>(g));
      const double d = nonlocal_distance(p, q);
      if (first || d < nearest_distance) {
        nearest = name;
        nearest_distance = d;
        first = false;
      }
    }

    const json j{{"c1", p.c1},
                 {"c2", p.c2},
                 {"c3", p.c3},
                 {"g1_re", inv.g1.real()},
                 {"g1_im", inv.g1.imag()},
                 {"g2", inv.g2},
                 {"perfect_entangler", pe},
                 {"nearest_named_gate", nearest},
                 {"nearest_distance", nearest_distance}};
    *out_report_json = dup_string(j.dump(2));
  });
}

mg_status mg_chi_from_gate(const char* name, mg_chi** out) {
  if (!name || !out) return invalid_argument("null argument");
  return guarded([&] {
    const auto g = named_gate(name);
    if (!std::holds_alternative<Mat4>(g)) {
      throw ValidationError("chi requires a two-qubit gate");
    }
    *out = new mg_chi{ProcessMatrix::from_unitary(std::get<Mat4>(g))};
  });
}

mg_status mg_chi_from_unitary_json(const char* matrix_json, mg_chi** out) {
  if (!matrix_json || !out) return invalid_argument("null argument");
  return guarded([&] {
    const Mat4 u = mat4_from_json(parse_json(matrix_json));
    *out = new mg_chi{ProcessMatrix::from_unitary(u)};
  });
}

mg_status mg_chi_from_json(const char* chi_json, mg_chi** out) {
  if (!chi_json || !out) return invalid_argument("null argument");
  return guarded([&] {
    *out = new mg_chi{process_from_json(parse_json(chi_json))};
  });
}

mg_status mg_chi_to_json(const mg_chi* chi, char** out_json) {
  if (!chi || !out_json) return invalid_argument("null argument");
  return guarded([&] {
    *out_json = dup_string(process_to_json(chi->value).dump(2));
  });
}

mg_status mg_chi_purity(const mg_chi* chi, double* out) {
  if (!chi || !out) return invalid_argument("null argument");
  return guarded([&] { *out = chi->value.purity(); });
}

mg_status mg_chi_fidelity(const mg_chi* a, const mg_chi* b, double* out) {
  if (!a || !b || !out) return invalid_argument("null argument");
  return guarded([&] { *out = process_fidelity(a->value, b->value); });
}

void mg_chi_free(mg_chi* chi) { delete chi; }

mg_status mg_tomo_simulate(const mg_chi* chi, double n_nominal, uint64_t seed,
                           mg_dataset** out) {
  if (!chi || !out) return invalid_argument("null argument");
  return guarded([&] {
    *out = new mg_dataset{simulate_counts(chi->value, n_nominal, seed)};
  });
}

mg_status mg_dataset_from_jsonl(const char* text, mg_dataset** out) {
  if (!text || !out) return invalid_argument("null argument");
  return guarded([&] { *out = new mg_dataset{dataset_from_jsonl(text)}; });
}

mg_status mg_dataset_to_jsonl(const mg_dataset* ds, char** out_text) {
  if (!ds || !out_text) return invalid_argument("null argument");
  return guarded([&] { *out_text = dup_string(dataset_to_jsonl(ds->value)); });
}

void mg_dataset_free(mg_dataset* ds) { delete ds; }

mg_status mg_tomo_reconstruct(const mg_dataset* ds, mg_chi** out_chi,
                              char** out_info_json) {
  if (!ds || !out_chi) return invalid_argument("null argument");
  return guarded([&] {
    const MleResult r = mle_reconstruct(ds->value);
    *out_chi = new mg_chi{r.chi};
    if (out_info_json) {
      const json info{{"converged", r.converged},
                      {"tp_converged", r.tp_converged},
                      {"iterations", r.iterations},
                      {"log_likelihood", r.log_likelihood},
                      {"tp_defect", r.tp_defect}};
      *out_info_json = dup_string(info.dump(2));
    }
  });
}

mg_status mg_weylmap_run(const mg_chi* chi, const char* opts_json,
                         const char* out_dir, char** out_summary_json) {
  if (!chi || !out_dir || !out_summary_json) {
    return invalid_argument("null argument");
  }
  return guarded([&] {
    const json opts =
        opts_json ? parse_json(opts_json) : json(json::value_t::object);
    const int grid_target = opts.value("grid_target", 1000);
    const double threshold = opts.value("threshold", 0.9);

    MapOptions mopts;
    mopts.orbit.seed = opts.value("seed", std::uint64_t{0});
    mopts.orbit.restarts = opts.value("restarts", 8);
    mopts.jobs = opts.value("jobs", 1);

    const ChamberGrid grid = build_chamber_grid(grid_target);
    FidelityMap map = fidelity_map(chi->value, grid, mopts);
    map.target = opts.value("label", std::string("chi"));

    WeylPoint target{std::numbers::pi / 2.0, 0.0, 0.0};
    if (opts.contains("target_point")) {
      target = weyl_point_from_json(opts.at("target_point"));
    }
    const LocateResult loc = locate_maximum(map, chi->value, target);
    const double vf = volume_fraction(map, threshold);

    const std::string dir(out_dir);
    write_file(dir + "/map.csv", map_to_csv(map));
    const json summary = map_summary_json(map, loc, vf);
    write_file(dir + "/map_summary.json", summary.dump(2) + "\n");
    *out_summary_json = dup_string(summary.dump(2));
  });
}

mg_status mg_experiment_run(const char* config_json, const char* opts_json,
                            const char* out_dir, char** out_report_json) {
  if (!config_json || !out_dir || !out_report_json) {
    return invalid_argument("null argument");
  }
  return guarded([&] {
    const ExperimentConfig cfg =
        experiment_config_from_json(parse_json(config_json));
    const json opts =
        opts_json ? parse_json(opts_json) : json(json::value_t::object);

    ExperimentOptions eopts;
    eopts.grid_target = opts.value("grid_target", 1000);
    eopts.bootstrap_resamples = opts.value("bootstrap_resamples", 60);
    eopts.jobs = opts.value("jobs", 1);
    eopts.orbit.restarts = opts.value("restarts", 8);

    const ExperimentReport rep = synthesize_experiment(cfg, eopts);

    const std::string dir(out_dir);
    const std::string dataset_path = dir + "/dataset.jsonl";
    const std::string map_path = dir + "/map.csv";
    write_file(dataset_path, dataset_to_jsonl(rep.dataset));
    write_file(map_path, map_to_csv(rep.map));
    const LocateResult loc{rep.argmax_point, rep.f_max, rep.delta_nl,
                           rep.flat_map};
    write_file(dir + "/map_summary.json",
               map_summary_json(rep.map, loc, rep.volume_fraction_0p9).dump(2) +
                   "\n");

    const json report =
        experiment_report_to_json(rep, dataset_path, map_path);
    write_file(dir + "/report.json", report.dump(2) + "\n");
    *out_report_json = dup_string(report.dump(2));
  });
}

mg_status mg_experiment_calibrate(const char* targets_json,
                                  char** out_result_json) {
  if (!out_result_json) return invalid_argument("null argument");
  return guarded([&] {
    CalibrationTargets targets;
    if (targets_json) {
      const json j = parse_json(targets_json);
      targets.raw_fidelity = j.value("raw_fidelity", targets.raw_fidelity);
      targets.f_max = j.value("f_max", targets.f_max);
      targets.purity = j.value("purity", targets.purity);
    }
    const CalibrationResult r = calibrate_to_targets(targets);
    const json j{{"config", experiment_config_to_json(r.config)},
                 {"residual_raw", r.residual_raw},
                 {"residual_fmax", r.residual_fmax},
                 {"residual_purity", r.residual_purity},
                 {"feasible", r.feasible}};
    *out_result_json = dup_string(j.dump(2));
  });
}

}  // extern "C"
