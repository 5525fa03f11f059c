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

// Command-line front end; everything goes through the C API in mgforge.h.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgforge.h"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  double tolerance = 1e-8;
};

int exit_code(mg_status s) {
  switch (s) {
    case MG_OK: return 0;
    case MG_ERR_RUNTIME: return 1;
    default: return 2;  // usage / validation / parse / unknown name
  }
}

int fail(mg_status s) {
  std::cerr << "error: " << mg_last_error() << "\n";
  return exit_code(s);
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { mg_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
}

void write_manifest(const GlobalOpts& g, const std::string& command,
                    const std::string& config_path) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  const json manifest{{"command", command},
                      {"config_path", config_path},
                      {"seed", g.seed},
                      {"output_dir", g.output_dir},
                      {"tool_version", mg_version()},
                      {"timestamp", stamp}};
  std::filesystem::create_directories(g.output_dir);
  write_file(g.output_dir + "/manifest.json", manifest.dump(2) + "\n");
}

// chi handle from --gate NAME / --matrix FILE / --process FILE.
mg_status load_chi(const std::string& gate, const std::string& matrix_file,
                   const std::string& process_file, mg_chi** out) {
  if (!gate.empty()) return mg_chi_from_gate(gate.c_str(), out);
  if (!matrix_file.empty()) {
    return mg_chi_from_unitary_json(read_file(matrix_file).c_str(), out);
  }
  return mg_chi_from_json(read_file(process_file).c_str(), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mgforge: two-qubit matchgate compiler and nonlocal process "
               "analysis"};
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* env = std::getenv("MG_FORGE_SEED")) {
    g.seed = std::strtoull(env, nullptr, 10);
  }
  app.add_option("--seed", g.seed, "Master seed (default: MG_FORGE_SEED)");
  app.add_option("--output-dir", g.output_dir, "Directory for file outputs");
  app.add_option("--jobs", g.jobs, "Worker thread bound");
  app.add_option("--tolerance", g.tolerance,
                 "Verification tolerance for decompose");

  // gates -------------------------------------------------------------
  std::string gate_name;
  auto* gates = app.add_subcommand("gates", "Print a named gate as matrix JSON");
  gates->add_option("name", gate_name)->required();

  // decompose ---------------------------------------------------------
  std::string mg_file;
  bool symmetric = false;
  auto* dec = app.add_subcommand(
      "decompose", "Decompose a matchgate JSON file into a circuit");
  dec->add_option("file", mg_file)->required();
  dec->add_flag("--symmetric", symmetric, "Use the single-CZ_theta form");

  // kak -----------------------------------------------------------------
  std::string kak_gate, kak_matrix;
  auto* kak = app.add_subcommand(
      "kak", "Canonical Weyl coordinates and local invariants");
  kak->add_option("--gate", kak_gate, "Named two-qubit gate");
  kak->add_option("--matrix", kak_matrix, "4x4 matrix JSON file");

  // chi -----------------------------------------------------------------
  std::string chi_gate, chi_matrix, chi_out;
  auto* chi_cmd = app.add_subcommand("chi", "Chi matrix of a unitary");
  chi_cmd->add_option("--gate", chi_gate);
  chi_cmd->add_option("--matrix", chi_matrix);
  chi_cmd->add_option("--out", chi_out, "Write to file instead of stdout");

  // tomo ----------------------------------------------------------------
  auto* tomo = app.add_subcommand("tomo", "Process tomography");
  tomo->require_subcommand(1);
  std::string sim_gate, sim_matrix, sim_process, sim_out = "dataset.jsonl";
  double sim_counts = 1e4;
  auto* sim = tomo->add_subcommand("simulate", "Simulate Poissonian counts");
  sim->add_option("--gate", sim_gate);
  sim->add_option("--matrix", sim_matrix);
  sim->add_option("--chi", sim_process, "Process JSON file");
  sim->add_option("--counts", sim_counts, "Nominal counts per setting");
  sim->add_option("--out", sim_out, "Dataset file name");

  std::string rec_file, rec_reference, rec_out;
  auto* rec = tomo->add_subcommand("reconstruct", "Maximum-likelihood chi");
  rec->add_option("file", rec_file)->required();
  rec->add_option("--reference-gate", rec_reference,
                  "Print fidelity to this named gate");
  rec->add_option("--out", rec_out, "Write the chi JSON to a file");

  // weylmap --------------------------------------------------------------
  std::string map_gate, map_matrix, map_process, map_grid = "desk";
  double map_threshold = 0.9;
  auto* wm = app.add_subcommand(
      "weylmap", "Locally optimised fidelity map over the chamber");
  wm->add_option("--gate", map_gate);
  wm->add_option("--matrix", map_matrix);
  wm->add_option("--target", map_process, "Process JSON file");
  wm->add_option("--grid", map_grid, "desk (~1000), paper (~6201) or a count");
  wm->add_option("--threshold", map_threshold, "Volume-fraction threshold");

  // experiment -------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "Synthetic PPBS experiment");
  exp->require_subcommand(1);
  std::string run_config;
  std::string run_grid = "desk";
  int run_resamples = 60;
  auto* run = exp->add_subcommand("run", "Full pipeline from a config JSON");
  run->add_option("--config", run_config, "Config file (defaults to ideal)");
  run->add_option("--grid", run_grid, "desk, paper or a count");
  run->add_option("--resamples", run_resamples, "Bootstrap resamples");

  std::string cal_targets;
  auto* cal = exp->add_subcommand("calibrate",
                                  "Fit the model to fidelity/purity targets");
  cal->add_option("--targets", cal_targets,
                  "JSON file {raw_fidelity, f_max, purity}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto grid_target = [](const std::string& s) {
    if (s == "desk") return 1000;
    if (s == "paper") return 6201;
    return std::stoi(s);
  };

  try {
    if (gates->parsed()) {
      OwnedString out;
      int relaxed = 0;
      const mg_status s = mg_gate_json(gate_name.c_str(), &out.ptr, &relaxed);
      if (s != MG_OK) return fail(s);
      std::cout << out.str() << "\n";
      if (relaxed) {
        std::cerr << "note: " << gate_name
                  << " is a matchgate only under the relaxed determinant "
                     "rule\n";
      }
      return 0;
    }

    if (dec->parsed()) {
      OwnedString out;
      double residual = 0.0;
      const mg_status s = mg_decompose_json(read_file(mg_file).c_str(),
                                            symmetric ? 1 : 0, &out.ptr,
                                            &residual);
      if (s != MG_OK) return fail(s);
      std::cout << out.str() << "\n";
      std::cout << "residual " << std::setprecision(12) << residual << "\n";
      return residual > g.tolerance ? 1 : 0;
    }

    if (kak->parsed()) {
      std::string matrix_json;
      if (!kak_gate.empty()) {
        OwnedString m;
        const mg_status s = mg_gate_json(kak_gate.c_str(), &m.ptr, nullptr);
        if (s != MG_OK) return fail(s);
        matrix_json = m.str();
      } else if (!kak_matrix.empty()) {
        matrix_json = read_file(kak_matrix);
      } else {
        std::cerr << "error: kak needs --gate or --matrix\n";
        return 2;
      }
      OwnedString report;
      const mg_status s = mg_kak_report_json(matrix_json.c_str(), &report.ptr);
      if (s != MG_OK) return fail(s);
      std::cout << report.str() << "\n";
      write_manifest(g, "kak", kak_matrix);
      return 0;
    }

    if (chi_cmd->parsed()) {
      if (chi_gate.empty() && chi_matrix.empty()) {
        std::cerr << "error: chi needs --gate or --matrix\n";
        return 2;
      }
      mg_chi* chi = nullptr;
      const mg_status s = load_chi(chi_gate, chi_matrix, "", &chi);
      if (s != MG_OK) return fail(s);
      OwnedString out;
      const mg_status s2 = mg_chi_to_json(chi, &out.ptr);
      mg_chi_free(chi);
      if (s2 != MG_OK) return fail(s2);
      if (chi_out.empty()) {
        std::cout << out.str() << "\n";
      } else {
        write_file(chi_out, out.str() + "\n");
      }
      return 0;
    }

    if (sim->parsed()) {
      if (sim_gate.empty() && sim_matrix.empty() && sim_process.empty()) {
        std::cerr << "error: tomo simulate needs --gate, --matrix or --chi\n";
        return 2;
      }
      mg_chi* chi = nullptr;
      mg_status s = load_chi(sim_gate, sim_matrix, sim_process, &chi);
      if (s != MG_OK) return fail(s);
      mg_dataset* ds = nullptr;
      s = mg_tomo_simulate(chi, sim_counts, g.seed, &ds);
      mg_chi_free(chi);
      if (s != MG_OK) return fail(s);
      OwnedString text;
      s = mg_dataset_to_jsonl(ds, &text.ptr);
      mg_dataset_free(ds);
      if (s != MG_OK) return fail(s);
      std::filesystem::create_directories(g.output_dir);
      const std::string path = g.output_dir + "/" + sim_out;
      write_file(path, text.str());
      std::cout << "wrote " << path << "\n";
      write_manifest(g, "tomo simulate", "");
      return 0;
    }

    if (rec->parsed()) {
      mg_dataset* ds = nullptr;
      mg_status s = mg_dataset_from_jsonl(read_file(rec_file).c_str(), &ds);
      if (s != MG_OK) return fail(s);
      mg_chi* chi = nullptr;
      OwnedString info;
      s = mg_tomo_reconstruct(ds, &chi, &info.ptr);
      mg_dataset_free(ds);
      if (s != MG_OK) return fail(s);
      std::cout << info.str() << "\n";
      if (!rec_reference.empty()) {
        mg_chi* ref = nullptr;
        s = mg_chi_from_gate(rec_reference.c_str(), &ref);
        if (s != MG_OK) {
          mg_chi_free(chi);
          return fail(s);
        }
        double fid = 0.0;
        mg_chi_fidelity(chi, ref, &fid);
        mg_chi_free(ref);
        std::cout << "fidelity " << std::setprecision(12) << fid << "\n";
      }
      OwnedString out;
      s = mg_chi_to_json(chi, &out.ptr);
      mg_chi_free(chi);
      if (s != MG_OK) return fail(s);
      if (!rec_out.empty()) write_file(rec_out, out.str() + "\n");
      write_manifest(g, "tomo reconstruct", rec_file);
      return 0;
    }

    if (wm->parsed()) {
      if (map_gate.empty() && map_matrix.empty() && map_process.empty()) {
        std::cerr << "error: weylmap needs --gate, --matrix or --target\n";
        return 2;
      }
      mg_chi* chi = nullptr;
      mg_status s = load_chi(map_gate, map_matrix, map_process, &chi);
      if (s != MG_OK) return fail(s);
      const json opts{{"grid_target", grid_target(map_grid)},
                      {"seed", g.seed},
                      {"jobs", g.jobs},
                      {"threshold", map_threshold},
                      {"label", map_gate.empty() ? "chi" : map_gate}};
      std::filesystem::create_directories(g.output_dir);
      OwnedString summary;
      s = mg_weylmap_run(chi, opts.dump().c_str(), g.output_dir.c_str(),
                         &summary.ptr);
      mg_chi_free(chi);
      if (s != MG_OK) return fail(s);
      std::cout << summary.str() << "\n";
      write_manifest(g, "weylmap", map_process);
      return 0;
    }

    if (run->parsed()) {
      json config = json::object();
      if (!run_config.empty()) config = json::parse(read_file(run_config));
      if (!config.contains("seed")) config["seed"] = g.seed;
      const json opts{{"grid_target", grid_target(run_grid)},
                      {"bootstrap_resamples", run_resamples},
                      {"jobs", g.jobs}};
      std::filesystem::create_directories(g.output_dir);
      OwnedString report;
      const mg_status s =
          mg_experiment_run(config.dump().c_str(), opts.dump().c_str(),
                            g.output_dir.c_str(), &report.ptr);
      if (s != MG_OK) return fail(s);
      std::cout << report.str() << "\n";
      write_manifest(g, "experiment run", run_config);
      return 0;
    }

    if (cal->parsed()) {
      std::string targets;
      if (!cal_targets.empty()) targets = read_file(cal_targets);
      OwnedString result;
      const mg_status s = mg_experiment_calibrate(
          targets.empty() ? nullptr : targets.c_str(), &result.ptr);
      if (s != MG_OK) return fail(s);
      std::cout << result.str() << "\n";
      write_manifest(g, "experiment calibrate", cal_targets);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
