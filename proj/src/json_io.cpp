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

#include "mgforge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mgforge {

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return j;
}

json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw ParseError("matrix JSON must have rows, cols, data");
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows <= 0 || cols <= 0 || !data.is_array() ||
      data.size() != static_cast<std::size_t>(rows * cols)) {
    throw ParseError("matrix JSON has inconsistent dimensions");
  }
  Eigen::MatrixXcd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c, ++k) {
      const auto& e = data[k];
      if (!e.is_array() || e.size() != 2) {
        throw ParseError("matrix JSON entries must be [re, im] pairs");
      }
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ParseError("matrix JSON entry is not finite");
      }
      m(i, c) = cdouble(re, im);
    }
  return m;
}

namespace {
template <typename M>
M fixed_from_json(const json& j, Eigen::Index n, const char* what) {
  const Eigen::MatrixXcd m = matrix_from_json(j);
  if (m.rows() != n || m.cols() != n) {
    throw ParseError(std::string(what) + ": expected " + std::to_string(n) +
                     "x" + std::to_string(n) + " matrix");
  }
  return M(m);
}
}  // namespace

Mat2 mat2_from_json(const json& j) {
  return fixed_from_json<Mat2>(j, 2, "mat2");
}
Mat4 mat4_from_json(const json& j) {
  return fixed_from_json<Mat4>(j, 4, "mat4");
}

json matchgate_to_json(const Matchgate& m) {
  return json{{"a", matrix_to_json(m.a())},
              {"b", matrix_to_json(m.b())},
              {"relaxed", m.relaxed()}};
}

Matchgate matchgate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b")) {
    throw ParseError("matchgate JSON must have a and b blocks");
  }
  const bool relaxed = j.value("relaxed", false);
  return Matchgate(mat2_from_json(j.at("a")), mat2_from_json(j.at("b")),
                   relaxed);
}

namespace {
const char* kind_name(GateOp::Kind k) {
  switch (k) {
    case GateOp::Kind::Local1: return "LOCAL1";
    case GateOp::Kind::Cnot: return "CNOT";
    case GateOp::Kind::ControlledU: return "CU";
    case GateOp::Kind::CzTheta: return "CZ_THETA";
  }
  throw ValidationError("bad GateOp kind");
}
}  // namespace

json circuit_to_json(const Circuit& c) {
  json ops = json::array();
  for (const auto& op : c.ops) {
    json o{{"kind", kind_name(op.kind)}};
    switch (op.kind) {
      case GateOp::Kind::Local1:
        o["qubits"] = {op.q0};
        o["matrix"] = matrix_to_json(op.u);
        break;
      case GateOp::Kind::Cnot:
        o["qubits"] = {op.q0, op.q1};
        break;
      case GateOp::Kind::ControlledU:
        o["qubits"] = {op.q0, op.q1};
        o["matrix"] = matrix_to_json(op.u);
        break;
      case GateOp::Kind::CzTheta:
        o["qubits"] = {0, 1};
        o["theta"] = op.theta;
        break;
    }
    ops.push_back(o);
  }
  return json{{"global_phase", c.global_phase}, {"ops", ops}};
}

Circuit circuit_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ops")) {
    throw ParseError("circuit JSON must have ops");
  }
  Circuit c;
  c.global_phase = j.value("global_phase", 0.0);
  for (const auto& o : j.at("ops")) {
    const std::string kind = o.at("kind").get<std::string>();
    const auto qubits = o.value("qubits", std::vector<int>{});
    if (kind == "LOCAL1") {
      if (qubits.size() != 1) throw ParseError("LOCAL1 needs one qubit");
      c.ops.push_back(GateOp::local1(qubits[0], mat2_from_json(o.at("matrix"))));
    } else if (kind == "CNOT") {
      if (qubits.size() != 2) throw ParseError("CNOT needs two qubits");
      c.ops.push_back(GateOp::cnot(qubits[0], qubits[1]));
    } else if (kind == "CU") {
      if (qubits.size() != 2) throw ParseError("CU needs two qubits");
      c.ops.push_back(GateOp::controlled_u(qubits[0], qubits[1],
                                           mat2_from_json(o.at("matrix"))));
    } else if (kind == "CZ_THETA") {
      c.ops.push_back(GateOp::cz_theta(o.at("theta").get<double>()));
    } else {
      throw ParseError("unknown op kind '" + kind + "'");
    }
  }
  return c;
}

json weyl_point_to_json(const WeylPoint& p) {
  return json{{"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}};
}

WeylPoint weyl_point_from_json(const json& j) {
  if (!j.is_object() || !j.contains("c1") || !j.contains("c2") ||
      !j.contains("c3")) {
    throw ParseError("weyl point JSON must have c1, c2, c3");
  }
  return WeylPoint{j.at("c1").get<double>(), j.at("c2").get<double>(),
                   j.at("c3").get<double>()};
}

json process_to_json(const ProcessMatrix& chi) {
  return json{{"basis", "pauli16"},
              {"trace_norm", chi.trace_norm()},
              {"chi", matrix_to_json(chi.chi())}};
}

ProcessMatrix process_from_json(const json& j) {
  if (!j.is_object() || j.value("basis", "") != "pauli16" ||
      !j.contains("chi")) {
    throw ParseError("process JSON must have basis \"pauli16\" and chi");
  }
  const Eigen::MatrixXcd m = matrix_from_json(j.at("chi"));
  if (m.rows() != 16 || m.cols() != 16) {
    throw ParseError("process JSON chi must be 16x16");
  }
  const double tn = j.value("trace_norm", 1.0);
  return ProcessMatrix::from_raw(Mat16(m), tn, /*repair=*/true);
}

std::string dataset_to_jsonl(const TomographyDataset& ds) {
  std::ostringstream os;
  os << json{{"n_nominal", ds.n_nominal}, {"seed", ds.seed}}.dump() << "\n";
  for (const auto& r : ds.records) {
    os << json{{"prep", {to_string(r.prep.q0), to_string(r.prep.q1)}},
               {"meas", {to_string(r.meas.q0), to_string(r.meas.q1)}},
               {"counts", r.counts}}
              .dump()
       << "\n";
  }
  return os.str();
}

TomographyDataset dataset_from_jsonl(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  TomographyDataset ds;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = parse_json(line);
    if (!have_header) {
      if (!j.contains("n_nominal")) {
        throw ParseError("dataset header must carry n_nominal");
      }
      ds.n_nominal = j.at("n_nominal").get<double>();
      ds.seed = j.value("seed", std::uint64_t{0});
      have_header = true;
      continue;
    }
    const auto& prep = j.at("prep");
    const auto& meas = j.at("meas");
    if (prep.size() != 2 || meas.size() != 2) {
      throw ParseError("dataset record prep/meas must be label pairs");
    }
    CountRecord r;
    r.prep = {prep_label_from_string(prep[0].get<std::string>()),
              prep_label_from_string(prep[1].get<std::string>())};
    r.meas = {meas_label_from_string(meas[0].get<std::string>()),
              meas_label_from_string(meas[1].get<std::string>())};
    r.counts = j.at("counts").get<long long>();
    ds.records.push_back(r);
  }
  if (!have_header) throw ParseError("dataset is empty");
  ds.validate();
  return ds;
}

std::string map_to_csv(const FidelityMap& map) {
  std::string out = "c1,c2,c3,f_nl,weight\n";
  char buf[160];
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const auto& p = map.grid.points[i];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", p.c1,
                  p.c2, p.c3, map.values[i].f_nl, map.grid.weights[i]);
    out += buf;
  }
  return out;
}

json map_summary_json(const FidelityMap& map, const LocateResult& loc,
                      double volume_fraction_0p9) {
  return json{{"f_max", loc.f_max},
              {"argmax", weyl_point_to_json(loc.point)},
              {"delta_nl", loc.delta_nl},
              {"flat_map", loc.flat},
              {"volume_fraction_at_0.9", volume_fraction_0p9},
              {"grid_size", map.grid.size()},
              {"grid_spacing", map.grid.spacing},
              {"target", map.target},
              {"seed", map.seed}};
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  return json{{"ppbs",
               {{"eta", cfg.ppbs.eta},
                {"kappa", cfg.ppbs.kappa},
                {"visibility", cfg.ppbs.visibility}}},
              {"depolarizing_p", cfg.depolarizing_p},
              {"dephasing_p", cfg.dephasing_p},
              {"local_misalignment", cfg.local_misalignment},
              {"n_nominal", cfg.n_nominal},
              {"seed", cfg.seed}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("ppbs")) {
    const auto& p = j.at("ppbs");
    cfg.ppbs.eta = p.value("eta", cfg.ppbs.eta);
    cfg.ppbs.kappa = p.value("kappa", cfg.ppbs.kappa);
    cfg.ppbs.visibility = p.value("visibility", cfg.ppbs.visibility);
  }
  cfg.depolarizing_p = j.value("depolarizing_p", 0.0);
  cfg.dephasing_p = j.value("dephasing_p", 0.0);
  cfg.local_misalignment = j.value("local_misalignment", 0.0);
  cfg.n_nominal = j.value("n_nominal", 1e4);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.validate();
  return cfg;
}

json experiment_report_to_json(const ExperimentReport& rep,
                               const std::string& dataset_path,
                               const std::string& map_path) {
  return json{{"config", experiment_config_to_json(rep.config)},
              {"raw_fidelity", rep.raw_fidelity},
              {"raw_fidelity_std", rep.raw_fidelity_std},
              {"purity", rep.purity},
              {"purity_std", rep.purity_std},
              {"f_max", rep.f_max},
              {"argmax_point", weyl_point_to_json(rep.argmax_point)},
              {"delta_nl", rep.delta_nl},
              {"volume_fraction_0.9", rep.volume_fraction_0p9},
              {"flat_map", rep.flat_map},
              {"mle_tp_defect", rep.mle_tp_defect},
              {"mle_converged", rep.mle_converged},
              {"bootstrap_failures", rep.bootstrap_failures},
              {"dataset_path", dataset_path},
              {"map_path", map_path}};
}

}  // namespace mgforge
