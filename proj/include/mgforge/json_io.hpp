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

#include <string>

#include <json.hpp>

#include "mgforge/circuit.hpp"
#include "mgforge/optics.hpp"
#include "mgforge/tomography.hpp"
#include "mgforge/weylmap.hpp"

namespace mgforge {

using nlohmann::json;

/// Matrix JSON: {"rows": n, "cols": n, "data": [[re, im], ...]} row-major.
json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXcd>& m);
Eigen::MatrixXcd matrix_from_json(const json& j);
Mat2 mat2_from_json(const json& j);
Mat4 mat4_from_json(const json& j);

json matchgate_to_json(const Matchgate& m);
Matchgate matchgate_from_json(const json& j);

json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

json weyl_point_to_json(const WeylPoint& p);
WeylPoint weyl_point_from_json(const json& j);

/// {"basis": "pauli16", "trace_norm": r, "chi": <16x16 matrix JSON>}.
/// Parsing applies the ingestion PSD repair (clip at -1e-8).
json process_to_json(const ProcessMatrix& chi);
ProcessMatrix process_from_json(const json& j);

/// JSON-lines dataset: header {"n_nominal": ..., "seed": ...} then one
/// record per line {"prep": ["D","R"], "meas": ["H","L"], "counts": n}.
std::string dataset_to_jsonl(const TomographyDataset& ds);
TomographyDataset dataset_from_jsonl(const std::string& text);

/// CSV rows c1,c2,c3,f_nl,weight at 12 significant digits.
std::string map_to_csv(const FidelityMap& map);
json map_summary_json(const FidelityMap& map, const LocateResult& loc,
                      double volume_fraction_0p9);

json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const json& j);

json experiment_report_to_json(const ExperimentReport& rep,
                               const std::string& dataset_path,
                               const std::string& map_path);

json parse_json(const std::string& text);

}  // namespace mgforge
