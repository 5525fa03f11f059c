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

#include "mgforge/process.hpp"
#include "mgforge/weyl.hpp"

namespace mgforge {

/// Uniform cubic lattice intersected with the canonical chamber.
/// Weights approximate chamber-clipped Voronoi cell volumes (seeded Monte
/// Carlo) and sum to the chamber volume pi^3/24.
struct ChamberGrid {
  double spacing = 0.0;
  std::vector<WeylPoint> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Spacing is chosen so the point count lands within 10% of target_count.
ChamberGrid build_chamber_grid(int target_count);

struct OrbitOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  double f_tol = 1e-6;
  int max_evals = 900;
};

struct FidelityMapPoint {
  WeylPoint point;
  double f_nl = 0.0;
  LocalDressing best_dressing;
  int restarts_used = 0;
  bool converged = true;  // false when every restart hit its budget
};

/// Eq.-5 style locally optimised fidelity of `chi` against the canonical
/// gate at p: maximise F(chi, chi[(u1(x)v1) C(p) (u2(x)v2)]) over the 12
/// local Euler angles, multi-start simplex seeded per point, with the
/// chamber-symmetry Clifford frames as additional candidate starts.
FidelityMapPoint local_orbit_fidelity(const ProcessMatrix& chi,
                                      const WeylPoint& p,
                                      const OrbitOptions& opts = {});

struct FidelityMap {
  ChamberGrid grid;
  std::vector<FidelityMapPoint> values;
  std::string target;
  std::uint64_t seed = 0;
};

struct MapOptions {
  OrbitOptions orbit;
  int jobs = 1;
};

FidelityMap fidelity_map(const ProcessMatrix& chi, const ChamberGrid& grid,
                         const MapOptions& opts = {});

/// Weight-weighted fraction of the chamber with f_nl >= threshold.
double volume_fraction(const FidelityMap& map, double threshold);

struct LocateResult {
  WeylPoint point;
  double f_max = 0.0;
  double delta_nl = 0.0;
  bool flat = false;  // max - median < 1e-3
};

/// Argmax over the grid, refined by continuing the optimisation in
/// c-space beyond the lattice; reports the nonlocal distance to `target`.
LocateResult locate_maximum(const FidelityMap& map, const ProcessMatrix& chi,
                            const WeylPoint& target);

}  // namespace mgforge
