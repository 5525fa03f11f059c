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

#include <functional>
#include <vector>

namespace mgforge {

struct SimplexOptions {
  double initial_step = 0.3;
  double f_tol = 1e-9;     // convergence on simplex function spread
  double x_tol = 1e-9;     // convergence on simplex size
  int max_evals = 4000;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex minimiser.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opts = {});

}  // namespace mgforge
