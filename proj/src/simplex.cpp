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

#include "mgforge/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mgforge {

SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const SimplexOptions& opts) {
  const std::size_t n = x0.size();
  SimplexResult res;
  res.x = x0;

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 1; i <= n; ++i) pts[i][i - 1] += opts.initial_step;
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);
  res.evals = static_cast<int>(n) + 1;

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  while (res.evals < opts.max_evals) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double t = pts[i][j] - pts[best][j];
        d += t * t;
      }
      size = std::max(size, std::sqrt(d));
    }
    if (std::abs(fv[worst] - fv[best]) <= opts.f_tol && size <= opts.x_tol) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

    auto blend = [&](std::vector<double>& out, double coef) {
      for (std::size_t j = 0; j < n; ++j)
        out[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
    };

    blend(xr, -1.0);
    const double fr = f(xr);
    ++res.evals;

    if (fr < fv[order[0]]) {
      blend(xe, -2.0);
      const double fe = f(xe);
      ++res.evals;
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      blend(xc, outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++res.evals;
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        // shrink towards the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          fv[i] = f(pts[i]);
          ++res.evals;
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = pts[best];
  res.f = fv[best];
  return res;
}

}  // namespace mgforge
