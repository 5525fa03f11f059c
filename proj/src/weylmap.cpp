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

#include "mgforge/weylmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <unordered_map>

#include "mgforge/parallel.hpp"
#include "mgforge/simplex.hpp"

namespace mgforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kChamberVolume = kPi * kPi * kPi / 24.0;

Mat4 kron_nocheck(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Sparse Pauli-trace table: t_m = sum_s coef * W(row, col).
struct PauliTraceTable {
  struct Entry {
    int row, col;
    cdouble coef;
  };
  std::array<std::array<Entry, 4>, 16> entries;
  std::array<int, 16> sizes{};
};

const PauliTraceTable& pauli_trace_table() {
  static const PauliTraceTable table = [] {
    PauliTraceTable t;
    const auto& paulis = pauli16();
    for (int m = 0; m < 16; ++m) {
      int s = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const cdouble c = paulis[m](i, j);
          if (std::abs(c) > 0.0) t.entries[m][s++] = {j, i, c};  // Tr: W(j,i)
        }
      t.sizes[m] = s;
    }
    return t;
  }();
  return table;
}

Vec16 fast_overlap(const Mat4& w) {
  const auto& tt = pauli_trace_table();
  Vec16 t;
  for (int m = 0; m < 16; ++m) {
    cdouble acc = 0.0;
    for (int s = 0; s < tt.sizes[m]; ++s) {
      const auto& e = tt.entries[m][s];
      acc += e.coef * w(e.row, e.col);
    }
    t(m) = acc;
  }
  return t;
}

Mat2 zxz(double a, double b, double c) {
  return rot_z(a) * rot_x(b) * rot_z(c);
}

// ZXZ angles of a 2x2 unitary (phase dropped): u ~ Z_a X_m Z_b.
std::array<double, 3> zxz_angles(const Mat2& u) {
  const EulerXZX e = euler_xzx(gate_h() * u * gate_h());
  return {e.alpha, -e.theta / 2.0, e.beta};
}

// Chamber-symmetry Clifford frames used as zero-cost candidate dressings:
// permutations x pairwise sign flips x single-coordinate pi shifts of the
// canonical gate are realised by fixed local unitaries.
struct CliffordFrame {
  Mat2 u1, v1, u2, v2;
};

const std::vector<CliffordFrame>& clifford_frames() {
  static const std::vector<CliffordFrame> frames = [] {
    const Mat2 id = Mat2::Identity();
    const Mat2 s = (Mat2() << 1, 0, 0, cdouble(0, 1)).finished();
    const Mat2 vx = rot_x(kPi / 2.0);

    struct Conj {
      Mat2 m1, m2;
    };
    // (M1 (x) M2) C (M1^dag (x) M2^dag)
    const Conj swap12{s, s};
    const Conj swap23{vx, vx};
    const std::vector<std::vector<Conj>> perms = {
        {},
        {swap12},
        {swap23},
        {swap12, swap23},
        {swap23, swap12},
        {swap12, swap23, swap12}};
    const std::vector<Mat2> flips = {id, pauli_z(), pauli_x(), pauli_y()};
    const std::vector<std::pair<Mat2, Mat2>> shifts = {
        {pauli_x(), pauli_x()}, {pauli_y(), pauli_y()}, {pauli_z(), pauli_z()}};

    std::vector<CliffordFrame> out;
    out.reserve(192);
    for (const auto& perm : perms) {
      CliffordFrame base{id, id, id, id};
      for (const auto& cj : perm) {
        base.u1 = cj.m1 * base.u1;
        base.v1 = cj.m2 * base.v1;
        base.u2 = base.u2 * cj.m1.adjoint();
        base.v2 = base.v2 * cj.m2.adjoint();
      }
      for (const auto& fl : flips) {
        CliffordFrame f = base;
        f.u1 = fl * f.u1;
        f.u2 = f.u2 * fl.adjoint();
        for (int mask = 0; mask < 8; ++mask) {
          CliffordFrame g = f;
          for (int bit = 0; bit < 3; ++bit) {
            if (mask & (1 << bit)) {
              g.u2 = g.u2 * shifts[bit].first;
              g.v2 = g.v2 * shifts[bit].second;
            }
          }
          out.push_back(g);
        }
      }
    }
    return out;
  }();
  return frames;
}

double dressing_fidelity(const Mat16& chi, const Mat4& canonical,
                         const LocalDressing& d) {
  const Mat4 w =
      kron_nocheck(d.u1, d.v1) * canonical * kron_nocheck(d.u2, d.v2);
  return fidelity_with_unitary(chi, fast_overlap(w));
}

// KAK frame of the closest unitary to chi (its dominant Kraus direction);
// composing it with the symmetry frames gives near-exact starts whenever
// the target is unitary or close to one.
std::optional<KakDecomposition> closest_unitary_anchor(const Mat16& chi) {
  Eigen::SelfAdjointEigenSolver<Mat16> es(chi);
  const Vec16 e = es.eigenvectors().col(15);
  const auto& paulis = pauli16();
  Mat4 w_raw = Mat4::Zero();
  for (int m = 0; m < 16; ++m) w_raw += e(m) * paulis[m];
  Eigen::JacobiSVD<Mat4> svd(w_raw,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-9) return std::nullopt;
  const Mat4 w = svd.matrixU() * svd.matrixV().adjoint();
  try {
    return kak_decompose(w);
  } catch (const Error&) {
    return std::nullopt;
  }
}

double angles_fidelity(const Mat16& chi, const Mat4& canonical,
                       const std::vector<double>& x) {
  const Mat4 w = kron_nocheck(zxz(x[0], x[1], x[2]), zxz(x[3], x[4], x[5])) *
                 canonical *
                 kron_nocheck(zxz(x[6], x[7], x[8]), zxz(x[9], x[10], x[11]));
  return fidelity_with_unitary(chi, fast_overlap(w));
}

std::vector<double> dressing_to_angles(const LocalDressing& d) {
  std::vector<double> x(12);
  const Mat2* ms[4] = {&d.u1, &d.v1, &d.u2, &d.v2};
  for (int i = 0; i < 4; ++i) {
    const auto a = zxz_angles(*ms[i]);
    x[3 * i] = a[0];
    x[3 * i + 1] = a[1];
    x[3 * i + 2] = a[2];
  }
  return x;
}

LocalDressing angles_to_dressing(const std::vector<double>& x) {
  LocalDressing d;
  d.u1 = zxz(x[0], x[1], x[2]);
  d.v1 = zxz(x[3], x[4], x[5]);
  d.u2 = zxz(x[6], x[7], x[8]);
  d.v2 = zxz(x[9], x[10], x[11]);
  return d;
}

}  // namespace

FidelityMapPoint local_orbit_fidelity(const ProcessMatrix& chi,
                                      const WeylPoint& p,
                                      const OrbitOptions& opts) {
  if (!is_chamber_canonical(p, 1e-6)) {
    throw ValidationError("local_orbit_fidelity: point is not canonical");
  }
  const Mat4 canonical = canonical_unitary(p);
  const Mat16& x = chi.chi();

  FidelityMapPoint out;
  out.point = p;

  // Zero-cost candidates: the chamber-symmetry Clifford frames, both bare
  // and composed with the KAK frame of the target's closest unitary.
  double best_frame_f = -1.0;
  LocalDressing best_frame;
  auto consider = [&](const LocalDressing& d) {
    const double f = dressing_fidelity(x, canonical, d);
    if (f > best_frame_f) {
      best_frame_f = f;
      best_frame = d;
    }
  };
  const std::optional<KakDecomposition> anchor = closest_unitary_anchor(x);
  for (const auto& fr : clifford_frames()) {
    consider(LocalDressing{fr.u1, fr.v1, fr.u2, fr.v2});
    if (anchor) {
      consider(LocalDressing{anchor->dressing.u1 * fr.u1,
                             anchor->dressing.v1 * fr.v1,
                             fr.u2 * anchor->dressing.u2,
                             fr.v2 * anchor->dressing.v2});
    }
  }
  out.f_nl = best_frame_f;
  out.best_dressing = best_frame;

  SimplexOptions sopts;
  sopts.initial_step = 0.25;
  sopts.f_tol = opts.f_tol * 1e-2;
  sopts.x_tol = 1e-7;
  sopts.max_evals = opts.max_evals;

  std::mt19937_64 rng(derive_seed(opts.seed, 0x06B1));
  std::uniform_real_distribution<double> ang(-kPi, kPi);

  bool all_budget = true;
  for (int r = 0; r < opts.restarts; ++r) {
    std::vector<double> x0(12);
    if (r == 0) {
      x0 = dressing_to_angles(best_frame);
    } else if (r == 1) {
      std::fill(x0.begin(), x0.end(), 0.0);
    } else {
      for (auto& v : x0) v = ang(rng);
    }
    const SimplexResult res = nelder_mead(
        [&](const std::vector<double>& a) {
          return -angles_fidelity(x, canonical, a);
        },
        x0, sopts);
    ++out.restarts_used;
    if (res.converged) all_budget = false;
    if (-res.f > out.f_nl) {
      out.f_nl = -res.f;
      out.best_dressing = angles_to_dressing(res.x);
    }
    if (out.f_nl >= 1.0 - opts.f_tol * 1e-2) break;
  }
  out.converged = !all_budget || out.restarts_used == 0;
  out.f_nl = std::clamp(out.f_nl, 0.0, 1.0);
  return out;
}

ChamberGrid build_chamber_grid(int target_count) {
  if (target_count < 10) {
    throw ValidationError("build_chamber_grid: target_count must be >= 10");
  }

  auto lattice_points = [](int m) {
    std::vector<std::array<int, 3>> pts;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= std::min(i, m - i); ++j)
        for (int k = 0; k <= j; ++k) {
          if (k == 0 && 2 * i > m) continue;  // c3 = 0 fold
          pts.push_back({i, j, k});
        }
    return pts;
  };

  // Pick the lattice pitch pi/m whose point count is closest to target.
  const double h_est =
      std::cbrt(kChamberVolume / static_cast<double>(target_count));
  const int m0 = std::max(2, static_cast<int>(std::lround(kPi / h_est)));
  int best_m = -1;
  std::size_t best_count = 0;
  for (int m = std::max(2, m0 - 8); m <= m0 + 8; ++m) {
    const std::size_t c = lattice_points(m).size();
    if (best_m < 0 ||
        std::llabs(static_cast<long long>(c) - target_count) <
            std::llabs(static_cast<long long>(best_count) - target_count)) {
      best_m = m;
      best_count = c;
    }
  }
  const int m = best_m;
  const double h = kPi / m;

  ChamberGrid grid;
  grid.spacing = h;
  const auto ipts = lattice_points(m);
  grid.points.reserve(ipts.size());
  std::unordered_map<std::uint64_t, std::size_t> index;
  auto key = [m](int i, int j, int k) {
    return (static_cast<std::uint64_t>(i) * (m + 2) + j) * (m + 2) + k;
  };
  for (std::size_t n = 0; n < ipts.size(); ++n) {
    const auto& q = ipts[n];
    grid.points.push_back({q[0] * h, q[1] * h, q[2] * h});
    index.emplace(key(q[0], q[1], q[2]), n);
  }

  // Voronoi weights clipped to the chamber, Monte-Carlo with a fixed seed.
  const std::size_t samples =
      std::max<std::size_t>(2'000'000, 500 * grid.points.size());
  std::vector<std::int64_t> hits(grid.points.size(), 0);
  std::mt19937_64 rng(0xC4A3BE12u);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    double t1 = uni(rng), t2 = uni(rng), t3 = uni(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 > t3) std::swap(t2, t3);
    if (t1 > t2) std::swap(t1, t2);
    const double b1 = t1, b2 = t2 - t1, b3 = t3 - t2;
    // Vertices: [pi,0,0], [pi/2,pi/2,0], [pi/2,pi/2,pi/2].
    const double c1 = b1 * kPi + (b2 + b3) * kPi / 2.0;
    const double c2 = (b2 + b3) * kPi / 2.0;
    const double c3 = b3 * kPi / 2.0;

    // Nearest existing lattice point by expanding neighbourhood search.
    const int i0 = static_cast<int>(std::lround(c1 / h));
    const int j0 = static_cast<int>(std::lround(c2 / h));
    const int k0 = static_cast<int>(std::lround(c3 / h));
    std::size_t best_idx = 0;
    double best_d = -1.0;
    for (int radius = 1; radius <= 4; ++radius) {
      for (int di = -radius; di <= radius; ++di)
        for (int dj = -radius; dj <= radius; ++dj)
          for (int dk = -radius; dk <= radius; ++dk) {
            const int i = i0 + di, j = j0 + dj, k = k0 + dk;
            if (i < 0 || j < 0 || k < 0 || i > m) continue;
            const auto it = index.find(key(i, j, k));
            if (it == index.end()) continue;
            const double d1 = c1 - i * h, d2 = c2 - j * h, d3 = c3 - k * h;
            const double d = d1 * d1 + d2 * d2 + d3 * d3;
            if (best_d < 0.0 || d < best_d) {
              best_d = d;
              best_idx = it->second;
            }
          }
      if (best_d >= 0.0) break;
    }
    if (best_d < 0.0) continue;  // cannot happen for in-chamber samples
    ++hits[best_idx];
  }

  grid.weights.resize(grid.points.size());
  double total = 0.0;
  for (std::size_t n = 0; n < hits.size(); ++n) {
    const double w = std::max<double>(static_cast<double>(hits[n]), 0.5);
    grid.weights[n] = w;
    total += w;
  }
  for (auto& w : grid.weights) w *= kChamberVolume / total;
  return grid;
}

FidelityMap fidelity_map(const ProcessMatrix& chi, const ChamberGrid& grid,
                         const MapOptions& opts) {
  FidelityMap map;
  map.grid = grid;
  map.seed = opts.orbit.seed;
  map.values.resize(grid.size());
  parallel_for(grid.size(), opts.jobs, [&](std::size_t i) {
    OrbitOptions o = opts.orbit;
    o.seed = derive_seed(opts.orbit.seed, 0x3A9, i);
    map.values[i] = local_orbit_fidelity(chi, grid.points[i], o);
  });
  return map;
}

double volume_fraction(const FidelityMap& map, double threshold) {
  if (map.values.size() != map.grid.size()) {
    throw ValidationError("volume_fraction: map is incomplete");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    den += map.grid.weights[i];
    if (map.values[i].f_nl >= threshold) num += map.grid.weights[i];
  }
  return num / den;
}

LocateResult locate_maximum(const FidelityMap& map, const ProcessMatrix& chi,
                            const WeylPoint& target) {
  if (map.values.empty()) {
    throw ValidationError("locate_maximum: empty map");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < map.values.size(); ++i) {
    if (map.values[i].f_nl > map.values[best].f_nl) best = i;
  }

  std::vector<double> sorted;
  sorted.reserve(map.values.size());
  for (const auto& v : map.values) sorted.push_back(v.f_nl);
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  // Continue the optimisation in c-space jointly with the locals; a soft
  // tetrahedron barrier keeps the point in range.
  const Mat16& x = chi.chi();
  auto barrier = [](const WeylPoint& p) {
    double pen = 0.0;
    auto viol = [&pen](double v) {
      if (v > 0.0) pen += v * v;
    };
    viol(p.c2 - p.c1);
    viol(p.c3 - p.c2);
    viol(-p.c3);
    viol(p.c1 + p.c2 - kPi);
    viol(p.c1 - kPi);
    return 50.0 * pen;
  };
  auto objective = [&](const std::vector<double>& v) {
    const WeylPoint p{v[0], v[1], v[2]};
    const Mat4 canonical = canonical_unitary(p);
    const std::vector<double> angles(v.begin() + 3, v.end());
    return -angles_fidelity(x, canonical, angles) + barrier(p);
  };

  std::vector<double> x0;
  const WeylPoint& bp = map.grid.points[best];
  x0.insert(x0.end(), {bp.c1, bp.c2, bp.c3});
  const auto best_angles = dressing_to_angles(map.values[best].best_dressing);
  x0.insert(x0.end(), best_angles.begin(), best_angles.end());

  SimplexOptions sopts;
  sopts.initial_step = std::min(0.25, map.grid.spacing);
  sopts.f_tol = 1e-9;
  sopts.x_tol = 1e-8;
  sopts.max_evals = 4000;
  const SimplexResult res = nelder_mead(objective, x0, sopts);

  LocateResult out;
  if (-res.f >= map.values[best].f_nl) {
    out.point = chamber_reduce(WeylPoint{res.x[0], res.x[1], res.x[2]});
    out.f_max = -res.f;
  } else {
    out.point = bp;
    out.f_max = map.values[best].f_nl;
  }
  out.delta_nl = nonlocal_distance(out.point, target);
  out.flat = (map.values[best].f_nl - median) < 1e-3;
  return out;
}

}  // namespace mgforge
