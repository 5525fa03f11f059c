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

#include "mgforge/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mgforge/simplex.hpp"

namespace mgforge {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cdouble kI{0.0, 1.0};
}  // namespace

const Mat4& magic_basis() {
  static const Mat4 b = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Mat4 m;
    // Columns: (|00>+|11>)/sqrt2, -i(|00>-|11>)/sqrt2,
    //          (|01>-|10>)/sqrt2, -i(|01>+|10>)/sqrt2.
    m << s, -kI * s, 0, 0,    //
        0, 0, s, -kI * s,     //
        0, 0, -s, -kI * s,    //
        s, kI * s, 0, 0;
    return m;
  }();
  return b;
}

std::array<double, 4> canonical_eigenphases(const WeylPoint& p) {
  return {(p.c1 - p.c2 + p.c3) / 2.0, (-p.c1 + p.c2 + p.c3) / 2.0,
          -(p.c1 + p.c2 + p.c3) / 2.0, (p.c1 + p.c2 - p.c3) / 2.0};
}

Mat4 canonical_unitary(const WeylPoint& p) {
  if (!std::isfinite(p.c1) || !std::isfinite(p.c2) || !std::isfinite(p.c3)) {
    throw ValidationError("canonical_unitary: non-finite coordinates");
  }
  const auto mu = canonical_eigenphases(p);
  Mat4 d = Mat4::Zero();
  for (int k = 0; k < 4; ++k) d(k, k) = std::polar(1.0, -mu[k]);
  const Mat4& b = magic_basis();
  return b * d * b.adjoint();
}

bool in_weyl_tetrahedron(const WeylPoint& p, double tol) {
  return p.c1 <= kPi + tol && p.c1 >= p.c2 - tol && p.c2 >= p.c3 - tol &&
         p.c3 >= -tol && p.c1 + p.c2 <= kPi + tol;
}

bool is_chamber_canonical(const WeylPoint& p, double tol) {
  if (!in_weyl_tetrahedron(p, tol)) return false;
  if (p.c3 <= tol && p.c1 > kPi / 2.0 + tol) return false;
  return true;
}

WeylPoint chamber_reduce(const WeylPoint& p) {
  // Symmetry images: permutations x pairwise sign flips x pi shifts.
  // Pre-wrap each coordinate into (-pi, pi] (2 pi = two allowed shifts),
  // then a single +-pi shift per coordinate reaches the chamber.
  const double w[3] = {wrap_angle(p.c1), wrap_angle(p.c2), wrap_angle(p.c3)};
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static constexpr double flips[4][3] = {
      {1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
  static constexpr double shifts[3] = {-kPi, 0.0, kPi};

  bool found = false;
  WeylPoint best;
  auto consider = [&](double a, double b, double c) {
    const WeylPoint q{a, b, c};
    if (!is_chamber_canonical(q, 1e-9)) return;
    if (!found || q.c1 < best.c1 - 1e-15 ||
        (q.c1 <= best.c1 + 1e-15 &&
         (q.c2 < best.c2 - 1e-15 ||
          (q.c2 <= best.c2 + 1e-15 && q.c3 < best.c3)))) {
      best = q;
      found = true;
    }
  };

  for (const auto& pm : perms) {
    const double v[3] = {w[pm[0]], w[pm[1]], w[pm[2]]};
    for (const auto& fl : flips) {
      for (double s0 : shifts)
        for (double s1 : shifts)
          for (double s2 : shifts)
            consider(fl[0] * v[0] + s0, fl[1] * v[1] + s1, fl[2] * v[2] + s2);
    }
  }
  if (!found) {
    throw NumericalError("chamber_reduce: no canonical image found");
  }
  best.c1 = std::max(best.c1, 0.0);
  best.c2 = std::max(std::min(best.c2, best.c1), 0.0);
  best.c3 = std::max(std::min(best.c3, best.c2), 0.0);
  return best;
}

WeylPoint kak_coordinates(const Mat4& u) {
  require_unitary(u, "kak_coordinates");

  const cdouble det = u.determinant();
  const Mat4 u4 = u * std::pow(det, -0.25);

  const Mat4& b = magic_basis();
  const Mat4 m = b.adjoint() * u4 * b;
  const Mat4 mm = m.transpose() * m;

  Eigen::ComplexEigenSolver<Mat4> es(mm, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("kak_coordinates: eigen solve failed");
  }
  std::array<double, 4> phases{};
  for (int k = 0; k < 4; ++k) phases[k] = std::arg(es.eigenvalues()(k));
  std::sort(phases.begin(), phases.end());

  // mu_k = -phase_k / 2 with the branch of the last one fixed by
  // det(M) = 1; any residual pi ambiguity is absorbed by the reduction.
  double mu[4];
  for (int k = 0; k < 3; ++k) mu[k] = -phases[k] / 2.0;
  mu[3] = -(mu[0] + mu[1] + mu[2]);

  const WeylPoint raw{mu[0] + mu[3], mu[1] + mu[3], mu[0] + mu[1]};
  return chamber_reduce(raw);
}

KronFactors kron_factor(const Mat4& u) {
  if (!all_finite(u)) throw ValidationError("kron_factor: non-finite");
  // For u = e^{i psi} L (x) R the 2x2 blocks are (e^{i psi} L_ij) R.
  Mat2 r;
  r << u(0, 0), u(0, 1), u(1, 0), u(1, 1);
  if (std::abs(r.determinant()) < 0.1) {
    r << u(2, 0), u(2, 1), u(3, 0), u(3, 1);
  }
  const cdouble det_r = r.determinant();
  if (std::abs(det_r) < 0.01) {
    throw NumericalError("kron_factor: input is not a tensor product");
  }
  r /= std::sqrt(det_r);

  // Contract away R; the surviving entries are e^{i psi} L_ij.
  Mat4 temp = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      temp.block<2, 2>(2 * i, 2 * j) =
          u.block<2, 2>(2 * i, 2 * j) * r.adjoint();
  Mat2 l;
  l << temp(0, 0), temp(0, 2), temp(2, 0), temp(2, 2);
  const cdouble det_l = l.determinant();
  if (std::abs(det_l) < 0.5) {
    throw NumericalError("kron_factor: left factor extraction failed");
  }
  l /= std::sqrt(det_l);

  KronFactors out{l, r, std::arg(det_l) / 2.0};
  Mat4 rec;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) rec.block<2, 2>(2 * i, 2 * j) = l(i, j) * r;
  if ((std::polar(1.0, out.phase) * rec - u).norm() > 1e-8) {
    out.phase = wrap_angle(out.phase + kPi);
    if ((std::polar(1.0, out.phase) * rec - u).norm() > 1e-8) {
      throw NumericalError("kron_factor: residual too large");
    }
  }
  return out;
}

namespace {

// Simultaneously diagonalise the real and imaginary parts of a unitary
// complex symmetric matrix with a real orthogonal basis. Random mixing
// handles degeneracies; the fixed seed keeps the branch deterministic.
Eigen::Matrix4d orthogonal_eigenbasis(const Mat4& mm) {
  const Eigen::Matrix4d re = mm.real();
  const Eigen::Matrix4d im = mm.imag();
  std::mt19937_64 rng(0x5EEDBA5Eu);
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double wa = attempt == 0 ? 1.0 : g(rng);
    const double wb = attempt == 0 ? 0.6180339887498949 : g(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(wa * re + wb * im);
    const Eigen::Matrix4d p = es.eigenvectors();
    const Mat4 d = p.transpose().cast<cdouble>() * mm * p.cast<cdouble>();
    double offdiag = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) offdiag = std::max(offdiag, std::abs(d(i, j)));
    if (offdiag < 1e-10) return p;
  }
  throw NumericalError("kak_decompose: failed to diagonalise m^T m");
}

struct ReductionMoves {
  WeylPoint canon;
  Mat2 l1, l2, r1, r2;  // canonical ~ (l1 (x) l2) C(raw) (r1 (x) r2)
};

ReductionMoves reduction_moves(const WeylPoint& raw) {
  const WeylPoint canon = chamber_reduce(raw);
  const double w[3] = {wrap_angle(raw.c1), wrap_angle(raw.c2),
                       wrap_angle(raw.c3)};

  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  // Transposition sequences realising each permutation (applied in order;
  // t12 swaps c1/c2 via S (x) S, t23 swaps c2/c3 via X_{pi/2} (x) X_{pi/2}).
  static const std::vector<std::vector<int>> perm_moves = {
      {}, {23}, {12}, {12, 23}, {23, 12}, {12, 23, 12}};
  static constexpr double flips[4][3] = {
      {1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
  static constexpr double shifts[3] = {-kPi, 0.0, kPi};

  const Mat2 s_gate = (Mat2() << 1, 0, 0, cdouble(0, 1)).finished();
  const Mat2 vx = [] {
    const double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
    Mat2 m;
    m << c, cdouble(0, -s), cdouble(0, -s), c;
    return m;
  }();
  for (int pi = 0; pi < 6; ++pi) {
    const double v[3] = {w[perms[pi][0]], w[perms[pi][1]], w[perms[pi][2]]};
    for (int fi = 0; fi < 4; ++fi) {
      for (int s0 = 0; s0 < 3; ++s0)
        for (int s1 = 0; s1 < 3; ++s1)
          for (int s2 = 0; s2 < 3; ++s2) {
            const WeylPoint cand{flips[fi][0] * v[0] + shifts[s0],
                                 flips[fi][1] * v[1] + shifts[s1],
                                 flips[fi][2] * v[2] + shifts[s2]};
            const double d = std::abs(cand.c1 - canon.c1) +
                             std::abs(cand.c2 - canon.c2) +
                             std::abs(cand.c3 - canon.c3);
            if (d > 1e-9) continue;

            ReductionMoves out;
            out.canon = canon;
            out.l1 = out.l2 = out.r1 = out.r2 = Mat2::Identity();
            auto conj_move = [&](const Mat2& m1, const Mat2& m2) {
              out.l1 = m1 * out.l1;
              out.l2 = m2 * out.l2;
              out.r1 = out.r1 * m1.adjoint();
              out.r2 = out.r2 * m2.adjoint();
            };
            for (int mv : perm_moves[pi]) {
              if (mv == 12) conj_move(s_gate, s_gate);
              if (mv == 23) conj_move(vx, vx);
            }
            if (fi == 1) conj_move(pauli_z(), Mat2::Identity());
            if (fi == 2) conj_move(pauli_y(), Mat2::Identity());
            if (fi == 3) conj_move(pauli_x(), Mat2::Identity());
            const Mat2 shift_ops[3] = {pauli_x(), pauli_y(), pauli_z()};
            const int ss[3] = {s0, s1, s2};
            for (int k = 0; k < 3; ++k) {
              if (ss[k] != 1) {  // actual +-pi shift
                out.r1 = out.r1 * shift_ops[k];
                out.r2 = out.r2 * shift_ops[k];
              }
            }
            return out;
          }
    }
  }
  throw NumericalError("reduction_moves: no symmetry image matches");
}

}  // namespace

KakDecomposition kak_decompose(const Mat4& u) {
  require_unitary(u, "kak_decompose");

  const cdouble det = u.determinant();
  const double phase0 = std::arg(det) / 4.0;
  const Mat4 u4 = std::polar(1.0, -phase0) * u;

  const Mat4& b = magic_basis();
  const Mat4 m = b.adjoint() * u4 * b;
  const Mat4 mm = m.transpose() * m;

  Eigen::Matrix4d preal = orthogonal_eigenbasis(mm);
  if (preal.determinant() < 0.0) preal.col(3) *= -1.0;
  const Mat4 p = preal.cast<cdouble>();

  const Eigen::Vector4cd d2 = (p.transpose() * mm * p).diagonal();
  double mu[4];
  for (int k = 0; k < 4; ++k) mu[k] = -std::arg(d2(k)) / 2.0;
  // det(D) must be +1 so that the left factor lands in SO(4).
  const double total = mu[0] + mu[1] + mu[2] + mu[3];
  if (std::abs(std::remainder(total, 2.0 * kPi)) > kPi / 2.0) mu[3] += kPi;

  Mat4 dinv = Mat4::Zero();
  for (int k = 0; k < 4; ++k) dinv(k, k) = std::polar(1.0, mu[k]);
  const Mat4 k1 = m * p * dinv;
  if (k1.imag().cwiseAbs().maxCoeff() > 1e-8) {
    throw NumericalError("kak_decompose: left factor is not real orthogonal");
  }

  const Mat4 q1 = b * k1 * b.adjoint();
  const Mat4 q2 = b * p.transpose() * b.adjoint();
  const KronFactors f1 = kron_factor(q1);
  const KronFactors f2 = kron_factor(q2);

  const WeylPoint raw{mu[0] + mu[3], mu[1] + mu[3], mu[0] + mu[1]};
  const ReductionMoves red = reduction_moves(raw);

  KakDecomposition out;
  out.point = red.canon;
  out.dressing.u1 = f1.l * red.l1.adjoint();
  out.dressing.v1 = f1.r * red.l2.adjoint();
  out.dressing.u2 = red.r1.adjoint() * f2.l;
  out.dressing.v2 = red.r2.adjoint() * f2.r;

  const Mat4 w = tensor(out.dressing.u1, out.dressing.v1) *
                 canonical_unitary(out.point) *
                 tensor(out.dressing.u2, out.dressing.v2);
  const cdouble tr = (w.adjoint() * u).trace();
  out.phase = std::arg(tr);
  if ((std::polar(1.0, out.phase) * w - u).norm() > 1e-8) {
    throw NumericalError("kak_decompose: recomposition residual too large");
  }
  return out;
}

MakhlinInvariants makhlin_invariants(const Mat4& u) {
  require_unitary(u, "makhlin_invariants");
  const Mat4& b = magic_basis();
  const Mat4 mb = b.adjoint() * u * b;
  const Mat4 m = mb.transpose() * mb;
  const cdouble tr = m.trace();
  const cdouble det = u.determinant();
  const cdouble g1 = tr * tr / (16.0 * det);
  const cdouble g2 = (tr * tr - (m * m).trace()) / (4.0 * det);
  return MakhlinInvariants{g1, g2.real()};
}

bool locally_equivalent(const Mat4& u, const Mat4& v) {
  const MakhlinInvariants a = makhlin_invariants(u);
  const MakhlinInvariants b = makhlin_invariants(v);
  return std::abs(a.g1 - b.g1) <= 1e-7 && std::abs(a.g2 - b.g2) <= 1e-7;
}

namespace {

Eigen::Vector4cd product_state(double t1, double p1, double t2, double p2) {
  const cdouble a0 = std::cos(t1 / 2.0);
  const cdouble a1 = std::polar(1.0, p1) * std::sin(t1 / 2.0);
  const cdouble b0 = std::cos(t2 / 2.0);
  const cdouble b1 = std::polar(1.0, p2) * std::sin(t2 / 2.0);
  Eigen::Vector4cd v;
  v << a0 * b0, a0 * b1, a1 * b0, a1 * b1;
  return v;
}

double output_concurrence(const Mat4& u, const std::vector<double>& x) {
  const Eigen::Vector4cd out = u * product_state(x[0], x[1], x[2], x[3]);
  // C = |v^T (Y(x)Y) v| = |2 v1 v2 - 2 v0 v3|
  return std::abs(2.0 * (out(1) * out(2) - out(0) * out(3)));
}

}  // namespace

double max_output_concurrence(const Mat4& u, const ConcurrenceOptions& opts) {
  require_unitary(u, "max_output_concurrence");

  auto objective = [&](const std::vector<double>& x) {
    return -output_concurrence(u, x);
  };

  std::vector<std::vector<double>> starts = {
      {0.0, 0.0, 0.0, 0.0},
      {kPi / 2.0, 0.0, kPi / 2.0, 0.0},
      {kPi / 2.0, kPi / 2.0, kPi / 2.0, kPi / 2.0},
      {kPi, 0.0, 0.0, 0.0},
  };
  std::mt19937_64 rng(derive_seed(opts.seed, 0xC0C0));
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  while (static_cast<int>(starts.size()) < std::max(opts.restarts, 4)) {
    starts.push_back({ang(rng) / 2.0, ang(rng), ang(rng) / 2.0, ang(rng)});
  }

  SimplexOptions sopts;
  sopts.initial_step = 0.6;
  sopts.f_tol = opts.tol * 1e-2;
  sopts.x_tol = 1e-8;
  sopts.max_evals = opts.max_evals;

  double best = 0.0;
  for (const auto& s : starts) {
    const SimplexResult r = nelder_mead(objective, s, sopts);
    best = std::max(best, -r.f);
    if (best >= 1.0 - 1e-12) break;
  }
  return std::min(best, 1.0);
}

bool is_perfect_entangler(const WeylPoint& p, const ConcurrenceOptions& opts) {
  return max_output_concurrence(canonical_unitary(p), opts) >= 1.0 - 1e-6;
}

namespace {

// Distance from the origin to a 2-D segment.
double segment_distance(double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? -(ax * dx + ay * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double px = ax + t * dx, py = ay + t * dy;
  return std::hypot(px, py);
}

bool origin_in_triangle(const double* x, const double* y, int i, int j, int k,
                        double tol) {
  // Degenerate triangles are handled by the segment tests.
  const double area = (x[j] - x[i]) * (y[k] - y[i]) -
                      (y[j] - y[i]) * (x[k] - x[i]);
  if (std::abs(area) <= tol) return false;
  auto cross = [&](int a, int b) { return x[a] * y[b] - y[a] * x[b]; };
  const double d1 = cross(i, j);
  const double d2 = cross(j, k);
  const double d3 = cross(k, i);
  const bool has_neg = d1 < -tol || d2 < -tol || d3 < -tol;
  const bool has_pos = d1 > tol || d2 > tol || d3 > tol;
  return !(has_neg && has_pos);
}

}  // namespace

bool is_perfect_entangler_fast(const WeylPoint& p, double tol) {
  const auto mu = canonical_eigenphases(p);
  double x[4], y[4];
  for (int k = 0; k < 4; ++k) {
    x[k] = std::cos(2.0 * mu[k]);
    y[k] = std::sin(2.0 * mu[k]);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (segment_distance(x[i], y[i], x[j], y[j]) <= tol) return true;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k)
        if (origin_in_triangle(x, y, i, j, k, tol)) return true;
  return false;
}

double nonlocal_distance(const WeylPoint& p, const WeylPoint& q,
                         bool min_over_images) {
  if (!in_weyl_tetrahedron(p) || !in_weyl_tetrahedron(q)) {
    throw ValidationError(
        "nonlocal_distance: inputs must lie in the Weyl tetrahedron");
  }
  auto dist = [](const WeylPoint& a, const WeylPoint& b) {
    return std::sqrt((a.c1 - b.c1) * (a.c1 - b.c1) +
                     (a.c2 - b.c2) * (a.c2 - b.c2) +
                     (a.c3 - b.c3) * (a.c3 - b.c3));
  };
  if (!min_over_images) return dist(p, q);

  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static constexpr double flips[4][3] = {
      {1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
  static constexpr double shifts[3] = {-kPi, 0.0, kPi};
  const double v[3] = {q.c1, q.c2, q.c3};
  double best = dist(p, q);
  for (const auto& pm : perms)
    for (const auto& fl : flips)
      for (double s0 : shifts)
        for (double s1 : shifts)
          for (double s2 : shifts) {
            const WeylPoint img{fl[0] * v[pm[0]] + s0, fl[1] * v[pm[1]] + s1,
                                fl[2] * v[pm[2]] + s2};
            best = std::min(best, dist(p, img));
          }
  return best;
}

}  // namespace mgforge
