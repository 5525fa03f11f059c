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

#include "mgforge/algebra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mgforge {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cdouble kI{0.0, 1.0};

Mat2 make(cdouble a, cdouble b, cdouble c, cdouble d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}
}  // namespace

const Mat2& pauli_i() {
  static const Mat2 m = Mat2::Identity();
  return m;
}
const Mat2& pauli_x() {
  static const Mat2 m = make(0, 1, 1, 0);
  return m;
}
const Mat2& pauli_y() {
  static const Mat2 m = make(0, -kI, kI, 0);
  return m;
}
const Mat2& pauli_z() {
  static const Mat2 m = make(1, 0, 0, -1);
  return m;
}
const Mat2& gate_h() {
  static const Mat2 m = make(1, 1, 1, -1) / std::sqrt(2.0);
  return m;
}
const Mat2& gate_t() {
  static const Mat2 m = make(1, 0, 0, std::polar(1.0, kPi / 4.0));
  return m;
}

Mat2 rot_x(double gamma) {
  const double c = std::cos(gamma / 2.0);
  const double s = std::sin(gamma / 2.0);
  return make(c, -kI * s, -kI * s, c);
}

Mat2 rot_z(double gamma) {
  return make(std::polar(1.0, -gamma / 2.0), 0, 0, std::polar(1.0, gamma / 2.0));
}

bool all_finite(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

bool is_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  const Eigen::MatrixXcd d =
      m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.norm() <= tol;
}

void require_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                     const char* what, double tol) {
  if (!all_finite(m)) {
    throw ValidationError(std::string(what) + ": non-finite entries");
  }
  if (!is_unitary(m, tol)) {
    std::ostringstream os;
    os << what << ": matrix is not unitary within " << tol;
    throw ValidationError(os.str());
  }
}

Mat4 tensor(const Mat2& a, const Mat2& b) {
  require_unitary(a, "tensor: first factor");
  require_unitary(b, "tensor: second factor");
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

namespace {
// min over phi of ||u - e^{i phi} v||_F, attained at phi = arg Tr(u^dag v).
// Evaluating the difference directly stays accurate near zero, where the
// closed form sqrt(2n - 2|Tr(u^dag v)|) loses everything to cancellation.
template <typename M>
double phase_distance_impl(const M& u, const M& v) {
  const cdouble tr = (u.adjoint() * v).trace();
  if (std::abs(tr) < 1e-300) return std::sqrt(2.0) * u.norm();
  const cdouble phase = std::conj(tr) / std::abs(tr);
  return (u - phase * v).norm();
}
}  // namespace

double phase_distance(const Mat4& u, const Mat4& v) {
  require_unitary(u, "phase_distance: u");
  require_unitary(v, "phase_distance: v");
  return phase_distance_impl(u, v);
}

double phase_distance(const Mat2& a, const Mat2& b) {
  require_unitary(a, "phase_distance: a");
  require_unitary(b, "phase_distance: b");
  return phase_distance_impl(a, b);
}

Mat2 EulerXZX::recompose() const {
  return std::polar(1.0, phase) * (rot_x(alpha) * rot_z(-theta / 2.0) * rot_x(beta));
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

namespace {
// Wrap an X/Z rotation angle into (-pi, pi]; a 2pi shift flips the SU(2)
// sign, compensated through `phase`.
double wrap_su2_angle(double a, double& phase) {
  while (a > kPi) {
    a -= 2.0 * kPi;
    phase += kPi;
  }
  while (a <= -kPi) {
    a += 2.0 * kPi;
    phase += kPi;
  }
  return a;
}
}  // namespace

EulerXZX euler_xzx(const Mat2& u) {
  require_unitary(u, "euler_xzx");

  // Split off the global phase: R = e^{-i phi} u with det(R) = 1.
  double phi = std::arg(u.determinant()) / 2.0;
  const Mat2 r = std::polar(1.0, -phi) * u;

  // w = H R H is decomposed as Z_a X_m Z_b with m in [0, pi]; mapping back
  // through H turns Z-rotations into X-rotations and vice versa.
  const Mat2 w = gate_h() * r * gate_h();

  const double m = 2.0 * std::atan2(std::abs(w(0, 1)), std::abs(w(0, 0)));
  double sum = 0.0;   // a + b
  double diff = 0.0;  // a - b
  const double eps = 1e-14;
  if (std::abs(w(0, 0)) > eps) sum = -2.0 * std::arg(w(0, 0));
  if (std::abs(w(0, 1)) > eps) diff = -2.0 * (std::arg(w(0, 1)) + kPi / 2.0);
  double a = (sum + diff) / 2.0;
  double b = (sum - diff) / 2.0;

  // Re-express with middle angle -m (theta = 2m >= 0):
  // X_{a+pi} Z_{-m} X_{b-pi} = X_a Z_m X_b.
  EulerXZX e;
  e.theta = 2.0 * m;
  e.phase = phi;
  if (e.theta < 1e-14) {
    // Middle rotation is the identity; keep a single X rotation and the
    // smallest-|alpha| representative.
    e.theta = 0.0;
    e.alpha = 0.0;
    e.beta = wrap_su2_angle(a + b, e.phase);
  } else {
    e.alpha = wrap_su2_angle(a + kPi, e.phase);
    e.beta = wrap_su2_angle(b - kPi, e.phase);
  }
  e.phase = wrap_angle(e.phase);

  if ((e.recompose() - u).norm() > 1e-10) {
    throw NumericalError("euler_xzx: recomposition residual exceeds 1e-10");
  }
  return e;
}

namespace {
Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cdouble(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cdouble d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}
}  // namespace

Mat2 haar_unitary2(std::mt19937_64& rng) { return haar_unitary(2, rng); }
Mat4 haar_unitary4(std::mt19937_64& rng) { return haar_unitary(4, rng); }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(master) ^ a) ^ b);
}

}  // namespace mgforge
