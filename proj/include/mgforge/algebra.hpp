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

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "mgforge/errors.hpp"

namespace mgforge {

using cdouble = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kEqTol = 1e-10;

// Fixed single-qubit gate set. Rotation sign convention throughout:
// X_g = exp(-i g X / 2), Z_g = exp(-i g Z / 2).
const Mat2& pauli_i();
const Mat2& pauli_x();
const Mat2& pauli_y();
const Mat2& pauli_z();
const Mat2& gate_h();
const Mat2& gate_t();

Mat2 rot_x(double gamma);
Mat2 rot_z(double gamma);

bool all_finite(const Eigen::Ref<const Eigen::MatrixXcd>& m);
bool is_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                double tol = kUnitaryTol);
void require_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                     const char* what, double tol = kUnitaryTol);

/// Kronecker product a (x) b in the fixed basis order |00>,|01>,|10>,|11>,
/// qubit 0 (top) being the first tensor factor.
Mat4 tensor(const Mat2& a, const Mat2& b);

/// min over phi of ||u - e^{i phi} v||_F = sqrt(8 - 2|Tr(u^dag v)|).
double phase_distance(const Mat4& u, const Mat4& v);
/// 2x2 variant: sqrt(4 - 2|Tr(a^dag b)|).
double phase_distance(const Mat2& a, const Mat2& b);

/// u = e^{i phase} X_alpha Z_{-theta/2} X_beta.
///
/// Branch choice: theta in [0, 2pi], which equals the preferred [0, pi]
/// branch whenever one exists; alpha, beta, phase wrapped to (-pi, pi].
struct EulerXZX {
  double alpha = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double phase = 0.0;

  Mat2 recompose() const;
};

EulerXZX euler_xzx(const Mat2& u);

/// Haar-random unitaries via QR of a complex Gaussian matrix with the
/// R-diagonal phase fix.
Mat2 haar_unitary2(std::mt19937_64& rng);
Mat4 haar_unitary4(std::mt19937_64& rng);

/// Deterministic per-task seed derivation (splitmix64 over the inputs),
/// so parallel work is order-independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0);

double wrap_angle(double a);  // into (-pi, pi]

}  // namespace mgforge
