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

#include "mgforge/matchgate.hpp"

#include <cmath>
#include <sstream>

namespace mgforge {

Matchgate::Matchgate(const Mat2& a, const Mat2& b, bool relaxed)
    : a_(a), b_(b), relaxed_(relaxed) {
  require_unitary(a_, "Matchgate: block a");
  require_unitary(b_, "Matchgate: block b");
  const cdouble da = a_.determinant();
  const cdouble db = b_.determinant();
  if (!relaxed_ && std::abs(da - db) > kEqTol) {
    std::ostringstream os;
    os << "Matchgate: determinant mismatch det(a) = (" << da.real() << ", "
       << da.imag() << "), det(b) = (" << db.real() << ", " << db.imag()
       << ")";
    throw ConstraintError(os.str());
  }
}

bool Matchgate::symmetric(double tol) const {
  return phase_distance(a_, b_) <= tol;
}

Mat4 compose_matchgate(const Matchgate& m) {
  const Mat2& a = m.a();
  const Mat2& b = m.b();
  Mat4 u = Mat4::Zero();
  u(0, 0) = a(0, 0);
  u(0, 3) = a(0, 1);
  u(3, 0) = a(1, 0);
  u(3, 3) = a(1, 1);
  u(1, 1) = b(0, 0);
  u(1, 2) = b(0, 1);
  u(2, 1) = b(1, 0);
  u(2, 2) = b(1, 1);
  return u;
}

LogicalQubit::LogicalQubit(const Eigen::Vector2cd& amplitudes)
    : amplitudes_(amplitudes) {
  if (!all_finite(amplitudes_) ||
      std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw ValidationError("LogicalQubit: amplitudes must be normalised");
  }
}

Eigen::Vector4cd LogicalQubit::physical() const {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = amplitudes_(0);  // |00>
  psi(3) = amplitudes_(1);  // |11>
  return psi;
}

LogicalQubit LogicalQubit::from_physical(const Eigen::Vector4cd& psi,
                                         double tol) {
  if (std::abs(psi(1)) > tol || std::abs(psi(2)) > tol) {
    throw ValidationError(
        "LogicalQubit: state has odd-parity support, not a dual-rail "
        "encoding");
  }
  Eigen::Vector2cd amp;
  amp << psi(0), psi(3);
  return LogicalQubit(amp / amp.norm());
}

std::variant<Matchgate, MatchgateRejection> recognize_matchgate(
    const Mat4& u, double pattern_tol) {
  require_unitary(u, "recognize_matchgate");

  static constexpr int forbidden[8][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 3},
                                          {2, 0}, {2, 3}, {3, 1}, {3, 2}};
  for (const auto& p : forbidden) {
    if (std::abs(u(p[0], p[1])) > pattern_tol) {
      std::ostringstream os;
      os << "pattern violation: |u(" << p[0] << "," << p[1]
         << ")| = " << std::abs(u(p[0], p[1])) << " > " << pattern_tol;
      return MatchgateRejection{MatchgateRejection::Reason::PatternViolation,
                                os.str(), std::nullopt, std::nullopt};
    }
  }

  Mat2 a;
  a << u(0, 0), u(0, 3), u(3, 0), u(3, 3);
  Mat2 b;
  b << u(1, 1), u(1, 2), u(2, 1), u(2, 2);

  // Joint phase canonicalisation: a_11 real non-negative, falling back to
  // a_21 when a_11 vanishes.
  cdouble anchor = a(0, 0);
  if (std::abs(anchor) <= pattern_tol) anchor = a(1, 0);
  if (std::abs(anchor) > 0.0) {
    const cdouble ph = std::conj(anchor) / std::abs(anchor);
    a *= ph;
    b *= ph;
  }

  const cdouble da = a.determinant();
  const cdouble db = b.determinant();
  if (std::abs(da - db) > pattern_tol) {
    std::ostringstream os;
    os << "determinant mismatch: det(a) = (" << da.real() << ", " << da.imag()
       << "), det(b) = (" << db.real() << ", " << db.imag() << ")";
    return MatchgateRejection{MatchgateRejection::Reason::DetMismatch,
                              os.str(), a, b};
  }
  return Matchgate(a, b, false);
}

namespace {

Mat4 cnot_matrix() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

Mat4 cz_matrix() {
  Mat4 m = Mat4::Identity();
  m(3, 3) = -1;
  return m;
}

Mat4 swap_matrix() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(3, 3) = 1;
  return m;
}

}  // namespace

std::variant<Mat2, Mat4> named_gate(std::string_view name) {
  if (name == "I") return pauli_i();
  if (name == "X") return pauli_x();
  if (name == "Y") return pauli_y();
  if (name == "Z") return pauli_z();
  if (name == "H") return gate_h();
  if (name == "T") return gate_t();
  if (name == "CNOT") return cnot_matrix();
  if (name == "CZ") return cz_matrix();
  if (name == "SWAP") return swap_matrix();
  if (name == "G_HH") return compose_matchgate(Matchgate(gate_h(), gate_h()));
  if (name == "G_XX") return tensor(pauli_x(), pauli_x());
  if (name == "G_TT") return tensor(gate_t(), pauli_i());
  if (name == "G_ZX") return compose_matchgate(Matchgate(pauli_z(), pauli_x()));
  if (name == "G_IX")
    return compose_matchgate(Matchgate(pauli_i(), pauli_x(), true));
  throw UnknownNameError("named_gate: unknown gate '" + std::string(name) +
                         "'");
}

std::vector<std::string> named_gate_names() {
  return {"I",  "X",    "Y",    "Z",    "H",    "T",    "CNOT",
          "CZ", "SWAP", "G_HH", "G_XX", "G_TT", "G_ZX", "G_IX"};
}

bool named_gate_is_relaxed(std::string_view name) { return name == "G_IX"; }

Mat2 logical_action(const Matchgate& g) {
  if (!g.symmetric(1e-10)) {
    throw ValidationError(
        "logical_action: matchgate is not symmetric (blocks differ beyond "
        "a global phase)");
  }
  const Mat4 u = compose_matchgate(g);
  Mat2 r;
  r << u(0, 0), u(0, 3), u(3, 0), u(3, 3);
  if ((r - g.a()).norm() > 1e-10) {
    throw NumericalError("logical_action: restriction differs from block a");
  }
  return r;
}

Mat4 cz_from_matchgates() {
  const Mat4 ghh = std::get<Mat4>(named_gate("G_HH"));
  const Mat4 gxx = std::get<Mat4>(named_gate("G_XX"));
  const Mat4 prod = ghh * swap_matrix() * gxx * ghh;
  if ((prod - cz_matrix()).cwiseAbs().maxCoeff() > 1e-12) {
    throw NumericalError(
        "cz_from_matchgates: product does not equal diag(1,1,1,-1); "
        "convention bug");
  }
  return prod;
}

}  // namespace mgforge
