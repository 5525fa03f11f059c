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

#include "mgforge/circuit.hpp"

#include <cmath>
#include <numbers>

namespace mgforge {

namespace {
constexpr double kPi = std::numbers::pi;

void require_qubits(int q0, int q1, bool two_qubit, const char* what) {
  if (q0 < 0 || q0 > 1 || q1 < 0 || q1 > 1) {
    throw ValidationError(std::string(what) + ": qubit index out of range");
  }
  if (two_qubit && q0 == q1) {
    throw ValidationError(std::string(what) +
                          ": control and target must differ");
  }
}
}  // namespace

GateOp GateOp::local1(int qubit, const Mat2& u) {
  require_qubits(qubit, 1 - qubit, false, "local1");
  require_unitary(u, "local1");
  return GateOp{Kind::Local1, qubit, 1 - qubit, u, 0.0};
}

GateOp GateOp::cnot(int control, int target) {
  require_qubits(control, target, true, "cnot");
  return GateOp{Kind::Cnot, control, target, Mat2::Identity(), 0.0};
}

GateOp GateOp::controlled_u(int control, int target, const Mat2& u) {
  require_qubits(control, target, true, "controlled_u");
  require_unitary(u, "controlled_u");
  return GateOp{Kind::ControlledU, control, target, u, 0.0};
}

GateOp GateOp::cz_theta(double theta) {
  if (!std::isfinite(theta)) throw ValidationError("cz_theta: non-finite");
  return GateOp{Kind::CzTheta, 0, 1, Mat2::Identity(), theta};
}

Mat4 GateOp::matrix() const {
  switch (kind) {
    case Kind::Local1:
      return q0 == 0 ? tensor(u, Mat2::Identity())
                     : tensor(Mat2::Identity(), u);
    case Kind::Cnot:
    case Kind::ControlledU: {
      const Mat2 payload = kind == Kind::Cnot ? Mat2(pauli_x()) : u;
      // P0 (x) I + P1 (x) payload, arranged for the control qubit.
      Mat4 m = Mat4::Zero();
      for (int c = 0; c < 2; ++c) {
        const Mat2 blk = c == 0 ? Mat2(Mat2::Identity()) : payload;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            int row = q0 == 0 ? 2 * c + i : 2 * i + c;
            int col = q0 == 0 ? 2 * c + j : 2 * j + c;
            m(row, col) = blk(i, j);
          }
      }
      return m;
    }
    case Kind::CzTheta: {
      Mat4 m = Mat4::Identity();
      m(3, 3) = std::polar(1.0, theta);
      return m;
    }
  }
  throw ValidationError("GateOp: malformed kind");
}

Mat4 simulate_circuit(const Circuit& c) {
  Mat4 u = Mat4::Identity();
  for (const GateOp& op : c.ops) u = op.matrix() * u;
  return std::polar(1.0, c.global_phase) * u;
}

GeneralDecomposition decompose_general(const Matchgate& m) {
  if (m.relaxed()) {
    throw ValidationError(
        "decompose_general: relaxed matchgates are not decomposable (the "
        "construction assumes det(a) = det(b))");
  }
  const Mat2 a = m.a();
  const Mat2 cu = m.b() * m.a().adjoint();  // U = B A^{-1}

  GeneralDecomposition d;
  d.u = cu;
  d.circuit.ops = {GateOp::cnot(0, 1), GateOp::local1(0, a),
                   GateOp::controlled_u(1, 0, cu), GateOp::cnot(0, 1)};
  d.circuit.global_phase = 0.0;

  if (phase_distance(simulate_circuit(d.circuit), compose_matchgate(m)) >
      1e-9) {
    throw NumericalError("decompose_general: resimulation residual > 1e-9");
  }
  return d;
}

Circuit SymmetricDecomposition::to_circuit() const {
  Circuit c;
  c.ops = {GateOp::local1(0, pre_top), GateOp::local1(1, pre_bottom),
           GateOp::cz_theta(theta), GateOp::local1(0, post_top),
           GateOp::local1(1, post_bottom)};
  c.global_phase = phase;
  return c;
}

SymmetricDecomposition decompose_symmetric(const Matchgate& m) {
  if ((m.a() - m.b()).norm() > 1e-10) {
    throw ValidationError("decompose_symmetric: matchgate is not symmetric");
  }
  const Mat2 a = m.a();
  const EulerXZX e = euler_xzx(gate_h() * a * gate_h());

  // G_AA = CNOT (A (x) I) CNOT. Flipping the CNOTs with Hadamards and
  // commuting the X rotations through leaves a single diagonal
  // entangler, which commutes into CZ_theta plus Z_{-theta/2} on both
  // wires and a global phase of -theta/4.
  const Mat2 zc = rot_z(-e.theta / 2.0);

  SymmetricDecomposition d;
  const bool trivial_entangler =
      std::abs(e.theta) < 1e-11 || std::abs(e.theta - 2.0 * kPi) < 1e-11;
  if (trivial_entangler) {
    // CZ_theta = I exactly; merge the pre/post pairs so a = I yields four
    // identity slots.
    d.theta = 0.0;
    d.pre_top = gate_h() * rot_x(e.alpha) * zc * rot_x(e.beta) * gate_h();
    d.pre_bottom = Mat2::Identity();
    d.post_top = Mat2::Identity();
    d.post_bottom = gate_h() * zc * gate_h();
    d.phase = wrap_angle(e.phase - e.theta / 4.0);
  } else {
    // Report theta in (-pi, pi]; CZ_theta has period 2 pi so the circuit
    // matrix is unchanged while kak(G_AA) = [|theta|/2, 0, 0] stays inside
    // the folded chamber.
    d.theta = e.theta > kPi ? e.theta - 2.0 * kPi : e.theta;
    d.pre_top = rot_x(e.beta) * gate_h();
    d.pre_bottom = gate_h();
    d.post_top = gate_h() * rot_x(e.alpha) * zc;
    d.post_bottom = gate_h() * zc;
    d.phase = wrap_angle(e.phase - e.theta / 4.0);
  }

  if (phase_distance(simulate_circuit(d.to_circuit()), compose_matchgate(m)) >
      1e-9) {
    throw NumericalError("decompose_symmetric: resimulation residual > 1e-9");
  }
  return d;
}

}  // namespace mgforge
