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

#include <vector>

#include "mgforge/matchgate.hpp"

namespace mgforge {

/// Elementary circuit operation on two qubits (0 = top, 1 = bottom).
struct GateOp {
  enum class Kind { Local1, Cnot, ControlledU, CzTheta };

  Kind kind;
  int q0 = 0;     // Local1: target. Cnot/ControlledU: control.
  int q1 = 1;     // Cnot/ControlledU: target.
  Mat2 u;         // Local1 / ControlledU payload.
  double theta = 0.0;  // CzTheta angle; CZ_theta = diag(1,1,1,e^{i theta}).

  static GateOp local1(int qubit, const Mat2& u);
  static GateOp cnot(int control, int target);
  static GateOp controlled_u(int control, int target, const Mat2& u);
  static GateOp cz_theta(double theta);

  Mat4 matrix() const;
};

/// Ordered list of operations; the first element acts first.
struct Circuit {
  std::vector<GateOp> ops;
  double global_phase = 0.0;
};

Mat4 simulate_circuit(const Circuit& c);

/// Fig-style general decomposition:
/// [CNOT(0->1); LOCAL1(0, A); CU(1->0, U); CNOT(0->1)] with U = B A^{-1}.
struct GeneralDecomposition {
  Circuit circuit;
  Mat2 u;  // the controlled unitary payload, B A^{-1}
};

GeneralDecomposition decompose_general(const Matchgate& m);

/// Symmetric decomposition: e^{i phase} (post_top (x) post_bottom)
/// CZ_theta (pre_top (x) pre_bottom) with theta from euler_xzx(H A H),
/// reduced into (-pi, pi].
struct SymmetricDecomposition {
  double theta = 0.0;
  Mat2 pre_top;
  Mat2 pre_bottom;
  Mat2 post_top;
  Mat2 post_bottom;
  double phase = 0.0;

  Circuit to_circuit() const;
};

SymmetricDecomposition decompose_symmetric(const Matchgate& m);

}  // namespace mgforge
