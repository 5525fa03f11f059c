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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mgforge/algebra.hpp"

namespace mgforge {

/// A matchgate: block `a` acts on the even-parity subspace {|00>,|11>},
/// block `b` on the odd-parity subspace {|01>,|10>}. Both blocks must be
/// unitary and, unless `relaxed`, det(a) = det(b).
class Matchgate {
 public:
  /// Throws ValidationError for non-unitary blocks, ConstraintError for a
  /// determinant mismatch when relaxed == false.
  Matchgate(const Mat2& a, const Mat2& b, bool relaxed = false);

  const Mat2& a() const { return a_; }
  const Mat2& b() const { return b_; }
  bool relaxed() const { return relaxed_; }

  /// True when the two blocks are equal up to a global phase.
  bool symmetric(double tol = kEqTol) const;

 private:
  Mat2 a_;
  Mat2 b_;
  bool relaxed_;
};

/// The 4x4 unitary with `a` on the corners and `b` in the centre block.
Mat4 compose_matchgate(const Matchgate& m);

/// Dual-rail logical qubit |0>_L = |00>, |1>_L = |11>; symmetric
/// matchgates act on it as their block `a`.
class LogicalQubit {
 public:
  explicit LogicalQubit(const Eigen::Vector2cd& amplitudes);

  const Eigen::Vector2cd& amplitudes() const { return amplitudes_; }
  /// Embedding into the two-qubit space (even-parity support only).
  Eigen::Vector4cd physical() const;
  /// Inverse embedding; rejects states with odd-parity support.
  static LogicalQubit from_physical(const Eigen::Vector4cd& psi,
                                    double tol = 1e-10);

 private:
  Eigen::Vector2cd amplitudes_;
};

struct MatchgateRejection {
  enum class Reason { PatternViolation, DetMismatch };
  Reason reason;
  std::string detail;
  /// Populated for DetMismatch: the blocks extracted from the pattern
  /// (e.g. SWAP yields a = I, b = X).
  std::optional<Mat2> extracted_a;
  std::optional<Mat2> extracted_b;
};

/// Inverse of compose_matchgate. Blocks are returned with a joint phase
/// chosen so that a_11 is real non-negative (a_21 when a_11 = 0).
std::variant<Matchgate, MatchgateRejection> recognize_matchgate(
    const Mat4& u, double pattern_tol = 1e-8);

/// One- or two-qubit named gate. Known names:
/// I, X, Y, Z, H, T (2x2) and CNOT, CZ, SWAP, G_HH, G_XX, G_TT, G_ZX,
/// G_IX (4x4). Throws UnknownNameError otherwise.
std::variant<Mat2, Mat4> named_gate(std::string_view name);
std::vector<std::string> named_gate_names();
/// True for gates that are matchgates only under the relaxed determinant
/// rule (currently G_IX = SWAP).
bool named_gate_is_relaxed(std::string_view name);

/// Action of a symmetric matchgate on the logical qubit
/// |0>_L = |00>, |1>_L = |11>; equals block `a`.
Mat2 logical_action(const Matchgate& g);

/// G_HH * SWAP * G_XX * G_HH, asserted equal to CZ = diag(1,1,1,-1)
/// within 1e-12.
Mat4 cz_from_matchgates();

}  // namespace mgforge
