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

#include <utility>
#include <vector>

#include "mgforge/algebra.hpp"

namespace mgforge {

using Mat16 = Eigen::Matrix<cdouble, 16, 16>;
using Vec16 = Eigen::Matrix<cdouble, 16, 1>;

/// Two-qubit Pauli basis, ordering II, IX, IY, IZ, XI, ..., ZZ
/// (index 4a + b for sigma_a (x) sigma_b).
const std::array<Mat4, 16>& pauli16();

/// t_m = Tr(P_m^dag u); the chi matrix of a unitary is t t^dag / 16.
Vec16 pauli_overlap_vector(const Mat4& u);

/// Chi-matrix representation of a two-qubit process in the Pauli basis.
///
/// chi() is always trace-normalised; trace_norm() records the
/// pre-normalisation trace, i.e. the mean success probability of a
/// post-selected (trace-decreasing) map.
class ProcessMatrix {
 public:
  static ProcessMatrix from_unitary(const Mat4& u);
  /// Single- or multi-Kraus map; operators need not be unitary
  /// (post-selected maps). trace_norm records the mean success.
  static ProcessMatrix from_kraus(const std::vector<Mat4>& kraus);
  static ProcessMatrix from_kraus_weighted(
      const std::vector<std::pair<double, Mat4>>& weighted_kraus);
  /// Ingest an externally produced chi. With repair, eigenvalues in
  /// [-1e-8, 0) are clipped and the matrix renormalised; anything more
  /// negative is rejected. Internal constructions never use repair.
  static ProcessMatrix from_raw(const Mat16& chi, double trace_norm,
                                bool repair = false);

  static ProcessMatrix depolarizing(double p);
  /// Independent per-qubit dephasing; each qubit suffers a phase flip
  /// with probability p/2, so p = 1 destroys all single-qubit coherence.
  static ProcessMatrix dephasing(double p);
  static ProcessMatrix unitary_mixture(
      const std::vector<std::pair<double, Mat4>>& terms);

  const Mat16& chi() const { return chi_; }
  double trace_norm() const { return trace_norm_; }
  double purity() const;

  /// Superoperator on column-stacked density matrices, including the
  /// trace_norm scale.
  Mat16 superoperator() const;
  static ProcessMatrix from_superoperator(const Mat16& s);
  /// Composition: (after . before)(rho) = after(before(rho)).
  static ProcessMatrix compose(const ProcessMatrix& after,
                               const ProcessMatrix& before);

 private:
  ProcessMatrix(const Mat16& chi, double trace_norm);
  void validate() const;

  Mat16 chi_;
  double trace_norm_;
};

struct ApplyResult {
  Mat4 rho;        // normalised output state
  double success;  // absolute success probability (uses trace_norm)
};

void require_density(const Mat4& rho);

/// rho -> sum_mn chi_mn P_m rho P_n^dag, renormalised; throws on a
/// completely filtered input.
ApplyResult apply_process(const ProcessMatrix& chi, const Mat4& rho);

struct FidelityResult {
  double value;
  bool general_form;  // true when neither argument was pure
};

/// F = Tr(chi1 chi2) when either argument is pure (the paper's process
/// fidelity); otherwise the squared-root state fidelity applied to chi,
/// flagged via general_form.
FidelityResult process_fidelity_detail(const ProcessMatrix& x,
                                       const ProcessMatrix& y);
double process_fidelity(const ProcessMatrix& x, const ProcessMatrix& y);

double process_purity(const ProcessMatrix& x);

/// || sum_mn chi_mn P_n^dag P_m - I ||_F on the normalised chi; small for
/// trace-preserving (or uniformly post-selected) maps.
double trace_preservation_defect(const ProcessMatrix& x);

/// Fast fidelity of a chi against a unitary given its Pauli overlap
/// vector: Re(t^dag chi t) / 16. Used in optimisation inner loops.
double fidelity_with_unitary(const Mat16& chi, const Vec16& t);

}  // namespace mgforge
