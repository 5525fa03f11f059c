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

#include "mgforge/process.hpp"

#include <cmath>
#include <sstream>

namespace mgforge {

const std::array<Mat4, 16>& pauli16() {
  static const std::array<Mat4, 16> table = [] {
    const std::array<Mat2, 4> sigma = {pauli_i(), pauli_x(), pauli_y(),
                                       pauli_z()};
    std::array<Mat4, 16> t;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Mat4 m;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            m.block<2, 2>(2 * i, 2 * j) = sigma[a](i, j) * sigma[b];
        t[4 * a + b] = m;
      }
    return t;
  }();
  return table;
}

Vec16 pauli_overlap_vector(const Mat4& u) {
  const auto& paulis = pauli16();
  Vec16 t;
  for (int m = 0; m < 16; ++m) t(m) = (paulis[m] * u).trace();
  return t;
}

ProcessMatrix::ProcessMatrix(const Mat16& chi, double trace_norm)
    : chi_(chi), trace_norm_(trace_norm) {
  validate();
}

void ProcessMatrix::validate() const {
  if (!all_finite(chi_) || !std::isfinite(trace_norm_)) {
    throw ValidationError("ProcessMatrix: non-finite entries");
  }
  if ((chi_ - chi_.adjoint()).norm() > 1e-10) {
    throw ValidationError("ProcessMatrix: chi is not Hermitian within 1e-10");
  }
  if (std::abs(chi_.trace().real() - 1.0) > 1e-10) {
    throw ValidationError("ProcessMatrix: chi trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Mat16> es(chi_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    std::ostringstream os;
    os << "ProcessMatrix: chi is not PSD (min eigenvalue "
       << es.eigenvalues().minCoeff() << ")";
    throw ValidationError(os.str());
  }
  if (trace_norm_ <= 0.0) {
    throw ValidationError("ProcessMatrix: trace_norm must be positive");
  }
}

ProcessMatrix ProcessMatrix::from_unitary(const Mat4& u) {
  require_unitary(u, "ProcessMatrix::from_unitary");
  const Vec16 t = pauli_overlap_vector(u);
  const Mat16 chi = (t * t.adjoint()) / 16.0;
  return ProcessMatrix(chi, 1.0);
}

ProcessMatrix ProcessMatrix::from_kraus(const std::vector<Mat4>& kraus) {
  std::vector<std::pair<double, Mat4>> w;
  w.reserve(kraus.size());
  for (const auto& k : kraus) w.emplace_back(1.0, k);
  return from_kraus_weighted(w);
}

ProcessMatrix ProcessMatrix::from_kraus_weighted(
    const std::vector<std::pair<double, Mat4>>& weighted_kraus) {
  if (weighted_kraus.empty()) {
    throw ValidationError("from_kraus: empty operator list");
  }
  Mat16 chi = Mat16::Zero();
  for (const auto& [w, k] : weighted_kraus) {
    if (w < 0.0 || !std::isfinite(w) || !all_finite(k)) {
      throw ValidationError("from_kraus: invalid weight or operator");
    }
    const Vec16 t = pauli_overlap_vector(k);
    chi += w * (t * t.adjoint()) / 16.0;
  }
  const double tn = chi.trace().real();
  if (tn <= 1e-300) {
    throw ValidationError("from_kraus: map has zero trace");
  }
  return ProcessMatrix(chi / tn, tn);
}

ProcessMatrix ProcessMatrix::from_raw(const Mat16& chi, double trace_norm,
                                      bool repair) {
  Mat16 c = 0.5 * (chi + chi.adjoint());
  if (!repair) return ProcessMatrix(c, trace_norm);

  Eigen::SelfAdjointEigenSolver<Mat16> es(c);
  Eigen::Matrix<double, 16, 1> ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-8) {
    std::ostringstream os;
    os << "from_raw: chi min eigenvalue " << ev.minCoeff()
       << " below the -1e-8 repair threshold";
    throw ValidationError(os.str());
  }
  for (int i = 0; i < 16; ++i) ev(i) = std::max(ev(i), 0.0);
  c = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const double tr = c.trace().real();
  if (tr <= 0.0) throw ValidationError("from_raw: chi trace vanished");
  return ProcessMatrix(c / tr, trace_norm);
}

ProcessMatrix ProcessMatrix::depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("depolarizing: p must lie in [0,1]");
  }
  Mat16 chi = (p / 16.0) * Mat16::Identity();
  chi(0, 0) += 1.0 - p;
  return ProcessMatrix(chi, 1.0);
}

ProcessMatrix ProcessMatrix::dephasing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("dephasing: p must lie in [0,1]");
  }
  const double q = p / 2.0;  // per-qubit phase-flip probability
  Mat16 chi = Mat16::Zero();
  const double wi = 1.0 - q;
  // Kraus sqrt(w_a w_b) sigma_a (x) sigma_b over {I, Z} x {I, Z}:
  // indices 0 (II), 3 (IZ), 12 (ZI), 15 (ZZ).
  chi(0, 0) = wi * wi;
  chi(3, 3) = wi * q;
  chi(12, 12) = q * wi;
  chi(15, 15) = q * q;
  return ProcessMatrix(chi, 1.0);
}

ProcessMatrix ProcessMatrix::unitary_mixture(
    const std::vector<std::pair<double, Mat4>>& terms) {
  if (terms.empty()) throw ValidationError("unitary_mixture: empty");
  double total = 0.0;
  for (const auto& [w, u] : terms) {
    if (w < 0.0) throw ValidationError("unitary_mixture: negative weight");
    require_unitary(u, "unitary_mixture");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("unitary_mixture: weights must sum to 1");
  }
  Mat16 chi = Mat16::Zero();
  for (const auto& [w, u] : terms) {
    const Vec16 t = pauli_overlap_vector(u);
    chi += w * (t * t.adjoint()) / 16.0;
  }
  return ProcessMatrix(chi, 1.0);
}

double ProcessMatrix::purity() const { return (chi_ * chi_).trace().real(); }

Mat16 ProcessMatrix::superoperator() const {
  const auto& paulis = pauli16();
  Mat16 s = Mat16::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) {
      const cdouble c = trace_norm_ * chi_(m, n);
      if (std::abs(c) < 1e-300) continue;
      // vec(P_m rho P_n^dag) = (conj(P_n) (x) P_m) vec(rho), column-major.
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const cdouble pn = std::conj(paulis[n](i, j));
          if (pn == cdouble(0.0, 0.0)) continue;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
              s(4 * i + k, 4 * j + l) += c * pn * paulis[m](k, l);
        }
    }
  return s;
}

ProcessMatrix ProcessMatrix::from_superoperator(const Mat16& s) {
  const auto& paulis = pauli16();
  Mat16 chi = Mat16::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) {
      cdouble acc = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const cdouble pn = paulis[n](i, j);  // conj(conj(P_n)) = P_n
          if (pn == cdouble(0.0, 0.0)) continue;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
              acc += pn * std::conj(paulis[m](k, l)) * s(4 * i + k, 4 * j + l);
        }
      chi(m, n) = acc / 16.0;
    }
  const double tn = chi.trace().real();
  if (tn <= 1e-300) {
    throw ValidationError("from_superoperator: zero-trace map");
  }
  // Symmetrise and clip the tiny negative eigenvalues produced by the
  // basis round-trips.
  return from_raw(chi / tn, tn, /*repair=*/true);
}

ProcessMatrix ProcessMatrix::compose(const ProcessMatrix& after,
                                     const ProcessMatrix& before) {
  return from_superoperator(after.superoperator() * before.superoperator());
}

void require_density(const Mat4& rho) {
  if (!all_finite(rho)) throw ValidationError("density: non-finite");
  if ((rho - rho.adjoint()).norm() > 1e-10) {
    throw ValidationError("density: not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) {
    throw ValidationError("density: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("density: not positive semidefinite");
  }
}

ApplyResult apply_process(const ProcessMatrix& chi, const Mat4& rho) {
  require_density(rho);
  const auto& paulis = pauli16();
  Mat4 out = Mat4::Zero();
  for (int m = 0; m < 16; ++m) {
    Mat4 prm = paulis[m] * rho;
    for (int n = 0; n < 16; ++n) {
      const cdouble c = chi.chi()(m, n);
      if (std::abs(c) < 1e-300) continue;
      out += c * (prm * paulis[n]);  // P_n^dag = P_n
    }
  }
  const double tr = out.trace().real();
  if (tr <= 1e-14) {
    throw ValidationError("apply_process: input is completely filtered");
  }
  return ApplyResult{out / tr, chi.trace_norm() * tr};
}

FidelityResult process_fidelity_detail(const ProcessMatrix& x,
                                       const ProcessMatrix& y) {
  const bool x_pure = x.purity() >= 1.0 - 1e-8;
  const bool y_pure = y.purity() >= 1.0 - 1e-8;
  if (x_pure || y_pure) {
    return FidelityResult{(x.chi() * y.chi()).trace().real(), false};
  }
  // General mixed-mixed comparison: squared-root fidelity of the chi
  // matrices treated as states.
  Eigen::SelfAdjointEigenSolver<Mat16> es(x.chi());
  Eigen::Matrix<double, 16, 1> ev = es.eigenvalues().cwiseMax(0.0);
  const Mat16 sqrt_x = es.eigenvectors() *
                       ev.cwiseSqrt().asDiagonal() *
                       es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Mat16> es2(sqrt_x * y.chi() * sqrt_x);
  const double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return FidelityResult{root_sum * root_sum, true};
}

double process_fidelity(const ProcessMatrix& x, const ProcessMatrix& y) {
  return process_fidelity_detail(x, y).value;
}

double process_purity(const ProcessMatrix& x) { return x.purity(); }

double trace_preservation_defect(const ProcessMatrix& x) {
  const auto& paulis = pauli16();
  Mat4 phi = Mat4::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) {
      const cdouble c = x.chi()(m, n);
      if (std::abs(c) < 1e-300) continue;
      phi += c * (paulis[n] * paulis[m]);
    }
  return (phi - Mat4::Identity()).norm();
}

double fidelity_with_unitary(const Mat16& chi, const Vec16& t) {
  return (t.adjoint() * chi * t).real()(0) / 16.0;
}

}  // namespace mgforge
