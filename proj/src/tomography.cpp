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

#include "mgforge/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mgforge/parallel.hpp"

namespace mgforge {

const char* to_string(PrepLabel l) {
  switch (l) {
    case PrepLabel::H: return "H";
    case PrepLabel::V: return "V";
    case PrepLabel::D: return "D";
    case PrepLabel::R: return "R";
  }
  throw ValidationError("bad PrepLabel");
}

const char* to_string(MeasLabel l) {
  switch (l) {
    case MeasLabel::H: return "H";
    case MeasLabel::V: return "V";
    case MeasLabel::D: return "D";
    case MeasLabel::A: return "A";
    case MeasLabel::R: return "R";
    case MeasLabel::L: return "L";
  }
  throw ValidationError("bad MeasLabel");
}

PrepLabel prep_label_from_string(const std::string& s) {
  if (s == "H") return PrepLabel::H;
  if (s == "V") return PrepLabel::V;
  if (s == "D") return PrepLabel::D;
  if (s == "R") return PrepLabel::R;
  throw ParseError("unknown preparation label '" + s + "'");
}

MeasLabel meas_label_from_string(const std::string& s) {
  if (s == "H") return MeasLabel::H;
  if (s == "V") return MeasLabel::V;
  if (s == "D") return MeasLabel::D;
  if (s == "A") return MeasLabel::A;
  if (s == "R") return MeasLabel::R;
  if (s == "L") return MeasLabel::L;
  throw ParseError("unknown measurement label '" + s + "'");
}

Eigen::Vector2cd prep_ket(PrepLabel l) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd v;
  switch (l) {
    case PrepLabel::H: v << 1, 0; break;
    case PrepLabel::V: v << 0, 1; break;
    case PrepLabel::D: v << s, s; break;
    case PrepLabel::R: v << s, cdouble(0, s); break;
  }
  return v;
}

Eigen::Vector2cd meas_ket(MeasLabel l) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd v;
  switch (l) {
    case MeasLabel::H: v << 1, 0; break;
    case MeasLabel::V: v << 0, 1; break;
    case MeasLabel::D: v << s, s; break;
    case MeasLabel::A: v << s, -s; break;
    case MeasLabel::R: v << s, cdouble(0, s); break;
    case MeasLabel::L: v << s, cdouble(0, -s); break;
  }
  return v;
}

const std::vector<PrepSetting>& all_preps() {
  static const std::vector<PrepSetting> v = [] {
    std::vector<PrepSetting> out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        out.push_back({static_cast<PrepLabel>(a), static_cast<PrepLabel>(b)});
    return out;
  }();
  return v;
}

const std::vector<MeasSetting>& all_meas() {
  static const std::vector<MeasSetting> v = [] {
    std::vector<MeasSetting> out;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        out.push_back({static_cast<MeasLabel>(a), static_cast<MeasLabel>(b)});
    return out;
  }();
  return v;
}

void TomographyDataset::validate() const {
  if (n_nominal < 1.0) {
    throw ValidationError("TomographyDataset: n_nominal must be >= 1");
  }
  if (records.size() != 576) {
    throw ValidationError("TomographyDataset: expected 576 records");
  }
  std::array<int, 576> seen{};
  for (const auto& r : records) {
    if (r.counts < 0) throw ValidationError("TomographyDataset: negative counts");
    const int idx = (static_cast<int>(r.prep.q0) * 4 +
                     static_cast<int>(r.prep.q1)) *
                        36 +
                    static_cast<int>(r.meas.q0) * 6 +
                    static_cast<int>(r.meas.q1);
    ++seen[idx];
  }
  for (int c : seen) {
    if (c != 1) {
      throw ValidationError(
          "TomographyDataset: design grid is incomplete or duplicated");
    }
  }
}

namespace {

Vec16 design_vector(const PrepSetting& prep, const MeasSetting& meas) {
  const auto& paulis = pauli16();
  Eigen::Vector4cd psi;
  {
    const Eigen::Vector2cd p0 = prep_ket(prep.q0), p1 = prep_ket(prep.q1);
    psi << p0(0) * p1(0), p0(0) * p1(1), p0(1) * p1(0), p0(1) * p1(1);
  }
  Eigen::Vector4cd m;
  {
    const Eigen::Vector2cd m0 = meas_ket(meas.q0), m1 = meas_ket(meas.q1);
    m << m0(0) * m1(0), m0(0) * m1(1), m0(1) * m1(0), m0(1) * m1(1);
  }
  Vec16 a;
  for (int k = 0; k < 16; ++k) a(k) = m.dot(paulis[k] * psi);  // <M|P_k|psi>
  return a;
}

double probability_from_vector(const Mat16& chi, const Vec16& a) {
  const Vec16 b = chi * a.conjugate();
  return a.cwiseProduct(b).sum().real();
}

// P_n * P_m lookup.
const std::array<std::array<Mat4, 16>, 16>& pauli_products() {
  static const auto table = [] {
    const auto& p = pauli16();
    auto t = std::make_unique<std::array<std::array<Mat4, 16>, 16>>();
    for (int n = 0; n < 16; ++n)
      for (int m = 0; m < 16; ++m) (*t)[n][m] = p[n] * p[m];
    return t;
  }();
  return *table;
}

}  // namespace

double predicted_probability(const ProcessMatrix& chi, const PrepSetting& prep,
                             const MeasSetting& meas) {
  const Vec16 a = design_vector(prep, meas);
  const double p = chi.trace_norm() * probability_from_vector(chi.chi(), a);
  if (p < -1e-9 || p > 1.0 + 1e-9) {
    throw NumericalError("predicted_probability: out of [0,1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

TomographyDataset simulate_counts(const ProcessMatrix& chi, double n_nominal,
                                  std::uint64_t seed) {
  if (n_nominal < 1.0) {
    throw ValidationError("simulate_counts: n_nominal must be >= 1");
  }
  TomographyDataset ds;
  ds.n_nominal = n_nominal;
  ds.seed = seed;
  ds.records.reserve(576);
  std::size_t idx = 0;
  for (const auto& prep : all_preps()) {
    for (const auto& meas : all_meas()) {
      const double lambda = n_nominal * predicted_probability(chi, prep, meas);
      long long counts = 0;
      if (lambda > 0.0) {
        std::mt19937_64 rng(derive_seed(seed, 0x70C0, idx));
        std::poisson_distribution<long long> poisson(lambda);
        counts = poisson(rng);
      }
      ds.records.push_back({prep, meas, counts});
      ++idx;
    }
  }
  return ds;
}

namespace {

// 256 real parameters <-> lower-triangular complex T with real diagonal.
struct TriangularParam {
  static constexpr int dim = 256;

  static Mat16 to_matrix(const Eigen::VectorXd& x) {
    Mat16 t = Mat16::Zero();
    int k = 0;
    for (int i = 0; i < 16; ++i) t(i, i) = x(k++);
    for (int r = 1; r < 16; ++r)
      for (int c = 0; c < r; ++c) {
        t(r, c) = cdouble(x(k), x(k + 1));
        k += 2;
      }
    return t;
  }

  static Eigen::VectorXd from_matrix(const Mat16& t) {
    Eigen::VectorXd x(dim);
    int k = 0;
    for (int i = 0; i < 16; ++i) x(k++) = t(i, i).real();
    for (int r = 1; r < 16; ++r)
      for (int c = 0; c < r; ++c) {
        x(k) = t(r, c).real();
        x(k + 1) = t(r, c).imag();
        k += 2;
      }
    return x;
  }

  // Map d f / d T* (matrix G) to the real-parameter gradient.
  static Eigen::VectorXd gradient(const Mat16& g) {
    Eigen::VectorXd out(dim);
    int k = 0;
    for (int i = 0; i < 16; ++i) out(k++) = 2.0 * g(i, i).real();
    for (int r = 1; r < 16; ++r)
      for (int c = 0; c < r; ++c) {
        out(k) = 2.0 * g(r, c).real();
        out(k + 1) = 2.0 * g(r, c).imag();
        k += 2;
      }
    return out;
  }
};

struct MleProblem {
  std::vector<Vec16> design;       // 576 design vectors
  std::vector<double> counts;      // observed counts
  double n_nominal = 0.0;
  double lambda_floor = 0.0;
  double penalty = 0.0;

  double objective(const Mat16& t, Mat16* grad) const {
    const Mat16 chi = t.adjoint() * t;
    double f = 0.0;
    Mat16 a_total = Mat16::Zero();
    for (std::size_t k = 0; k < design.size(); ++k) {
      const Vec16& a = design[k];
      const double lambda =
          n_nominal * probability_from_vector(chi, a) + lambda_floor;
      f += counts[k] * std::log(lambda) - lambda;
      if (grad) {
        const double w = (counts[k] / lambda - 1.0) * n_nominal;
        a_total.noalias() += w * (a * a.adjoint());
      }
    }

    // Trace-preservation penalty on the traceless part of
    // Phi = sum chi_mn P_n P_m (scale-invariant for uniformly
    // post-selected maps).
    const auto& pp = pauli_products();
    Mat4 phi = Mat4::Zero();
    for (int m = 0; m < 16; ++m)
      for (int n = 0; n < 16; ++n) phi += chi(m, n) * pp[n][m];
    const Mat4 e = phi - (phi.trace() / 4.0) * Mat4::Identity();
    f -= penalty * e.squaredNorm();
    if (grad) {
      for (int m = 0; m < 16; ++m)
        for (int n = 0; n < 16; ++n)
          a_total(m, n) -= 2.0 * penalty * (e * pp[n][m]).trace();
      grad->noalias() = t * a_total.transpose();
    }
    return f;
  }
};

struct LbfgsOutcome {
  Mat16 t;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimise -objective with L-BFGS (memory 8) and Armijo backtracking;
// every accepted step is appended to trace (non-decreasing objective).
LbfgsOutcome lbfgs_maximize(const MleProblem& prob, Mat16 t0, int max_iters,
                            double rel_tol, std::vector<double>& trace) {
  constexpr int mem = 8;
  const int n = TriangularParam::dim;

  Eigen::VectorXd x = TriangularParam::from_matrix(t0);
  Mat16 gmat;
  double f = prob.objective(TriangularParam::to_matrix(x), &gmat);
  Eigen::VectorXd grad = -TriangularParam::gradient(gmat);  // of -f
  trace.push_back(f);

  std::vector<Eigen::VectorXd> s_hist, y_hist;
  std::vector<double> rho_hist;
  Eigen::VectorXd q(n), d(n);

  LbfgsOutcome out;
  int stall = 0;
  int it = 0;
  for (; it < max_iters; ++it) {
    // Two-loop recursion for d = -H grad.
    q = grad;
    const int h = static_cast<int>(s_hist.size());
    std::vector<double> alpha(h);
    for (int i = h - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    double gamma = 1.0;
    if (h > 0) {
      const double yy = y_hist[h - 1].squaredNorm();
      if (yy > 0) gamma = s_hist[h - 1].dot(y_hist[h - 1]) / yy;
    }
    q *= gamma;
    for (int i = 0; i < h; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    d = -q;

    double slope = grad.dot(d);
    if (slope >= 0.0) {  // not a descent direction; restart
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -grad;
      slope = grad.dot(d);
      if (slope >= 0.0) break;  // gradient vanished
    }

    // Backtracking Armijo on g = -f.
    double step = 1.0;
    double f_new = f;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * d;
      f_new = prob.objective(TriangularParam::to_matrix(x_new), nullptr);
      if (-f_new <= -f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Mat16 gmat_new;
    prob.objective(TriangularParam::to_matrix(x_new), &gmat_new);
    Eigen::VectorXd grad_new = -TriangularParam::gradient(gmat_new);

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > mem) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }

    const double df = f_new - f;
    x = std::move(x_new);
    f = f_new;
    grad = std::move(grad_new);
    trace.push_back(f);

    if (std::abs(df) <= rel_tol * (std::abs(f) + 1.0)) {
      if (++stall >= 2) {
        out.converged = true;
        ++it;
        break;
      }
    } else {
      stall = 0;
    }
  }

  out.t = TriangularParam::to_matrix(x);
  out.f = f;
  out.iterations = it;
  return out;
}

Mat16 linear_inversion_start(const std::vector<Vec16>& design,
                             const std::vector<double>& counts,
                             double n_nominal) {
  const int n = TriangularParam::dim;
  Eigen::MatrixXd dtd = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd row(n);
  for (std::size_t k = 0; k < design.size(); ++k) {
    const Vec16& a = design[k];
    int j = 0;
    for (int i = 0; i < 16; ++i) row(j++) = std::norm(a(i));
    for (int r = 1; r < 16; ++r)
      for (int c = 0; c < r; ++c) {
        // chi basis elements E_rc + E_cr and i(E_rc - E_cr); the
        // probability is sum chi_mn a_m conj(a_n).
        const cdouble o = a(r) * std::conj(a(c));
        row(j++) = 2.0 * o.real();
        row(j++) = -2.0 * o.imag();
      }
    dtd.selfadjointView<Eigen::Lower>().rankUpdate(row);
    rhs += (counts[k] / n_nominal) * row;
  }
  dtd = dtd.selfadjointView<Eigen::Lower>();
  dtd.diagonal().array() += 1e-9;
  const Eigen::VectorXd h = dtd.ldlt().solve(rhs);

  Mat16 chi = Mat16::Zero();
  int j = 0;
  for (int i = 0; i < 16; ++i) chi(i, i) = h(j++);
  for (int r = 1; r < 16; ++r)
    for (int c = 0; c < r; ++c) {
      chi(r, c) = cdouble(h(j), h(j + 1));
      chi(c, r) = std::conj(chi(r, c));
      j += 2;
    }

  // Project to strictly positive definite and factor as chi = T^dag T
  // with lower-triangular T (Cholesky of the index-reversed matrix).
  Eigen::SelfAdjointEigenSolver<Mat16> es(chi);
  Eigen::Matrix<double, 16, 1> ev = es.eigenvalues();
  const double floor_ev = std::max(1e-8 * std::abs(ev.maxCoeff()), 1e-12);
  for (int i = 0; i < 16; ++i) ev(i) = std::max(ev(i), floor_ev);
  chi = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

  Mat16 rev;
  for (int i = 0; i < 16; ++i)
    for (int j2 = 0; j2 < 16; ++j2) rev(i, j2) = chi(15 - i, 15 - j2);
  const Eigen::LLT<Mat16> llt(rev);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("mle_reconstruct: start factorisation failed");
  }
  const Mat16 l = llt.matrixL();
  Mat16 t;
  for (int i = 0; i < 16; ++i)
    for (int j2 = 0; j2 < 16; ++j2)
      t(i, j2) = std::conj(l(15 - j2, 15 - i));
  return t;
}

}  // namespace

MleResult mle_reconstruct(const TomographyDataset& data,
                          const MleOptions& opts) {
  data.validate();

  double total = 0.0;
  for (const auto& r : data.records) total += static_cast<double>(r.counts);
  if (total <= 0.0) {
    throw ValidationError("mle_reconstruct: dataset has no counts");
  }

  // Canonical design order makes the estimate independent of the record
  // ordering down to the last bit.
  std::vector<const CountRecord*> ordered(576, nullptr);
  for (const auto& r : data.records) {
    const int idx =
        (static_cast<int>(r.prep.q0) * 4 + static_cast<int>(r.prep.q1)) * 36 +
        static_cast<int>(r.meas.q0) * 6 + static_cast<int>(r.meas.q1);
    ordered[idx] = &r;
  }

  MleProblem prob;
  prob.n_nominal = data.n_nominal;
  prob.lambda_floor = 1e-9 * std::max(1.0, data.n_nominal);
  prob.design.reserve(576);
  prob.counts.reserve(576);
  for (const CountRecord* r : ordered) {
    prob.design.push_back(design_vector(r->prep, r->meas));
    prob.counts.push_back(static_cast<double>(r->counts));
  }

  Mat16 t = linear_inversion_start(prob.design, prob.counts, prob.n_nominal);

  MleResult res;
  prob.penalty = total;
  for (int round = 0; round < opts.penalty_rounds; ++round) {
    const LbfgsOutcome out = lbfgs_maximize(
        prob, t, opts.max_iters, opts.rel_tol, res.likelihood_trace);
    t = out.t;
    res.converged = out.converged;
    res.iterations += out.iterations;
    res.log_likelihood = out.f;

    const Mat16 chi_raw = t.adjoint() * t;
    const double tn = chi_raw.trace().real();
    res.chi = ProcessMatrix::from_raw(chi_raw / tn, tn);
    res.tp_defect = trace_preservation_defect(res.chi);
    if (res.tp_defect < opts.tp_tol) {
      res.tp_converged = true;
      break;
    }
    prob.penalty *= 10.0;
  }
  return res;
}

BootstrapResult bootstrap_errors(
    const TomographyDataset& data, int resamples,
    const std::function<double(const MleResult&)>& statistic,
    std::uint64_t seed, int jobs, const MleOptions& opts) {
  if (resamples < 50) {
    throw ValidationError("bootstrap_errors: need at least 50 resamples");
  }
  data.validate();

  std::vector<double> values(resamples);
  std::vector<char> ok(resamples, 0);
  parallel_for(resamples, jobs, [&](std::size_t i) {
    TomographyDataset resampled = data;
    std::mt19937_64 rng(derive_seed(seed, 0xB007, i));
    for (auto& r : resampled.records) {
      if (r.counts > 0) {
        std::poisson_distribution<long long> poisson(
            static_cast<double>(r.counts));
        r.counts = poisson(rng);
      }
    }
    try {
      const MleResult m = mle_reconstruct(resampled, opts);
      values[i] = statistic(m);
      ok[i] = 1;
    } catch (const Error&) {
      ok[i] = 0;
    }
  });

  BootstrapResult out;
  out.resamples = resamples;
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < resamples; ++i) {
    if (ok[i]) {
      sum += values[i];
      ++n;
    } else {
      ++out.failures;
    }
  }
  if (n < 2) {
    throw NumericalError("bootstrap_errors: too many reconstruction failures");
  }
  out.mean = sum / n;
  double ss = 0.0;
  for (int i = 0; i < resamples; ++i) {
    if (ok[i]) ss += (values[i] - out.mean) * (values[i] - out.mean);
  }
  out.stddev = std::sqrt(ss / (n - 1));
  return out;
}

double design_condition_number() {
  Eigen::MatrixXd d(576, TriangularParam::dim);
  int k = 0;
  for (const auto& prep : all_preps()) {
    for (const auto& meas : all_meas()) {
      const Vec16 a = design_vector(prep, meas);
      int j = 0;
      for (int i = 0; i < 16; ++i) d(k, j++) = std::norm(a(i));
      for (int r = 1; r < 16; ++r)
        for (int c = 0; c < r; ++c) {
          const cdouble o = a(r) * std::conj(a(c));
          d(k, j++) = 2.0 * o.real();
          d(k, j++) = -2.0 * o.imag();
        }
      ++k;
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(d);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace mgforge
