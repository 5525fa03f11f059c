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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "mgforge/matchgate.hpp"
#include "mgforge/tomography.hpp"

using namespace mgforge;

namespace {
Mat4 gate(const char* name) { return std::get<Mat4>(named_gate(name)); }

TomographyDataset exact_dataset(const ProcessMatrix& chi, double n) {
  TomographyDataset ds;
  ds.n_nominal = n;
  ds.seed = 0;
  for (const auto& prep : all_preps())
    for (const auto& meas : all_meas()) {
      const double p = predicted_probability(chi, prep, meas);
      ds.records.push_back(
          {prep, meas, static_cast<long long>(std::llround(n * p))});
    }
  return ds;
}
}  // namespace

TEST_CASE("settings enumeration", "[tomo]") {
  CHECK(all_preps().size() == 16);
  CHECK(all_meas().size() == 36);
  CHECK(prep_label_from_string("D") == PrepLabel::D);
  CHECK(meas_label_from_string("L") == MeasLabel::L);
  CHECK_THROWS_AS(prep_label_from_string("A"), ParseError);  // A is meas-only
  CHECK(std::string(to_string(MeasLabel::A)) == "A");
}

TEST_CASE("predicted probabilities for known processes", "[tomo]") {
  const ProcessMatrix cz = ProcessMatrix::from_unitary(gate("CZ"));
  const PrepSetting hh{PrepLabel::H, PrepLabel::H};
  const MeasSetting mhh{MeasLabel::H, MeasLabel::H};
  CHECK(predicted_probability(cz, hh, mhh) == Catch::Approx(1.0).margin(1e-12));

  const PrepSetting dd{PrepLabel::D, PrepLabel::D};
  const MeasSetting mdd{MeasLabel::D, MeasLabel::D};
  CHECK(predicted_probability(cz, dd, mdd) ==
        Catch::Approx(0.25).margin(1e-12));

  const ProcessMatrix depol = ProcessMatrix::depolarizing(1.0);
  for (const auto& prep : all_preps())
    for (const auto& meas : all_meas()) {
      CHECK(predicted_probability(depol, prep, meas) ==
            Catch::Approx(0.25).margin(1e-12));
    }
}

TEST_CASE("simulated counts are seeded and Poisson-scaled", "[tomo]") {
  const ProcessMatrix cz = ProcessMatrix::from_unitary(gate("CZ"));
  const TomographyDataset a = simulate_counts(cz, 1e6, 7);
  const TomographyDataset b = simulate_counts(cz, 1e6, 7);
  REQUIRE(a.records.size() == 576);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].counts == b.records[i].counts);
  }
  a.validate();

  // (H,H)/(H,H) has probability 1: counts within 5 sigma of 1e6.
  const auto& r0 = a.records.front();
  CHECK(std::abs(static_cast<double>(r0.counts) - 1e6) < 5.0 * std::sqrt(1e6));

  const TomographyDataset c = simulate_counts(cz, 1e6, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    any_diff |= a.records[i].counts != c.records[i].counts;
  }
  CHECK(any_diff);
}

TEST_CASE("dataset validation", "[tomo]") {
  const ProcessMatrix cz = ProcessMatrix::from_unitary(gate("CZ"));
  TomographyDataset ds = simulate_counts(cz, 100, 1);
  ds.records.pop_back();
  CHECK_THROWS_AS(ds.validate(), ValidationError);
  ds = simulate_counts(cz, 100, 1);
  ds.records[0] = ds.records[1];
  CHECK_THROWS_AS(ds.validate(), ValidationError);
  ds = simulate_counts(cz, 100, 1);
  ds.records[0].counts = -1;
  CHECK_THROWS_AS(ds.validate(), ValidationError);
}

TEST_CASE("mle recovers CZ from exact probabilities", "[tomo]") {
  const ProcessMatrix cz = ProcessMatrix::from_unitary(gate("CZ"));
  const TomographyDataset ds = exact_dataset(cz, 1e8);
  const MleResult r = mle_reconstruct(ds);
  CHECK(r.converged);
  CHECK(process_fidelity(r.chi, cz) >= 0.9999);
  CHECK(r.tp_defect < 1e-5);

  // Physicality: PSD by construction.
  Eigen::SelfAdjointEigenSolver<Mat16> es(r.chi.chi(), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  // Monotone accepted-likelihood trace.
  for (std::size_t i = 1; i < r.likelihood_trace.size(); ++i) {
    CHECK(r.likelihood_trace[i] >= r.likelihood_trace[i - 1] - 1e-9);
  }
}

TEST_CASE("mle on Poisson counts reaches 0.99 fidelity", "[tomo]") {
  const ProcessMatrix ghh = ProcessMatrix::from_unitary(gate("G_HH"));
  const TomographyDataset ds = simulate_counts(ghh, 1e4, 42);
  const MleResult r = mle_reconstruct(ds);
  CHECK(process_fidelity(r.chi, ghh) >= 0.99);
}

TEST_CASE("mle recovers the fully depolarising channel", "[tomo]") {
  const ProcessMatrix depol = ProcessMatrix::depolarizing(1.0);
  const TomographyDataset ds = simulate_counts(depol, 1e5, 3);
  const MleResult r = mle_reconstruct(ds);
  CHECK(std::abs(r.chi.purity() - 1.0 / 16.0) < 0.01);
}

TEST_CASE("mle is permutation invariant", "[tomo]") {
  const ProcessMatrix cz = ProcessMatrix::from_unitary(gate("CZ"));
  TomographyDataset ds = simulate_counts(cz, 2000, 5);
  const MleResult r1 = mle_reconstruct(ds);
  std::shuffle(ds.records.begin(), ds.records.end(), std::mt19937_64(9));
  const MleResult r2 = mle_reconstruct(ds);
  CHECK((r1.chi.chi() - r2.chi.chi()).norm() < 1e-9);
}

TEST_CASE("mle rejects degenerate data", "[tomo]") {
  const ProcessMatrix cz = ProcessMatrix::from_unitary(gate("CZ"));
  TomographyDataset ds = simulate_counts(cz, 100, 1);
  for (auto& r : ds.records) r.counts = 0;
  CHECK_THROWS_AS(mle_reconstruct(ds), ValidationError);
}

TEST_CASE("post-selected maps scale the expected counts", "[tomo]") {
  // A trace-decreasing single-Kraus map with uniform success 1/9.
  const Mat4 k = (1.0 / 3.0) * gate("CZ");
  const ProcessMatrix chi = ProcessMatrix::from_kraus({std::move(k)});
  CHECK(chi.trace_norm() == Catch::Approx(1.0 / 9.0).margin(1e-12));
  const PrepSetting hh{PrepLabel::H, PrepLabel::H};
  const MeasSetting mhh{MeasLabel::H, MeasLabel::H};
  CHECK(predicted_probability(chi, hh, mhh) ==
        Catch::Approx(1.0 / 9.0).margin(1e-12));

  const TomographyDataset ds = simulate_counts(chi, 9e4, 11);
  const auto& r0 = ds.records.front();
  CHECK(std::abs(static_cast<double>(r0.counts) - 1e4) < 5.0 * std::sqrt(1e4));
}

TEST_CASE("bootstrap errors", "[tomo]") {
  const ProcessMatrix ghh = ProcessMatrix::from_unitary(gate("G_HH"));
  const TomographyDataset ds = simulate_counts(ghh, 5e3, 21);
  CHECK_THROWS_AS(bootstrap_errors(
                      ds, 10, [](const MleResult&) { return 0.0; }, 1, 2),
                  ValidationError);

  const BootstrapResult purity = bootstrap_errors(
      ds, 50, [](const MleResult& m) { return m.chi.purity(); }, 17, 2);
  CHECK(purity.failures == 0);
  // Unitary-process data: purity statistic within 2 sigma of 1 (biased
  // slightly below by the physicality constraint).
  CHECK(purity.mean + 2.0 * purity.stddev >= 0.97);
  CHECK(purity.stddev < 0.05);

  const BootstrapResult fid = bootstrap_errors(
      ds, 50,
      [&](const MleResult& m) { return process_fidelity(m.chi, ghh); }, 17, 2);
  CHECK(fid.mean > 0.97);
  CHECK(fid.stddev < 0.02);
}

TEST_CASE("design matrix is informationally complete", "[tomo]") {
  const double cond = design_condition_number();
  CHECK(std::isfinite(cond));
  CHECK(cond < 100.0);
}
