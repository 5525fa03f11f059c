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

#include <cmath>
#include <numbers>

#include "mgforge/matchgate.hpp"

using namespace mgforge;

namespace {
constexpr double kPi = std::numbers::pi;

Mat2 random_det_matched(std::mt19937_64& rng, const Mat2& a) {
  // Random unitary with det equal to det(a).
  Mat2 b = haar_unitary2(rng);
  const cdouble ratio = a.determinant() / b.determinant();
  return std::sqrt(ratio) * b;
}
}  // namespace

TEST_CASE("compose_matchgate layout", "[matchgate]") {
  const Matchgate id(Mat2::Identity(), Mat2::Identity());
  CHECK((compose_matchgate(id) - Mat4::Identity()).norm() < 1e-15);

  const Matchgate ghh(gate_h(), gate_h());
  const Mat4 u = compose_matchgate(ghh);
  Mat4 expect;
  const double s = 1.0 / std::sqrt(2.0);
  expect << s, 0, 0, s,  //
      0, s, s, 0,        //
      0, s, -s, 0,       //
      s, 0, 0, -s;
  CHECK((u - expect).norm() < 1e-14);
}

TEST_CASE("determinant constraint and relaxed flag", "[matchgate]") {
  CHECK_THROWS_AS(Matchgate(Mat2::Identity(), pauli_x()), ConstraintError);
  CHECK_THROWS_MATCHES(
      Matchgate(Mat2::Identity(), pauli_x()), ConstraintError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("determinant mismatch")));

  const Matchgate gix(Mat2::Identity(), pauli_x(), true);
  Mat4 swap = Mat4::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  CHECK((compose_matchgate(gix) - swap).norm() < 1e-15);
}

TEST_CASE("recognize_matchgate roundtrip and canonical phase", "[matchgate]") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 200; ++k) {
    const Mat2 a = haar_unitary2(rng);
    const Mat2 b = random_det_matched(rng, a);
    const Mat4 u = compose_matchgate(Matchgate(a, b));
    const auto r = recognize_matchgate(u);
    REQUIRE(std::holds_alternative<Matchgate>(r));
    const Matchgate& m = std::get<Matchgate>(r);
    // Joint phase freedom: (a, b) -> (e^{i phi} a, e^{i phi} b).
    const cdouble num = (m.a().adjoint() * a).trace();
    const cdouble ph = num / std::abs(num);
    CHECK((m.a() * ph - a).norm() < 1e-9);
    CHECK((m.b() * ph - b).norm() < 1e-9);
    CHECK(m.a()(0, 0).imag() == Catch::Approx(0.0).margin(1e-12));
    CHECK(m.a()(0, 0).real() >= -1e-12);
  }
}

TEST_CASE("recognize G_HH yields its Hadamard blocks", "[matchgate]") {
  const auto r = recognize_matchgate(std::get<Mat4>(named_gate("G_HH")));
  REQUIRE(std::holds_alternative<Matchgate>(r));
  CHECK((std::get<Matchgate>(r).a() - gate_h()).norm() < 1e-12);
  CHECK((std::get<Matchgate>(r).b() - gate_h()).norm() < 1e-12);
}

TEST_CASE("recognize_matchgate rejections", "[matchgate]") {
  Mat4 cnot = Mat4::Zero();
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const auto r1 = recognize_matchgate(cnot);
  REQUIRE(std::holds_alternative<MatchgateRejection>(r1));
  CHECK(std::get<MatchgateRejection>(r1).reason ==
        MatchgateRejection::Reason::PatternViolation);

  Mat4 swap = Mat4::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const auto r2 = recognize_matchgate(swap);
  REQUIRE(std::holds_alternative<MatchgateRejection>(r2));
  const auto& rej = std::get<MatchgateRejection>(r2);
  CHECK(rej.reason == MatchgateRejection::Reason::DetMismatch);
  REQUIRE(rej.extracted_a.has_value());
  REQUIRE(rej.extracted_b.has_value());
  CHECK((*rej.extracted_a - Mat2::Identity()).norm() < 1e-12);
  CHECK((*rej.extracted_b - pauli_x()).norm() < 1e-12);
}

TEST_CASE("named gates", "[matchgate]") {
  CHECK((std::get<Mat4>(named_gate("G_XX")) - tensor(pauli_x(), pauli_x()))
            .norm() < 1e-15);
  CHECK((std::get<Mat4>(named_gate("G_TT")) - tensor(gate_t(), Mat2::Identity()))
            .norm() < 1e-15);

  // G_TT = diag(1, 1, e^{i pi/4}, e^{i pi/4}).
  const Mat4 gtt = std::get<Mat4>(named_gate("G_TT"));
  CHECK(std::abs(gtt(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(gtt(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(gtt(2, 2) - std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(std::abs(gtt(3, 3) - std::polar(1.0, kPi / 4)) < 1e-15);

  const Mat4 gzx = std::get<Mat4>(named_gate("G_ZX"));
  const auto r = recognize_matchgate(gzx);
  REQUIRE(std::holds_alternative<Matchgate>(r));
  CHECK((std::get<Matchgate>(r).a() - pauli_z()).norm() < 1e-12);
  CHECK((std::get<Matchgate>(r).b() - pauli_x()).norm() < 1e-12);

  const Mat4 gix = std::get<Mat4>(named_gate("G_IX"));
  CHECK((gix - std::get<Mat4>(named_gate("SWAP"))).norm() < 1e-15);
  CHECK(named_gate_is_relaxed("G_IX"));
  CHECK(!named_gate_is_relaxed("G_HH"));

  CHECK_THROWS_AS(named_gate("G_QQ"), UnknownNameError);
}

TEST_CASE("logical action of symmetric matchgates", "[matchgate]") {
  CHECK((logical_action(Matchgate(gate_h(), gate_h())) - gate_h()).norm() <
        1e-12);
  CHECK((logical_action(Matchgate(gate_t(), gate_t())) - gate_t()).norm() <
        1e-12);

  std::mt19937_64 rng(123);
  for (int k = 0; k < 1000; ++k) {
    const Mat2 a = haar_unitary2(rng);
    CHECK((logical_action(Matchgate(a, a)) - a).norm() < 1e-10);
  }

  const Matchgate asym(pauli_z(), pauli_x(), false);
  CHECK_THROWS_AS(logical_action(asym), ValidationError);
}

TEST_CASE("parity preservation", "[matchgate]") {
  std::mt19937_64 rng(17);
  const int even[2] = {0, 3}, odd[2] = {1, 2};
  for (int k = 0; k < 50; ++k) {
    const Mat2 a = haar_unitary2(rng);
    const Mat2 b = random_det_matched(rng, a);
    const Mat4 u = compose_matchgate(Matchgate(a, b));
    for (int e : even)
      for (int o : odd) {
        CHECK(std::abs(u(o, e)) < 1e-14);
        CHECK(std::abs(u(e, o)) < 1e-14);
      }
  }
}

TEST_CASE("determinant multiplicativity", "[matchgate]") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 100; ++k) {
    const Mat2 a = haar_unitary2(rng);
    const Mat2 b = random_det_matched(rng, a);
    const Mat4 u = compose_matchgate(Matchgate(a, b));
    CHECK(std::abs(u.determinant() - a.determinant() * b.determinant()) <
          1e-10);
  }
}

TEST_CASE("cz from matchgates identity", "[matchgate]") {
  const Mat4 cz = cz_from_matchgates();
  Mat4 expect = Mat4::Identity();
  expect(3, 3) = -1.0;
  CHECK((cz - expect).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::Vector4cd e11;
  e11 << 0, 0, 0, 1;
  CHECK((cz * e11 + e11).norm() < 1e-12);  // CZ|11> = -|11>
  CHECK((cz.adjoint() * cz - Mat4::Identity()).norm() < 1e-14);
}

TEST_CASE("logical qubit encoding", "[matchgate]") {
  Eigen::Vector2cd amp;
  amp << 0.6, cdouble(0.0, 0.8);
  const LogicalQubit q(amp);
  const Eigen::Vector4cd psi = q.physical();
  CHECK(std::abs(psi(1)) == 0.0);
  CHECK(std::abs(psi(2)) == 0.0);

  // A symmetric matchgate acts on the encoded qubit as its block a.
  std::mt19937_64 rng(88);
  for (int k = 0; k < 100; ++k) {
    const Mat2 a = haar_unitary2(rng);
    const Mat4 g = compose_matchgate(Matchgate(a, a));
    const LogicalQubit out = LogicalQubit::from_physical(g * psi);
    const Eigen::Vector2cd expect = a * amp;
    const cdouble ph = out.amplitudes().dot(expect);  // phase alignment
    CHECK((out.amplitudes() * (ph / std::abs(ph)) - expect).norm() < 1e-10);
  }

  Eigen::Vector2cd bad;
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(LogicalQubit(bad), ValidationError);
  Eigen::Vector4cd odd;
  odd << 0, 1, 0, 0;
  CHECK_THROWS_AS(LogicalQubit::from_physical(odd), ValidationError);
}
