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
#include "mgforge/weyl.hpp"

using namespace mgforge;

namespace {
constexpr double kPi = std::numbers::pi;

Mat4 gate(const char* name) { return std::get<Mat4>(named_gate(name)); }

WeylPoint random_chamber_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    double t1 = uni(rng), t2 = uni(rng), t3 = uni(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 > t3) std::swap(t2, t3);
    if (t1 > t2) std::swap(t1, t2);
    const double b1 = t1, b2 = t2 - t1, b3 = t3 - t2;
    const WeylPoint p{b1 * kPi + (b2 + b3) * kPi / 2.0,
                      (b2 + b3) * kPi / 2.0, b3 * kPi / 2.0};
    if (is_chamber_canonical(p, 0.0)) return p;
  }
}

double pdist(const WeylPoint& a, const WeylPoint& b) {
  return std::sqrt((a.c1 - b.c1) * (a.c1 - b.c1) +
                   (a.c2 - b.c2) * (a.c2 - b.c2) +
                   (a.c3 - b.c3) * (a.c3 - b.c3));
}
}  // namespace

TEST_CASE("canonical_unitary special points", "[weyl]") {
  CHECK((canonical_unitary({0, 0, 0}) - Mat4::Identity()).norm() < 1e-14);

  const Mat4 swap_like = canonical_unitary({kPi / 2, kPi / 2, kPi / 2});
  CHECK(phase_distance(swap_like, gate("SWAP")) < 1e-12);

  CHECK(locally_equivalent(canonical_unitary({kPi / 2, 0, 0}), gate("CZ")));
  CHECK(is_unitary(canonical_unitary({0.4, 0.3, 0.2})));
}

TEST_CASE("kak of local and named gates", "[weyl]") {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    const Mat4 uv = tensor(haar_unitary2(rng), haar_unitary2(rng));
    const WeylPoint p = kak_coordinates(uv);
    CHECK(pdist(p, {0, 0, 0}) < 1e-8);
  }
  CHECK(pdist(kak_coordinates(gate("G_XX")), {0, 0, 0}) < 1e-8);
  CHECK(pdist(kak_coordinates(gate("G_TT")), {0, 0, 0}) < 1e-8);

  const WeylPoint cz_pt{kPi / 2, 0, 0};
  CHECK(pdist(kak_coordinates(gate("CZ")), cz_pt) < 1e-8);
  CHECK(pdist(kak_coordinates(gate("CNOT")), cz_pt) < 1e-8);
  CHECK(pdist(kak_coordinates(gate("G_HH")), cz_pt) < 1e-8);

  CHECK(pdist(kak_coordinates(gate("SWAP")), {kPi / 2, kPi / 2, kPi / 2}) <
        1e-8);
}

TEST_CASE("kak synthesis/analysis roundtrip", "[weyl]") {
  std::mt19937_64 rng(333);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const WeylPoint p = random_chamber_point(rng);
    const WeylPoint q = kak_coordinates(canonical_unitary(p));
    worst = std::max(worst, pdist(p, q));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("kak invariance under local dressing", "[weyl]") {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Mat4 u = haar_unitary4(rng);
    const WeylPoint p = kak_coordinates(u);
    for (int d = 0; d < 10; ++d) {
      const Mat4 v = tensor(haar_unitary2(rng), haar_unitary2(rng)) * u *
                     tensor(haar_unitary2(rng), haar_unitary2(rng));
      worst = std::max(worst, pdist(p, kak_coordinates(v)));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("chamber reduction and membership", "[weyl]") {
  CHECK(is_chamber_canonical({kPi / 2, 0, 0}));
  CHECK(!is_chamber_canonical({kPi, 0, 0}));  // c3 = 0 fold
  CHECK(in_weyl_tetrahedron({kPi, 0, 0}));    // but inside the tetrahedron
  CHECK(!in_weyl_tetrahedron({kPi / 2, kPi / 2, kPi / 2 + 0.2}));

  // The fold maps [pi - x, 0, 0] onto [x, 0, 0].
  const WeylPoint r = chamber_reduce({3 * kPi / 4, 0, 0});
  CHECK(pdist(r, {kPi / 4, 0, 0}) < 1e-12);

  // Idempotence on canonical points.
  std::mt19937_64 rng(777);
  for (int k = 0; k < 200; ++k) {
    const WeylPoint p = random_chamber_point(rng);
    CHECK(pdist(chamber_reduce(p), p) < 1e-12);
  }
}

TEST_CASE("makhlin invariants equal across symmetry images", "[weyl]") {
  std::mt19937_64 rng(555);
  for (int k = 0; k < 40; ++k) {
    const WeylPoint p = random_chamber_point(rng);
    const MakhlinInvariants base = makhlin_invariants(canonical_unitary(p));
    const WeylPoint images[] = {
        {p.c1 + kPi, p.c2, p.c3},   // single-coordinate pi shift
        {-p.c1, -p.c2, p.c3},       // pairwise sign flips
        {-p.c1, p.c2, -p.c3},
        {p.c2, p.c1, p.c3},         // permutations
        {p.c3, p.c2, p.c1},
        {kPi - p.c1, p.c2, -p.c3},  // mirror used by the fold
    };
    for (const auto& q : images) {
      const MakhlinInvariants m = makhlin_invariants(canonical_unitary(q));
      CHECK(std::abs(m.g1 - base.g1) < 1e-8);
      CHECK(std::abs(m.g2 - base.g2) < 1e-8);
    }
  }
}

TEST_CASE("local equivalence checks", "[weyl]") {
  CHECK(locally_equivalent(gate("CZ"), gate("CNOT")));
  CHECK(locally_equivalent(gate("CZ"), gate("G_HH")));
  CHECK(!locally_equivalent(gate("CZ"), gate("SWAP")));

  std::mt19937_64 rng(808);
  for (int k = 0; k < 30; ++k) {
    const Mat4 u = haar_unitary4(rng);
    const Mat4 v = tensor(haar_unitary2(rng), haar_unitary2(rng)) * u *
                   tensor(haar_unitary2(rng), haar_unitary2(rng));
    CHECK(locally_equivalent(u, v));
  }
}

TEST_CASE("max output concurrence", "[weyl]") {
  ConcurrenceOptions opts;
  opts.seed = 9;
  CHECK(max_output_concurrence(Mat4::Identity(), opts) < 1e-6);
  CHECK(max_output_concurrence(gate("G_HH"), opts) ==
        Catch::Approx(1.0).margin(1e-6));
  CHECK(max_output_concurrence(canonical_unitary({kPi / 4, 0, 0}), opts) ==
        Catch::Approx(std::sin(kPi / 4)).margin(1e-5));
  CHECK(max_output_concurrence(gate("SWAP"), opts) < 1e-6);
}

TEST_CASE("perfect entangler oracle and fast path", "[weyl]") {
  ConcurrenceOptions opts;
  opts.seed = 12;
  CHECK(is_perfect_entangler({kPi / 2, 0, 0}, opts));
  CHECK(!is_perfect_entangler({0, 0, 0}, opts));
  CHECK(is_perfect_entangler_fast({kPi / 2, 0, 0}));
  CHECK(!is_perfect_entangler_fast({0, 0, 0}));
  CHECK(!is_perfect_entangler_fast({kPi / 2, kPi / 2, kPi / 2}));  // SWAP
  CHECK(is_perfect_entangler_fast({kPi / 4, kPi / 4, kPi / 4}));   // sqrt-SWAP

  // On the line [gamma, 0, 0] only gamma = pi/2 entangles maximally.
  for (double g = 0.0; g <= kPi / 2 + 1e-9; g += kPi / 16) {
    const bool expect = std::abs(g - kPi / 2) < 1e-9;
    CHECK(is_perfect_entangler_fast({g, 0, 0}) == expect);
  }

  std::mt19937_64 rng(2025);
  int agree = 0;
  const int n = 150;
  for (int k = 0; k < n; ++k) {
    const WeylPoint p = random_chamber_point(rng);
    ConcurrenceOptions o;
    o.seed = derive_seed(1, k);
    agree += is_perfect_entangler(p, o) == is_perfect_entangler_fast(p);
  }
  CHECK(agree >= n - 1);
}

TEST_CASE("nonlocal distance", "[weyl]") {
  const WeylPoint p{0.3, 0.2, 0.1};
  CHECK(nonlocal_distance(p, p) == 0.0);
  CHECK(nonlocal_distance({0, 0, 0}, {kPi, 0, 0}) ==
        Catch::Approx(kPi).margin(1e-12));
  CHECK(nonlocal_distance({kPi / 2, 0, 0}, {kPi / 2, kPi / 2, kPi / 2}) ==
        Catch::Approx(kPi / std::sqrt(2.0)).margin(1e-12));

  CHECK_THROWS_AS(nonlocal_distance({kPi + 0.1, 0, 0}, p), ValidationError);
  CHECK_THROWS_AS(nonlocal_distance(p, {0.1, 0.2, 0.3}), ValidationError);

  // [pi,0,0] is the local class again; the image-minimised distance is 0.
  CHECK(nonlocal_distance({0, 0, 0}, {kPi, 0, 0}, true) < 1e-12);
}

TEST_CASE("kak_decompose reconstructs the unitary", "[weyl]") {
  std::mt19937_64 rng(909);
  for (int k = 0; k < 300; ++k) {
    const Mat4 u = haar_unitary4(rng);
    const KakDecomposition d = kak_decompose(u);
    CHECK(is_chamber_canonical(d.point, 1e-9));
    const Mat4 w = std::polar(1.0, d.phase) *
                   (tensor(d.dressing.u1, d.dressing.v1) *
                    canonical_unitary(d.point) *
                    tensor(d.dressing.u2, d.dressing.v2));
    CHECK((w - u).norm() < 1e-8);
    // Coordinates agree with the eigenvalue-only path.
    const WeylPoint p = kak_coordinates(u);
    CHECK(pdist(d.point, p) < 1e-7);
  }
  // Symmetry points decompose too.
  for (const char* name : {"SWAP", "CZ", "CNOT", "G_HH", "G_XX"}) {
    const Mat4 u = gate(name);
    const KakDecomposition d = kak_decompose(u);
    const Mat4 w = std::polar(1.0, d.phase) *
                   (tensor(d.dressing.u1, d.dressing.v1) *
                    canonical_unitary(d.point) *
                    tensor(d.dressing.u2, d.dressing.v2));
    CHECK((w - u).norm() < 1e-8);
  }
}

TEST_CASE("kron_factor splits products and rejects entanglers", "[weyl]") {
  std::mt19937_64 rng(911);
  for (int k = 0; k < 100; ++k) {
    const Mat2 a = haar_unitary2(rng), b = haar_unitary2(rng);
    const Mat4 u = std::polar(1.0, 0.37) * tensor(a, b);
    const KronFactors f = kron_factor(u);
    Mat4 rec;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        rec.block<2, 2>(2 * i, 2 * j) = f.l(i, j) * f.r;
    CHECK((std::polar(1.0, f.phase) * rec - u).norm() < 1e-10);
  }
  CHECK_THROWS_AS(kron_factor(gate("CNOT")), NumericalError);
}
