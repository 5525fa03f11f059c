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

#include <array>
#include <cstdint>

#include "mgforge/algebra.hpp"

namespace mgforge {

/// Canonical nonlocal coordinates (c1, c2, c3) of a two-qubit gate.
///
/// The canonical chamber is the tetrahedron
///   pi >= c1 >= c2 >= c3 >= 0,  c1 + c2 <= pi,
/// with the extra fold c1 <= pi/2 on the c3 = 0 plane (that plane is
/// mirror symmetric about c1 = pi/2, so both halves describe the same
/// local-equivalence classes).
struct WeylPoint {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Local unitaries dressing a canonical gate:
/// U = (u1 (x) v1) . canonical . (u2 (x) v2).
struct LocalDressing {
  Mat2 u1 = Mat2::Identity();
  Mat2 v1 = Mat2::Identity();
  Mat2 u2 = Mat2::Identity();
  Mat2 v2 = Mat2::Identity();
};

/// Polynomial local invariants; equal (g1 and g2) iff two gates are
/// locally equivalent.
struct MakhlinInvariants {
  cdouble g1;
  double g2;
};

/// Tetrahedron membership without the c3 = 0 fold. This is the validity
/// domain of nonlocal_distance, whose range [0, pi] needs the [pi,0,0]
/// vertex.
bool in_weyl_tetrahedron(const WeylPoint& p, double tol = 1e-9);
/// Full canonical-chamber membership including the c3 = 0 fold.
bool is_chamber_canonical(const WeylPoint& p, double tol = 1e-9);

/// Reduce an arbitrary coordinate triple to its canonical representative
/// (brute-force over the symmetry images: coordinate permutations,
/// pairwise sign flips, single-coordinate pi shifts).
WeylPoint chamber_reduce(const WeylPoint& p);

/// exp(-i/2 (c1 XX + c2 YY + c3 ZZ)), evaluated in closed form through
/// the magic basis where the exponent is diagonal.
Mat4 canonical_unitary(const WeylPoint& p);

/// Canonical coordinates of a unitary via the magic-basis eigenphase
/// method, reduced to the chamber.
WeylPoint kak_coordinates(const Mat4& u);

/// Full canonical decomposition u = e^{i phase} (u1 (x) v1)
/// canonical_unitary(point) (u2 (x) v2) with a chamber-canonical point.
struct KakDecomposition {
  WeylPoint point;
  LocalDressing dressing;
  double phase = 0.0;
};

KakDecomposition kak_decompose(const Mat4& u);

/// Split an exact tensor product (up to a phase) into its factors:
/// u = e^{i phase} (l (x) r) with det(l) = det(r) = 1.
struct KronFactors {
  Mat2 l;
  Mat2 r;
  double phase = 0.0;
};

KronFactors kron_factor(const Mat4& u);

MakhlinInvariants makhlin_invariants(const Mat4& u);

/// True iff the Makhlin invariants agree within 1e-7.
bool locally_equivalent(const Mat4& u, const Mat4& v);

struct ConcurrenceOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_evals = 700;
};

/// Maximum output concurrence over product input states, by seeded
/// multi-start simplex over the 4 Bloch angles.
double max_output_concurrence(const Mat4& u, const ConcurrenceOptions& opts = {});

/// Perfect-entangler test, defined by the concurrence oracle:
/// max_output_concurrence(canonical_unitary(p)) >= 1 - 1e-6.
bool is_perfect_entangler(const WeylPoint& p, const ConcurrenceOptions& opts = {});

/// Closed-form fast path: a canonical gate is a perfect entangler iff the
/// origin lies in the convex hull of its four magic-basis eigenvalues
/// squared. Validated against the oracle, never the definition.
bool is_perfect_entangler_fast(const WeylPoint& p, double tol = 1e-9);

/// Euclidean distance sqrt(dc1^2 + dc2^2 + dc3^2). Inputs must lie in the
/// Weyl tetrahedron. With min_over_images, the distance is minimised over
/// the chamber-symmetry images of q.
double nonlocal_distance(const WeylPoint& p, const WeylPoint& q,
                         bool min_over_images = false);

/// The four magic-basis eigenphases of canonical_unitary(p); mu[k] is the
/// phase on Bell vector k, so canonical = B diag(e^{-i mu}) B^dag.
std::array<double, 4> canonical_eigenphases(const WeylPoint& p);

/// Magic (Bell) basis as a unitary matrix of column vectors.
const Mat4& magic_basis();

}  // namespace mgforge
