// Copyright 2026 the decohist authors
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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "decohist/qops.hpp"
#include "decohist/rng.hpp"

using namespace decohist;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

Mat sigma_x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Mat random_matrix(Eigen::Index d, CounterRng& rng) {
  Mat g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  return g;
}

}  // namespace

TEST_CASE("matrix exponential of zero is the identity") {
  const Mat z = Mat::Zero(3, 3);
  CHECK((matrix_exponential(z, 2.7) - Mat::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("diagonal propagator over one step interval") {
  const int n = 5;
  const double omega = 1.7;
  Mat h = Mat::Zero(n, n);
  for (int l = 0; l < n; ++l) h(l, l) = omega * l;
  const Mat u = matrix_exponential(h, 2.0 * kPi / (n * omega));
  for (int l = 0; l < n; ++l) {
    const Complex expected = std::exp(Complex(0.0, -2.0 * kPi * l / n));
    CHECK(std::abs(u(l, l) - expected) < 1e-12);
  }
}

TEST_CASE("exp(-i pi sigma_x) = -i sigma_x") {
  const Mat u = matrix_exponential(sigma_x(), kPi / 2.0);
  const Mat expected = Complex(0.0, -1.0) * sigma_x();
  CHECK((u - expected).norm() < 1e-12);
}

TEST_CASE("propagator group property for Hermitian generators") {
  CounterRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mat g = random_matrix(4, rng);
    const Mat h = (g + g.adjoint()) / 2.0;
    const double t1 = rng.next_double(), t2 = rng.next_double();
    const Mat lhs = matrix_exponential(h, t1) * matrix_exponential(h, t2);
    const Mat rhs = matrix_exponential(h, t1 + t2);
    CHECK((lhs - rhs).norm() < 1e-8);
  }
}

TEST_CASE("polar decomposition of a unitary") {
  CounterRng rng(7);
  Mat g = random_matrix(3, rng);
  const Mat h = (g + g.adjoint()) / 2.0;
  const Mat v = matrix_exponential(h, 1.0);
  const auto parts = polar_decompose(v);
  CHECK((parts.positive - Mat::Identity(3, 3)).norm() < 1e-10);
  CHECK((parts.unitary - v).norm() < 1e-10);
}

TEST_CASE("polar decomposition of sigma_minus uses the kernel completion") {
  const auto parts = polar_decompose(sigma_minus());
  Mat a = Mat::Zero(2, 2);
  a(1, 1) = 1.0;
  CHECK((parts.positive - a).norm() < 1e-12);
  CHECK((parts.unitary - sigma_x()).norm() < 1e-10);
}

TEST_CASE("polar decomposition of a positive diagonal is trivial") {
  Mat l = Mat::Zero(2, 2);
  l(0, 0) = 2.0;
  l(1, 1) = 3.0;
  const auto parts = polar_decompose(l);
  CHECK((parts.unitary - Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK((parts.positive - l).norm() < 1e-12);
}

TEST_CASE("polar round trip on random matrices up to d = 16") {
  CounterRng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next_u64() % 15);
    Mat l = random_matrix(d, rng);
    // Mix in rank-deficient cases.
    if (trial % 7 == 0) l.col(0).setZero();
    const auto parts = polar_decompose(l);
    CHECK((parts.unitary * parts.positive - l).norm() <= 1e-8 * std::max(1.0, l.norm()));
    CHECK((parts.unitary.adjoint() * parts.unitary - Mat::Identity(d, d)).norm() < 1e-8);
  }
}

TEST_CASE("hermitian square root") {
  CHECK((hermitian_sqrt(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() < 1e-12);

  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 4.0;
  a(1, 1) = 9.0;
  Mat r = Mat::Zero(2, 2);
  r(0, 0) = 2.0;
  r(1, 1) = 3.0;
  CHECK((hermitian_sqrt(a) - r).norm() < 1e-12);

  const Mat proj = (Mat::Identity(2, 2) + sigma_x()) / 2.0;
  CHECK((hermitian_sqrt(proj) - proj).norm() < 1e-10);

  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -1e-3;
  CHECK_THROWS_AS(hermitian_sqrt(bad), ValidationError);
}

TEST_CASE("tensor product and partial trace") {
  CounterRng rng(5);
  Mat ga = random_matrix(2, rng);
  Mat gb = random_matrix(3, rng);
  Mat rho_a = ga * ga.adjoint();
  rho_a /= rho_a.trace().real();
  Mat rho_b = gb * gb.adjoint();
  rho_b /= rho_b.trace().real();

  const Mat ab = tensor_product(rho_a, rho_b);
  CHECK((partial_trace(ab, 2, 3, Factor::Second) - rho_a).norm() < 1e-10);
  CHECK((partial_trace(ab, 2, 3, Factor::First) - rho_b).norm() < 1e-10);
  CHECK(std::abs(partial_trace(ab, 2, 3, Factor::Second).trace() - ab.trace()) < 1e-10);

  CHECK((tensor_product(Mat::Identity(2, 2), Mat::Identity(3, 3)) - Mat::Identity(6, 6))
            .norm() < 1e-14);

  // Bell state: both marginals are maximally mixed.
  Vec bell = Vec::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  const Mat bell_rho = pure_density(bell);
  CHECK((partial_trace(bell_rho, 2, 2, Factor::First) - Mat::Identity(2, 2) / 2.0).norm() <
        1e-12);
}

TEST_CASE("projector family validation") {
  Mat p0 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  Mat p1 = Mat::Zero(2, 2);
  p1(1, 1) = 1.0;
  CHECK_NOTHROW(ProjectorFamily::checked({p0, p1}));
  CHECK_THROWS_AS(ProjectorFamily::checked({p0, p0}), ValidationError);
  CHECK_THROWS_AS(ProjectorFamily::checked({p0}), ValidationError);
  CHECK_THROWS_AS(ProjectorFamily::checked({0.5 * p0, p1}), ValidationError);
}

TEST_CASE("density-matrix validation") {
  Mat good = Mat::Zero(2, 2);
  good(0, 0) = 0.25;
  good(1, 1) = 0.75;
  CHECK_NOTHROW(check_density_matrix(good));

  Mat not_unit = 2.0 * good;
  CHECK_THROWS_AS(check_density_matrix(not_unit), ValidationError);

  Mat not_psd = Mat::Zero(2, 2);
  not_psd(0, 0) = 1.5;
  not_psd(1, 1) = -0.5;
  CHECK_THROWS_AS(check_density_matrix(not_psd), ValidationError);
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(require_same_dim(Mat::Identity(2, 2), Mat::Identity(3, 3), "test"),
                  DimensionError);
  Mat nan = Mat::Identity(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(require_finite(nan, "test"), ValidationError);
}

TEST_CASE("trace norm and trace distance") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  Mat b = Mat::Zero(2, 2);
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_norm(sigma_x()) == doctest::Approx(2.0));
}
