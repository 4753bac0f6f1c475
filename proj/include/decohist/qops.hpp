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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace decohist {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Default tolerances: structural invariants vs. round-trip identities.
struct Tolerances {
  double structural = 1e-10;
  double roundtrip = 1e-8;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool all_finite(const Mat& m);
void require_finite(const Mat& m, const std::string& what);
void require_square(const Mat& m, const std::string& what);
void require_same_dim(const Mat& a, const Mat& b, const std::string& what);

bool is_hermitian(const Mat& m, double tol = 1e-10);

Mat identity(Eigen::Index d);

/// Spectral norm-free cheap norms used throughout.
double frob_norm(const Mat& m);
/// Trace norm (sum of singular values).
double trace_norm(const Mat& m);
/// Trace distance (1/2)*||a-b||_1 between density matrices.
double trace_distance(const Mat& a, const Mat& b);

enum class ExpMode {
  Propagator,  // exp(-i A t)
  Raw,         // exp(A t)
};

/// Matrix exponential.  Hermitian inputs go through an eigendecomposition,
/// everything else through scaling-and-squaring Pade.
Mat matrix_exponential(const Mat& a, double t, ExpMode mode = ExpMode::Propagator);

struct PolarParts {
  Mat unitary;   // U
  Mat positive;  // A = sqrt(L^dag L), Hermitian PSD
};

/// L = U A with A = (L^dag L)^{1/2}.  For singular L the unitary is
/// completed deterministically: kernel vectors of A are mapped, in index
/// order, onto an orthonormal basis of the orthogonal complement of
/// range(L) built by Gram-Schmidt over the standard basis.
PolarParts polar_decompose(const Mat& l);

/// Hermitian PSD square root.  Eigenvalues in [-1e-10, 0) are clamped to
/// zero; anything below -1e-6 is rejected as non-PSD.
Mat hermitian_sqrt(const Mat& a);

Mat tensor_product(const Mat& a, const Mat& b);

enum class Factor { First, Second };

/// Trace out one tensor factor of an operator on a (dim_first x dim_second)
/// product space.
Mat partial_trace(const Mat& ab, Eigen::Index dim_first, Eigen::Index dim_second,
                  Factor traced);

/// State helpers.
void check_state_vector(const Vec& psi, double tol = 1e-10);
void check_density_matrix(const Mat& rho, double tol = 1e-10);
Mat pure_density(const Vec& psi);

/// Exhaustive, mutually exclusive projective outcomes.
struct ProjectorFamily {
  std::vector<Mat> members;

  Eigen::Index dim() const { return members.empty() ? 0 : members.front().rows(); }

  /// Validates idempotence, Hermiticity, pairwise orthogonality and
  /// completeness, throwing ValidationError on failure.
  static ProjectorFamily checked(std::vector<Mat> members, double tol = 1e-10);
};

/// Generalized-measurement family: sum_a K_a^dag K_a = I.
struct KrausFamily {
  std::vector<Mat> members;

  Eigen::Index dim() const { return members.empty() ? 0 : members.front().rows(); }

  static KrausFamily checked(std::vector<Mat> members, double tol = 1e-10);
};

}  // namespace decohist
