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

#include "decohist/qops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace decohist {

bool all_finite(const Mat& m) {
  return m.allFinite();
}

void require_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) throw ValidationError(what + ": non-finite entries");
}

void require_square(const Mat& m, const std::string& what) {
  if (m.rows() != m.cols())
    throw DimensionError(what + ": operator must be square");
}

void require_same_dim(const Mat& a, const Mat& b, const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(what + ": dimension mismatch (" +
                         std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()) + ")");
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat identity(Eigen::Index d) {
  return Mat::Identity(d, d);
}

double frob_norm(const Mat& m) {
  return m.norm();
}

double trace_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const Mat& a, const Mat& b) {
  return 0.5 * trace_norm(a - b);
}

Mat matrix_exponential(const Mat& a, double t, ExpMode mode) {
  require_square(a, "matrix_exponential");
  require_finite(a, "matrix_exponential");
  if (is_hermitian(a)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    const Eigen::VectorXd& w = es.eigenvalues();
    Vec phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (mode == ExpMode::Propagator)
        phases(i) = std::exp(Complex(0.0, -w(i) * t));
      else
        phases(i) = std::exp(Complex(w(i) * t, 0.0));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  const Mat scaled = (mode == ExpMode::Propagator) ? Mat(Complex(0.0, -t) * a)
                                                   : Mat(t * a);
  return scaled.exp();
}

PolarParts polar_decompose(const Mat& l) {
  require_square(l, "polar_decompose");
  require_finite(l, "polar_decompose");
  const Eigen::Index d = l.rows();

  Eigen::SelfAdjointEigenSolver<Mat> es(l.adjoint() * l);
  Eigen::VectorXd w = es.eigenvalues();
  const Mat& v = es.eigenvectors();

  const double rank_tol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  Eigen::VectorXd sv(d);
  for (Eigen::Index i = 0; i < d; ++i) sv(i) = std::sqrt(std::max(w(i), 0.0));

  Mat a = v * sv.asDiagonal() * v.adjoint();

  // Columns of u in the eigenbasis of A: range vectors come from L itself.
  Mat u_cols(d, d);
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (w(i) > rank_tol) {
      u_cols.col(i) = l * v.col(i) / sv(i);
    } else {
      kernel.push_back(i);
      u_cols.col(i).setZero();
    }
  }

  // Complete on ker(A): map kernel basis vectors, in index order, onto an
  // orthonormal basis of range(L)^perp obtained by Gram-Schmidt over the
  // standard basis.
  std::size_t next_kernel = 0;
  for (Eigen::Index e = 0; e < d && next_kernel < kernel.size(); ++e) {
    Vec cand = Vec::Zero(d);
    cand(e) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (u_cols.col(i).norm() > 0.5)
        cand -= u_cols.col(i) * (u_cols.col(i).dot(cand));
    }
    const double n = cand.norm();
    if (n > 1e-8) {
      u_cols.col(kernel[next_kernel++]) = cand / n;
    }
  }

  Mat u = u_cols * v.adjoint();
  return {std::move(u), std::move(a)};
}

Mat hermitian_sqrt(const Mat& a) {
  require_square(a, "hermitian_sqrt");
  require_finite(a, "hermitian_sqrt");
  if (!is_hermitian(a, 1e-8))
    throw ValidationError("hermitian_sqrt: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  Eigen::VectorXd w = es.eigenvalues();
  if (w.minCoeff() < -1e-6)
    throw ValidationError("hermitian_sqrt: input not PSD (min eigenvalue " +
                          std::to_string(w.minCoeff()) + ")");
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w(i) = std::sqrt(std::max(w(i), 0.0));
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

Mat tensor_product(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat partial_trace(const Mat& ab, Eigen::Index dim_first, Eigen::Index dim_second,
                  Factor traced) {
  require_square(ab, "partial_trace");
  if (ab.rows() != dim_first * dim_second)
    throw DimensionError("partial_trace: operator dimension is not the product of the factors");
  if (traced == Factor::Second) {
    Mat out = Mat::Zero(dim_first, dim_first);
    for (Eigen::Index i = 0; i < dim_first; ++i)
      for (Eigen::Index j = 0; j < dim_first; ++j)
        for (Eigen::Index k = 0; k < dim_second; ++k)
          out(i, j) += ab(i * dim_second + k, j * dim_second + k);
    return out;
  }
  Mat out = Mat::Zero(dim_second, dim_second);
  for (Eigen::Index i = 0; i < dim_second; ++i)
    for (Eigen::Index j = 0; j < dim_second; ++j)
      for (Eigen::Index k = 0; k < dim_first; ++k)
        out(i, j) += ab(k * dim_second + i, k * dim_second + j);
  return out;
}

void check_state_vector(const Vec& psi, double tol) {
  if (!psi.allFinite()) throw ValidationError("state vector: non-finite entries");
  if (std::abs(psi.norm() - 1.0) > tol)
    throw ValidationError("state vector: not normalized");
}

void check_density_matrix(const Mat& rho, double tol) {
  require_square(rho, "density matrix");
  require_finite(rho, "density matrix");
  if (!is_hermitian(rho, tol))
    throw ValidationError("density matrix: not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    throw ValidationError("density matrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw ValidationError("density matrix: not positive semidefinite");
}

Mat pure_density(const Vec& psi) {
  check_state_vector(psi);
  return psi * psi.adjoint();
}

ProjectorFamily ProjectorFamily::checked(std::vector<Mat> members, double tol) {
  if (members.empty()) throw ValidationError("projector family: empty");
  const Eigen::Index d = members.front().rows();
  Mat sum = Mat::Zero(d, d);
  for (std::size_t a = 0; a < members.size(); ++a) {
    const Mat& p = members[a];
    require_square(p, "projector family");
    if (p.rows() != d) throw DimensionError("projector family: mixed dimensions");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol)
      throw ValidationError("projector family: member not idempotent");
    if (!is_hermitian(p, tol))
      throw ValidationError("projector family: member not Hermitian");
    for (std::size_t b = 0; b < a; ++b) {
      if ((p * members[b]).norm() > tol)
        throw ValidationError("projector family: members not orthogonal");
    }
    sum += p;
  }
  if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("projector family: members do not sum to identity");
  return ProjectorFamily{std::move(members)};
}

KrausFamily KrausFamily::checked(std::vector<Mat> members, double tol) {
  if (members.empty()) throw ValidationError("kraus family: empty");
  const Eigen::Index d = members.front().rows();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& k : members) {
    require_square(k, "kraus family");
    if (k.rows() != d) throw DimensionError("kraus family: mixed dimensions");
    require_finite(k, "kraus family");
    sum += k.adjoint() * k;
  }
  if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("kraus family: K^dag K does not sum to identity");
  return KrausFamily{std::move(members)};
}

}  // namespace decohist
