// Copyright 2026 The rispat Authors
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

#ifndef RISPAT_NUMERICS_HPP_
#define RISPAT_NUMERICS_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rispat {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultTol = 1e-10;

// Builds a complex matrix from row-major data; throws if the sizes disagree.
inline CMat make_cmat(int rows, int cols, std::span<const cplx> row_major) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("make_cmat: dimensions must be positive");
  }
  if (row_major.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("make_cmat: expected " +
                                std::to_string(rows * cols) + " entries, got " +
                                std::to_string(row_major.size()));
  }
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = row_major[r * cols + c];
  }
  return m;
}

// Real counterpart of make_cmat. Rejects non-finite entries.
inline RMat make_rmat(int rows, int cols, std::span<const double> row_major) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("make_rmat: dimensions must be positive");
  }
  if (row_major.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("make_rmat: expected " +
                                std::to_string(rows * cols) + " entries, got " +
                                std::to_string(row_major.size()));
  }
  RMat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = row_major[r * cols + c];
      if (!std::isfinite(v)) {
        throw std::invalid_argument("make_rmat: non-finite entry");
      }
      m(r, c) = v;
    }
  }
  return m;
}

/// Reduces an angle to [0, 2*pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2*pi can round up to 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Distance between two angles measured along the unit circle, in [0, pi].
inline double circular_distance(double alpha, double beta) {
  const double forward = wrap_angle(alpha - beta);
  const double backward = wrap_angle(beta - alpha);
  return std::min(forward, backward);
}

struct EigenPair {
  double value = 0.0;
  CVec vector;
};

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
///
/// The input is checked for Hermitian symmetry relative to its Frobenius
/// norm. The eigenvector phase is fixed so that its largest-magnitude entry is
/// real and positive, which makes the output reproducible across calls.
inline EigenPair hermitian_max_eig(const CMat& h, double tol = kDefaultTol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("hermitian_max_eig: matrix must be square");
  }
  const double scale = h.norm();
  const double asym = (h - h.adjoint()).norm();
  if (asym > tol * std::max(scale, 1e-300) && asym > 0.0) {
    throw std::invalid_argument("hermitian_max_eig: matrix is not Hermitian");
  }
  EigenPair out;
  if (scale == 0.0) {
    out.value = 0.0;
    out.vector = CVec::Zero(h.rows());
    out.vector(0) = 1.0;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMat> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_max_eig: eigensolver did not converge");
  }
  const Eigen::Index last = h.rows() - 1;
  out.value = solver.eigenvalues()(last);
  out.vector = solver.eigenvectors().col(last);
  Eigen::Index arg = 0;
  out.vector.cwiseAbs().maxCoeff(&arg);
  const cplx pivot = out.vector(arg);
  out.vector *= std::conj(pivot) / std::abs(pivot);
  out.vector.normalize();
  return out;
}

/// Orthonormal basis of ker(A), with rank decided by singular values relative
/// to the largest one.
inline std::vector<RVec> real_nullspace_basis(const RMat& a,
                                              double tol = kDefaultTol) {
  const Eigen::Index cols = a.cols();
  std::vector<RVec> basis;
  if (cols == 0) return basis;
  // Pad to a square matrix so the full right-singular basis is available.
  RMat padded = RMat::Zero(std::max(a.rows(), cols), cols);
  padded.topRows(a.rows()) = a;
  Eigen::JacobiSVD<RMat> svd(padded, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (smax > 0.0 && s(i) > tol * smax) ++rank;
  }
  for (Eigen::Index j = rank; j < cols; ++j) {
    basis.emplace_back(svd.matrixV().col(j));
  }
  return basis;
}

/// Kernel extraction for the tiny homogeneous systems in the solver hot loop.
///
/// Householder QR of A^T with column pivoting (pivoting over the rows of A);
/// the trailing columns of Q span ker(A). Storage is fixed-capacity so no
/// allocation happens per call. Rank is cut where the pivot norm falls below
/// tol times the first pivot norm.
template <int MaxDim>
class SmallNullspace {
 public:
  static constexpr int kMaxDim = MaxDim;

  /// `a` is row-major rows x cols. Returns the kernel dimension; basis vector
  /// k is written to basis(k).
  int solve(std::span<const double> a, int rows, int cols, double tol) {
    if (cols > MaxDim || rows > MaxDim || rows < 0 || cols <= 0) {
      throw std::invalid_argument("SmallNullspace: dimensions out of range");
    }
    cols_ = cols;
    // work_ holds A^T column-major: column k is row k of A.
    for (int k = 0; k < rows; ++k) {
      for (int i = 0; i < cols; ++i) at(i, k) = a[k * cols + i];
    }
    std::array<double, MaxDim> norms{};
    for (int k = 0; k < rows; ++k) {
      double s = 0.0;
      for (int i = 0; i < cols; ++i) s += at(i, k) * at(i, k);
      norms[k] = s;
    }
    rank_ = 0;
    double first = -1.0;
    const int steps = std::min(rows, cols);
    for (int k = 0; k < steps; ++k) {
      int piv = k;
      for (int j = k + 1; j < rows; ++j) {
        if (norms[j] > norms[piv]) piv = j;
      }
      if (piv != k) {
        for (int i = 0; i < cols; ++i) std::swap(at(i, k), at(i, piv));
        std::swap(norms[k], norms[piv]);
      }
      double sub = 0.0;
      for (int i = k; i < cols; ++i) sub += at(i, k) * at(i, k);
      const double nrm = std::sqrt(sub);
      if (first < 0.0) first = nrm;
      if (nrm <= tol * first || nrm == 0.0) break;
      // Reflector v = x - alpha e_k, stored in hv_ column k.
      const double alpha = at(k, k) > 0.0 ? -nrm : nrm;
      double vnorm2 = 0.0;
      for (int i = 0; i < cols; ++i) {
        const double vi = i < k ? 0.0 : (i == k ? at(k, k) - alpha : at(i, k));
        hv(i, k) = vi;
        vnorm2 += vi * vi;
      }
      beta_[k] = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;
      for (int j = k + 1; j < rows; ++j) {
        double dot = 0.0;
        for (int i = k; i < cols; ++i) dot += hv(i, k) * at(i, j);
        dot *= beta_[k];
        for (int i = k; i < cols; ++i) at(i, j) -= dot * hv(i, k);
        norms[j] = 0.0;
        for (int i = k + 1; i < cols; ++i) norms[j] += at(i, j) * at(i, j);
      }
      ++rank_;
    }
    // Kernel vectors: Q e_j for j = rank..cols-1, with Q = H_0 ... H_{r-1}.
    const int dim = cols - rank_;
    for (int b = 0; b < dim; ++b) {
      double* x = basis_.data() + b * MaxDim;
      for (int i = 0; i < cols; ++i) x[i] = 0.0;
      x[rank_ + b] = 1.0;
      for (int k = rank_ - 1; k >= 0; --k) {
        double dot = 0.0;
        for (int i = k; i < cols; ++i) dot += hv(i, k) * x[i];
        dot *= beta_[k];
        for (int i = k; i < cols; ++i) x[i] -= dot * hv(i, k);
      }
    }
    return dim;
  }

  int rank() const { return rank_; }
  std::span<const double> basis(int k) const {
    return {basis_.data() + k * MaxDim, static_cast<std::size_t>(cols_)};
  }

 private:
  double& at(int i, int k) { return work_[k * MaxDim + i]; }
  double& hv(int i, int k) { return refl_[k * MaxDim + i]; }

  std::array<double, MaxDim * MaxDim> work_{};
  std::array<double, MaxDim * MaxDim> refl_{};
  std::array<double, MaxDim * MaxDim> basis_{};
  std::array<double, MaxDim> beta_{};
  int rank_ = 0;
  int cols_ = 0;
};

}  // namespace rispat

#endif  // RISPAT_NUMERICS_HPP_
