#include "spdmix/linalg.hpp"

#include <cmath>
#include <sstream>

#include "spdmix/error.hpp"

namespace spdmix {
namespace {

thread_local std::uint64_t tls_eig_calls = 0;

void require_finite(const Matrix& a) {
  if (!a.allFinite()) {
    throw LinalgError("matrix has non-finite entries");
  }
}

}  // namespace

SymmetricMatrix symmetrize_unchecked(Matrix a) {
  Matrix t = a.transpose();
  a = 0.5 * (a + t);
  return SymmetricMatrix(std::move(a));
}

SymmetricMatrix SymmetricMatrix::from(const Matrix& a) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << "symmetric matrix must be square, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
  require_finite(a);
  const double norm = a.norm();
  const double asym = (a - a.transpose()).norm();
  if (asym > kSymmetryTolerance * norm) {
    std::ostringstream os;
    os << "matrix is not symmetric: ||A - A^T||_F = " << asym << " exceeds "
       << kSymmetryTolerance << " * ||A||_F = " << kSymmetryTolerance * norm;
    throw LinalgError(os.str());
  }
  return symmetrize_unchecked(a);
}

SymmetricMatrix SymmetricMatrix::identity(Index n) {
  return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::zero(Index n) {
  return SymmetricMatrix(Matrix::Zero(n, n));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
  require_finite(d);
  return SymmetricMatrix(Matrix(d.asDiagonal()));
}

Matrix recompose(const Matrix& orthogonal, const Vector& values) {
  return orthogonal * values.asDiagonal() * orthogonal.transpose();
}

SymmetricMatrix EigenDecomposition::recompose(const Vector& values) const {
  return symmetrize_unchecked(spdmix::recompose(orthogonal, values));
}

SpdMatrix SpdMatrix::from(const SymmetricMatrix& s) {
  if (s.dim() == 0) {
    throw DimensionError("SPD matrix must have positive dimension");
  }
  const EigenDecomposition eig = eig_sym(s);
  const double lo = eig.eigenvalues(0);
  const double hi = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "matrix of dimension " << s.dim()
       << " is not positive definite: smallest eigenvalue " << lo;
    throw LinalgError(os.str());
  }
  return SpdMatrix(s, lo, hi);
}

SpdMatrix SpdMatrix::from_spectrum(const Matrix& orthogonal, const Vector& values) {
  if (values.size() == 0 || orthogonal.rows() != values.size() ||
      orthogonal.cols() != values.size()) {
    throw DimensionError("spectrum and basis sizes disagree");
  }
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    std::ostringstream os;
    os << "spectrum is not strictly positive and finite: range [" << lo << ", " << hi
       << "]";
    throw LinalgError(os.str());
  }
  return SpdMatrix(symmetrize_unchecked(spdmix::recompose(orthogonal, values)), lo, hi);
}

SpdMatrix SpdMatrix::identity(Index n) {
  return SpdMatrix(SymmetricMatrix::identity(n), 1.0, 1.0);
}

SpdMatrix SpdMatrix::diagonal(const Vector& d) {
  if (d.size() == 0 || !(d.minCoeff() > 0.0) || !d.allFinite()) {
    throw LinalgError("diagonal SPD matrix needs finite, strictly positive entries");
  }
  return SpdMatrix(SymmetricMatrix::diagonal(d), d.minCoeff(), d.maxCoeff());
}

EigenDecomposition eig_sym(const SymmetricMatrix& s) {
  ++tls_eig_calls;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symmetric eigensolver did not converge (dimension " << s.dim()
       << ", Frobenius norm " << s.frobenius() << ")";
    throw LinalgError(os.str());
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

std::uint64_t eig_call_count() noexcept { return tls_eig_calls; }

SymmetricMatrix matrix_log(const SpdMatrix& s) {
  const EigenDecomposition eig = eig_sym(s.symmetric());
  if (!(eig.eigenvalues(0) > 0.0)) {
    std::ostringstream os;
    os << "matrix_log: eigenvalue " << eig.eigenvalues(0)
       << " is not positive; clamp the matrix to the SPD cone first";
    throw LinalgError(os.str());
  }
  return eig.recompose(eig.eigenvalues.array().log().matrix());
}

SpdMatrix matrix_exp(const SymmetricMatrix& h) {
  const EigenDecomposition eig = eig_sym(h);
  const double peak = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (peak > kMaxExpArgument) {
    std::ostringstream os;
    os << "matrix_exp: eigenvalue magnitude " << peak << " exceeds " << kMaxExpArgument;
    throw LinalgError(os.str());
  }
  return SpdMatrix::from_spectrum(eig.orthogonal, eig.eigenvalues.array().exp().matrix());
}

SpdMatrix matrix_power(const SpdMatrix& s, double p) {
  if (!std::isfinite(p)) {
    throw LinalgError("matrix_power: exponent must be finite");
  }
  const EigenDecomposition eig = eig_sym(s.symmetric());
  if (!(eig.eigenvalues(0) > 0.0)) {
    std::ostringstream os;
    os << "matrix_power: eigenvalue " << eig.eigenvalues(0) << " is not positive";
    throw LinalgError(os.str());
  }
  const Vector scaled = p * eig.eigenvalues.array().log().matrix();
  const double peak = scaled.cwiseAbs().maxCoeff();
  if (peak > kMaxExpArgument) {
    std::ostringstream os;
    os << "matrix_power: |p * log(mu)| = " << peak << " overflows double precision";
    throw LinalgError(os.str());
  }
  return SpdMatrix::from_spectrum(eig.orthogonal, scaled.array().exp().matrix());
}

CholeskyFactor cholesky(const SpdMatrix& s) {
  const Matrix& a = s.matrix();
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) {
      std::ostringstream os;
      os << "cholesky: pivot " << j << " is " << pivot
         << " (matrix numerically semidefinite)";
      throw LinalgError(os.str());
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
  }
  return {std::move(l)};
}

double log_det(const SpdMatrix& s) {
  const EigenDecomposition eig = eig_sym(s.symmetric());
  if (!(eig.eigenvalues(0) > 0.0)) {
    throw LinalgError("log_det: non-positive eigenvalue");
  }
  return eig.eigenvalues.array().log().sum();
}

double det(const SpdMatrix& s) { return std::exp(log_det(s)); }

}  // namespace spdmix
