#pragma once

// Dense symmetric linear algebra on the SPD cone.
//
// Every matrix function (log, exp, real power) is evaluated through a single
// symmetric eigendecomposition S = O diag(mu) O^T followed by recomposition
// O diag(f(mu)) O^T. No Pade or scaling-and-squaring paths exist, so log and
// exp are mutually consistent to working precision.

#include <cstdint>

#include <Eigen/Dense>

namespace spdmix {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative asymmetry ||A - A^T||_F / ||A||_F accepted (and removed) by the
/// SymmetricMatrix constructor.
inline constexpr double kSymmetryTolerance = 1e-10;

/// Condition number above which an SpdMatrix is flagged as ill-conditioned.
/// Flagged matrices are still accepted.
inline constexpr double kConditionFlagThreshold = 1e6;

/// Largest |eigenvalue| passed to std::exp before double overflow.
inline constexpr double kMaxExpArgument = 700.0;

/// Square, finite, exactly symmetric matrix.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Validates finiteness and near-symmetry, then stores (A + A^T) / 2.
  /// Throws DimensionError for non-square input, LinalgError for non-finite
  /// entries or asymmetry beyond kSymmetryTolerance relative Frobenius.
  static SymmetricMatrix from(const Matrix& a);

  static SymmetricMatrix identity(Index n);
  static SymmetricMatrix zero(Index n);
  static SymmetricMatrix diagonal(const Vector& d);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index p, Index q) const { return m_(p, q); }
  double frobenius() const { return m_.norm(); }

 private:
  friend class SpdMatrix;
  friend SymmetricMatrix symmetrize_unchecked(Matrix a);

  explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

/// Mirrors (A + A^T) / 2 without tolerance checks. For results of internal
/// recompositions whose asymmetry is pure rounding.
SymmetricMatrix symmetrize_unchecked(Matrix a);

/// Eigen pair of a symmetric matrix: orthogonal basis and ascending spectrum.
struct EigenDecomposition {
  Matrix orthogonal;
  Vector eigenvalues;

  /// O diag(values) O^T, mirrored to exact symmetry.
  SymmetricMatrix recompose(const Vector& values) const;
  SymmetricMatrix recompose() const { return recompose(eigenvalues); }
};

/// Symmetric matrix whose spectrum was checked to be strictly positive.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  /// Strict validation through one eigendecomposition; throws LinalgError
  /// naming the smallest eigenvalue when it is not > 0.
  static SpdMatrix from(const SymmetricMatrix& s);
  static SpdMatrix from(const Matrix& a) { return from(SymmetricMatrix::from(a)); }

  /// O diag(values) O^T with a known, strictly positive spectrum. Skips the
  /// validating decomposition; throws LinalgError if any value is <= 0.
  static SpdMatrix from_spectrum(const Matrix& orthogonal, const Vector& values);

  static SpdMatrix identity(Index n);
  static SpdMatrix diagonal(const Vector& d);

  Index dim() const noexcept { return s_.dim(); }
  const SymmetricMatrix& symmetric() const noexcept { return s_; }
  const Matrix& matrix() const noexcept { return s_.matrix(); }
  double operator()(Index p, Index q) const { return s_(p, q); }
  double frobenius() const { return s_.frobenius(); }

  double min_eigenvalue() const noexcept { return min_eig_; }
  double max_eigenvalue() const noexcept { return max_eig_; }
  double condition_number() const noexcept { return max_eig_ / min_eig_; }
  bool ill_conditioned() const noexcept {
    return condition_number() > kConditionFlagThreshold;
  }

 private:
  SpdMatrix(SymmetricMatrix s, double min_eig, double max_eig)
      : s_(std::move(s)), min_eig_(min_eig), max_eig_(max_eig) {}

  SymmetricMatrix s_;
  double min_eig_ = 1.0;
  double max_eig_ = 1.0;
};

/// Lower-triangular L with L L^T = S and positive diagonal.
struct CholeskyFactor {
  Matrix lower;
};

/// Symmetric eigendecomposition (Householder tridiagonalization + implicit QR).
/// Deterministic for identical input bits. Increments the calling thread's
/// eigendecomposition counter.
EigenDecomposition eig_sym(const SymmetricMatrix& s);

/// Number of eig_sym calls made by the current thread so far.
std::uint64_t eig_call_count() noexcept;

/// Principal matrix logarithm. Never clamps: a non-positive eigenvalue is an
/// error asking the caller to clamp first.
SymmetricMatrix matrix_log(const SpdMatrix& s);

/// Matrix exponential of a symmetric matrix; requires |mu| <= 700.
SpdMatrix matrix_exp(const SymmetricMatrix& h);

/// S^p for real p.
SpdMatrix matrix_power(const SpdMatrix& s, double p);

CholeskyFactor cholesky(const SpdMatrix& s);

/// Sum of log-eigenvalues.
double log_det(const SpdMatrix& s);

/// exp(log_det(s)); overflows to +inf for large n by construction.
double det(const SpdMatrix& s);

/// O diag(values) O^T as a raw matrix (no symmetrization).
Matrix recompose(const Matrix& orthogonal, const Vector& values);

}  // namespace spdmix
