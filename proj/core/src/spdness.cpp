#include "spdmix/spdness.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "spdmix/error.hpp"

namespace spdmix {

SeriesMatrix::SeriesMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw DimensionError("series must have at least one variable and one step");
  }
  if (!values_.allFinite()) throw LinalgError("series has non-finite values");
}

SymmetricMatrix covariance(const SeriesMatrix& x) {
  const Index t = x.n_steps();
  if (t < 2) {
    std::ostringstream os;
    os << "covariance needs at least 2 time steps, got " << t;
    throw DomainError(os.str());
  }
  const Vector mean = x.values().rowwise().mean();
  const Matrix centered = x.values().colwise() - mean;
  for (Index r = 0; r < x.n_vars(); ++r) {
    if ((x.values().row(r).array() == x.values()(r, 0)).all()) {
      std::ostringstream os;
      os << "variable " << r << " is constant across time";
      throw DomainError(os.str());
    }
  }
  return symmetrize_unchecked(centered * centered.transpose() / static_cast<double>(t));
}

SymmetricMatrix correlation(const SeriesMatrix& x) {
  const SymmetricMatrix cov = covariance(x);
  const Index n = cov.dim();
  const Vector inv_sd = cov.matrix().diagonal().cwiseSqrt().cwiseInverse();
  Matrix cor = inv_sd.asDiagonal() * cov.matrix() * inv_sd.asDiagonal();
  for (Index p = 0; p < n; ++p) {
    for (Index q = p + 1; q < n; ++q) {
      const double v = std::clamp(0.5 * (cor(p, q) + cor(q, p)), -1.0, 1.0);
      cor(p, q) = v;
      cor(q, p) = v;
    }
    cor(p, p) = 1.0;
  }
  return SymmetricMatrix::from(cor);
}

ClampResult clamp_to_spd_counted(const SymmetricMatrix& s, double floor) {
  if (!(floor > 0.0)) throw DomainError("clamp floor must be positive");
  const EigenDecomposition eig = eig_sym(s);
  Vector values = eig.eigenvalues;
  // Eigenvalues within rounding of zero are zero.
  const double zero_level = static_cast<double>(values.size()) *
                            std::numeric_limits<double>::epsilon() *
                            values.cwiseAbs().maxCoeff();
  Index clamped = 0;
  for (Index k = 0; k < values.size(); ++k) {
    if (values(k) <= zero_level) {
      values(k) = floor;
      ++clamped;
    }
  }
  if (clamped == 0) {
    return {SpdMatrix::from(s), 0};
  }
  return {SpdMatrix::from_spectrum(eig.orthogonal, values), clamped};
}

SpdMatrix clamp_to_spd(const SymmetricMatrix& s, double floor) {
  return clamp_to_spd_counted(s, floor).matrix;
}

SpdnessReport spdness_report(const SymmetricMatrix& s, std::optional<Index> t) {
  SpdnessReport r;
  r.n = s.dim();
  r.t = t;
  r.eigenvalues = eig_sym(s).eigenvalues;
  r.positive_count = (r.eigenvalues.array() > kSpdnessThreshold).count();
  r.spdness_pct = r.n > 0 ? 100.0 * static_cast<double>(r.positive_count) /
                                static_cast<double>(r.n)
                          : 0.0;
  r.rank_bound = t ? std::min(r.n, std::max<Index>(*t - 1, 0)) : r.n;
  r.is_spd = r.positive_count == r.n;
  if (r.positive_count > r.rank_bound) {
    std::ostringstream os;
    os << r.positive_count << " eigenvalues above " << kSpdnessThreshold
       << " exceed the rank bound min(n, t-1) = " << r.rank_bound;
    throw InvariantViolation(os.str());
  }
  return r;
}

SeriesMatrix downsample_by_averaging(const SeriesMatrix& x, Index target_t) {
  if (target_t <= 0 || x.n_steps() % target_t != 0) {
    std::ostringstream os;
    os << "target length " << target_t << " does not divide series length " << x.n_steps();
    throw DomainError(os.str());
  }
  const Index block = x.n_steps() / target_t;
  Matrix out(x.n_vars(), target_t);
  for (Index k = 0; k < target_t; ++k) {
    out.col(k) = x.values().middleCols(k * block, block).rowwise().mean();
  }
  return SeriesMatrix(std::move(out));
}

SeriesMatrix truncate(const SeriesMatrix& x, Index target_t) {
  if (target_t <= 0 || target_t > x.n_steps()) {
    std::ostringstream os;
    os << "cannot truncate series of length " << x.n_steps() << " to " << target_t;
    throw DomainError(os.str());
  }
  return SeriesMatrix(x.values().leftCols(target_t));
}

}  // namespace spdmix
