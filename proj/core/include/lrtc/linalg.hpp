#pragma once

#include <utility>

#include "lrtc/tensor.hpp"

namespace lrtc {

/// Thin SVD A = U diag(sigma) V^H, r = min(m, n), sigma nonincreasing.
struct SvdFactors {
  Matrix u;
  Eigen::VectorXd sigma;
  Matrix v;

  Eigen::Index rows() const { return u.rows(); }
  Eigen::Index cols() const { return v.rows(); }
  Matrix reconstruct() const;
};

/// Left/right leverage scores of a low-rank matrix.
struct LeveragePair {
  Eigen::VectorXd left;
  Eigen::VectorXd right;
  Eigen::Index rank_used = 0;
};

inline constexpr double kDefaultRankTol = 1e-6;

SvdFactors svd(const Matrix& m);

struct SvtResult {
  Matrix value;
  SvdFactors input_factors;  // SVD of the matrix that was thresholded
};

/// Singular value thresholding: U diag(max(sigma - tau, 0)) V^H, the proximal
/// operator of tau * nuclear norm.
SvtResult svt(const Matrix& m, double tau);

/// Factors of svt(m, tau) itself: same singular vectors, shrunk sigma.
SvdFactors shrink(SvdFactors f, double tau);

double nuclear_norm(const Matrix& m);

/// Complex soft-thresholding z/|z| * max(|z| - lambda, 0), with 0 -> 0.
Complex soft_threshold(Complex z, double lambda);
DenseTensor soft_threshold(const DenseTensor& t, double lambda);

/// Leverage scores from the columns of U and V whose singular value exceeds
/// rank_tol * sigma_max. Uses row norms of U^H / V^H (complex coherence).
/// A zero matrix yields all-zero scores and rank_used = 0.
LeveragePair leverage_scores(const SvdFactors& f, double rank_tol = kDefaultRankTol);

}  // namespace lrtc
