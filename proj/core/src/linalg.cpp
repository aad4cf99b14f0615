#include "lrtc/linalg.hpp"

#include <cmath>
#include <string>

namespace lrtc {

Matrix SvdFactors::reconstruct() const {
  return u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
}

SvdFactors svd(const Matrix& m) {
  if (!m.allFinite()) throw Error("svd: matrix has non-finite entries");
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw Error("svd: decomposition did not converge");
  return SvdFactors{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

SvdFactors shrink(SvdFactors f, double tau) {
  f.sigma = (f.sigma.array() - tau).cwiseMax(0.0).matrix();
  return f;
}

SvtResult svt(const Matrix& m, double tau) {
  if (!(tau >= 0.0)) throw Error("svt: threshold must be nonnegative, got " + std::to_string(tau));
  SvdFactors f = svd(m);
  if (tau == 0.0) return SvtResult{m, std::move(f)};

  Eigen::Index keep = 0;
  while (keep < f.sigma.size() && f.sigma(keep) > tau) ++keep;
  Matrix value;
  if (keep == 0) {
    value = Matrix::Zero(m.rows(), m.cols());
  } else {
    const Eigen::VectorXd shrunk = f.sigma.head(keep).array() - tau;
    value = f.u.leftCols(keep) * shrunk.cast<Complex>().asDiagonal() * f.v.leftCols(keep).adjoint();
  }
  return SvtResult{std::move(value), std::move(f)};
}

double nuclear_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Matrix>(m).singularValues().sum();
}

Complex soft_threshold(Complex z, double lambda) {
  const double mag = std::abs(z);
  if (mag <= lambda || mag == 0.0) return Complex{};
  return z * ((mag - lambda) / mag);
}

DenseTensor soft_threshold(const DenseTensor& t, double lambda) {
  if (!(lambda >= 0.0)) throw Error("soft_threshold: lambda must be nonnegative");
  DenseTensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = soft_threshold(t[i], lambda);
  return out;
}

LeveragePair leverage_scores(const SvdFactors& f, double rank_tol) {
  if (!(rank_tol > 0.0 && rank_tol < 1.0))
    throw Error("leverage_scores: rank_tol must lie in (0, 1), got " + std::to_string(rank_tol));
  LeveragePair out;
  out.left = Eigen::VectorXd::Zero(f.rows());
  out.right = Eigen::VectorXd::Zero(f.cols());
  if (f.sigma.size() == 0 || f.sigma(0) <= 0.0) return out;

  const double cutoff = rank_tol * f.sigma(0);
  Eigen::Index r = 0;
  while (r < f.sigma.size() && f.sigma(r) > cutoff) ++r;
  out.rank_used = r;

  const double dr = static_cast<double>(r);
  out.left = f.u.leftCols(r).rowwise().squaredNorm() * (static_cast<double>(f.rows()) / dr);
  out.right = f.v.leftCols(r).rowwise().squaredNorm() * (static_cast<double>(f.cols()) / dr);
  return out;
}

}  // namespace lrtc
