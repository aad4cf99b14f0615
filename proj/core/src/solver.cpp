#include "lrtc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lrtc/fft.hpp"

namespace lrtc {

ProblemSpec ProblemSpec::with_defaults(ObservationSet omega, SolverKind kind) {
  ProblemSpec p;
  p.shape = omega.shape();
  const std::size_t n = p.shape.modes();
  p.alpha.assign(n, 1.0 / static_cast<double>(n));
  p.lambda_i.assign(n, 1.0);
  p.omega = std::move(omega);
  p.kind = kind;
  return p;
}

void ProblemSpec::validate() const {
  const std::size_t n = shape.modes();
  if (n < 2) throw Error("problem shape needs at least 2 modes");
  require_same_shape(shape, omega.shape(), "problem observations");
  if (alpha.size() != n || lambda_i.size() != n)
    throw Error("problem weights need one entry per mode (" + std::to_string(n) + ")");
  double sum = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw Error("alpha weights must be positive");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("alpha weights must sum to 1, got " + std::to_string(sum));
  for (double l : lambda_i)
    if (!(l > 0.0)) throw Error("lambda_i weights must be positive");
  if (!(rho > 0.0)) throw Error("rho must be positive");
  if (!(lambda_s >= 0.0)) throw Error("sparsity weight must be nonnegative");
  if (max_sweeps < 1) throw Error("max_sweeps must be at least 1");
  if (!(tol > 0.0)) throw Error("tol must be positive");
  if (!transform) throw Error("sparsifying transform is null");
}

SolverState init_state(const ProblemSpec& p) {
  p.validate();
  SolverState st;
  st.m = scatter_observed(DenseTensor::zeros(p.shape), p.omega);
  st.s = DenseTensor::zeros(p.shape);
  const std::size_t n = p.modes();
  st.l.reserve(n);
  for (std::size_t i = 0; i < n; ++i) st.l.push_back(unfold(st.m, i));
  st.y.assign(n, DenseTensor::zeros(p.shape));
  st.mode_svd.assign(n, std::nullopt);
  return st;
}

SolverState warm_state(SolverState prev, const ProblemSpec& p) {
  p.validate();
  require_same_shape(prev.m.shape(), p.shape, "warm start");
  if (prev.l.size() != p.modes() || prev.y.size() != p.modes()) throw Error("warm start: mode count mismatch");
  prev.m = scatter_observed(prev.m, p.omega);
  prev.sweep = 0;
  prev.objective_history.clear();
  prev.residual_history.clear();
  return prev;
}

namespace {

DenseTensor weighted_fold_sum(const SolverState& st, const ProblemSpec& p, std::span<const double> w) {
  DenseTensor acc = DenseTensor::zeros(p.shape);
  for (std::size_t i = 0; i < st.l.size(); ++i) acc += fold(st.l[i], i, p.shape) * w[i];
  return acc;
}

/// Writes `hat` into M off Omega; Omega keeps the observed values.
void assign_off_omega(SolverState& st, DenseTensor hat, const ProblemSpec& p) {
  st.m = scatter_observed(hat, p.omega);
}

void check_finite(const SolverState& st) {
  bool ok = st.m.all_finite() && st.s.all_finite();
  for (const auto& l : st.l) ok = ok && l.allFinite();
  for (const auto& y : st.y) ok = ok && y.all_finite();
  if (!ok) throw NonFiniteError("non-finite iterate at sweep " + std::to_string(st.sweep));
}

void update_l(SolverState& st, std::size_t i, const Matrix& target, double tau) {
  auto res = svt(target, tau);
  st.l[i] = std::move(res.value);
  st.mode_svd[i] = shrink(std::move(res.input_factors), tau);
}

}  // namespace

namespace blocks {

DenseTensor sparse_prox(const DenseTensor& target, double threshold, const SparsifyingTransform& transform) {
  const DenseTensor coeffs = transform.forward(fft_inverse(target));
  return fft_forward(transform.inverse(soft_threshold(coeffs, threshold)));
}

void bcd_update_l(SolverState& st, const ProblemSpec& p) {
  const DenseTensor diff = st.m - st.s;
  for (std::size_t i = 0; i < p.modes(); ++i) update_l(st, i, unfold(diff, i), p.alpha[i] / p.lambda_i[i]);
}

void bcd_update_s(SolverState& st, const ProblemSpec& p) {
  if (p.lambda_s == 0.0) {
    st.s = DenseTensor::zeros(p.shape);
    return;
  }
  const double lsum = std::accumulate(p.lambda_i.begin(), p.lambda_i.end(), 0.0);
  std::vector<double> w(p.lambda_i);
  for (auto& x : w) x /= lsum;
  st.s = sparse_prox(st.m - weighted_fold_sum(st, p, w), p.lambda_s / lsum, *p.transform);
}

void bcd_update_m(SolverState& st, const ProblemSpec& p) {
  const double lsum = std::accumulate(p.lambda_i.begin(), p.lambda_i.end(), 0.0);
  std::vector<double> w(p.lambda_i);
  for (auto& x : w) x /= lsum;
  assign_off_omega(st, weighted_fold_sum(st, p, w) + st.s, p);
}

void admm_update_l(SolverState& st, const ProblemSpec& p) {
  const DenseTensor diff = st.m - st.s;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    const DenseTensor target = diff + st.y[i] * (1.0 / p.rho);
    update_l(st, i, unfold(target, i), p.alpha[i] / p.rho);
  }
}

void admm_update_s(SolverState& st, const ProblemSpec& p) {
  if (p.lambda_s == 0.0) {
    st.s = DenseTensor::zeros(p.shape);
    return;
  }
  const double n = static_cast<double>(p.modes());
  DenseTensor target = st.m;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    target -= fold(st.l[i], i, p.shape) * (1.0 / n);
    target += st.y[i] * (1.0 / (n * p.rho));
  }
  st.s = sparse_prox(target, p.lambda_s / (n * p.rho), *p.transform);
}

void admm_update_m(SolverState& st, const ProblemSpec& p) {
  const double n = static_cast<double>(p.modes());
  DenseTensor hat = DenseTensor::zeros(p.shape);
  for (std::size_t i = 0; i < p.modes(); ++i) {
    hat += fold(st.l[i], i, p.shape);
    hat += st.s;
    hat -= st.y[i] * (1.0 / p.rho);
  }
  hat *= 1.0 / n;
  assign_off_omega(st, std::move(hat), p);
}

void admm_update_y(SolverState& st, const ProblemSpec& p) {
  for (std::size_t i = 0; i < p.modes(); ++i) {
    DenseTensor r = fold(st.l[i], i, p.shape) + st.s - st.m;
    st.y[i] -= r * p.rho;
  }
}

}  // namespace blocks

SolverState bcd_sweep(SolverState state, const ProblemSpec& p) {
  if (p.kind != SolverKind::Bcd) throw Error("bcd_sweep called on a non-BCD problem");
  blocks::bcd_update_l(state, p);
  blocks::bcd_update_s(state, p);
  blocks::bcd_update_m(state, p);
  ++state.sweep;
  check_finite(state);
  state.objective_history.push_back(objective(state, p));
  return state;
}

SolverState admm_sweep(SolverState state, const ProblemSpec& p) {
  if (p.kind != SolverKind::Admm) throw Error("admm_sweep called on a non-ADMM problem");
  blocks::admm_update_l(state, p);
  blocks::admm_update_s(state, p);
  blocks::admm_update_m(state, p);
  blocks::admm_update_y(state, p);
  ++state.sweep;
  check_finite(state);
  state.objective_history.push_back(objective(state, p));
  state.residual_history.push_back(primal_residual(state));
  return state;
}

double objective(const SolverState& st, const ProblemSpec& p) {
  const std::size_t n = p.modes();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double nuc = st.mode_svd.size() == n && st.mode_svd[i] ? st.mode_svd[i]->sigma.sum()
                                                                  : nuclear_norm(st.l[i]);
    const DenseTensor r = fold(st.l[i], i, p.shape) + st.s - st.m;
    if (p.kind == SolverKind::Bcd) {
      total += p.alpha[i] * nuc + 0.5 * p.lambda_i[i] * squared_norm(r);
    } else {
      // <M - Fold_i(L_i) - S, Y_i> = -<r, Y_i>
      total += p.alpha[i] * nuc + 0.5 * p.rho * squared_norm(r) - inner_real(r, st.y[i]);
    }
  }
  if (p.lambda_s > 0.0) {
    const DenseTensor coeffs = p.transform->forward(fft_inverse(st.s));
    double l1 = 0.0;
    for (const auto& z : coeffs.data()) l1 += std::abs(z);
    total += p.lambda_s * l1;
  }
  return total;
}

double primal_residual(const SolverState& st) {
  double worst = 0.0;
  const Shape& shape = st.m.shape();
  for (std::size_t i = 0; i < st.l.size(); ++i)
    worst = std::max(worst, frobenius_norm(fold(st.l[i], i, shape) + st.s - st.m));
  return worst;
}

SolveResult solve(const ProblemSpec& p) { return solve(p, init_state(p)); }

SolveResult solve(const ProblemSpec& p, SolverState start) {
  p.validate();
  SolveResult out;
  out.state = std::move(start);
  for (int j = 0; j < p.max_sweeps; ++j) {
    const DenseTensor previous = out.state.m;
    out.state = p.kind == SolverKind::Bcd ? bcd_sweep(std::move(out.state), p)
                                          : admm_sweep(std::move(out.state), p);
    const double change = frobenius_norm(out.state.m - previous) / std::max(frobenius_norm(previous), p.eps);
    if (change < p.tol) {
      out.converged = true;
      break;
    }
  }
  out.modes = mode_approximations(out.state, p);
  return out;
}

std::vector<double> committee_weights(const ProblemSpec& p) {
  const std::size_t n = p.modes();
  if (p.kind == SolverKind::Admm) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  const double lsum = std::accumulate(p.lambda_i.begin(), p.lambda_i.end(), 0.0);
  std::vector<double> w(p.lambda_i);
  for (auto& x : w) x /= lsum;
  return w;
}

ModeApproximations mode_approximations(const SolverState& st, const ProblemSpec& p) {
  if (st.l.size() != p.modes()) throw Error("mode_approximations: state has wrong number of mode matrices");
  ModeApproximations ma;
  ma.weights = committee_weights(p);
  ma.approx.reserve(st.l.size());
  for (std::size_t i = 0; i < st.l.size(); ++i)
    ma.approx.push_back(scatter_observed(fold(st.l[i], i, p.shape), p.omega));
  return ma;
}

}  // namespace lrtc
