#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lrtc/linalg.hpp"
#include "lrtc/tensor.hpp"

namespace lrtc {

/// Sparsifying transform applied in image space. Must be unitary so the
/// sparse-block update stays an exact proximal step.
class SparsifyingTransform {
public:
  virtual ~SparsifyingTransform() = default;
  virtual DenseTensor forward(const DenseTensor& image) const = 0;
  virtual DenseTensor inverse(const DenseTensor& coeffs) const = 0;
};

class IdentityTransform final : public SparsifyingTransform {
public:
  DenseTensor forward(const DenseTensor& image) const override { return image; }
  DenseTensor inverse(const DenseTensor& coeffs) const override { return coeffs; }
};

enum class SolverKind { Bcd, Admm };

/// Completion problem: observations plus solver weights.
struct ProblemSpec {
  Shape shape;
  ObservationSet omega;
  std::vector<double> alpha;     // nuclear-norm weights, positive, sum 1
  std::vector<double> lambda_i;  // BCD coupling penalties
  double rho = 1.0;              // ADMM penalty
  double lambda_s = 0.0;         // sparsity weight, 0 disables the sparse part
  std::shared_ptr<const SparsifyingTransform> transform = std::make_shared<IdentityTransform>();
  SolverKind kind = SolverKind::Admm;
  int max_sweeps = 200;
  double tol = 1e-6;
  double eps = 1e-15;

  /// Defaults for a given set of observations: alpha_i = 1/n, lambda_i = 1.
  static ProblemSpec with_defaults(ObservationSet omega, SolverKind kind = SolverKind::Admm);

  std::size_t modes() const { return shape.modes(); }
  void validate() const;
};

struct SolverState {
  DenseTensor m;               // completed k-space tensor
  DenseTensor s;               // sparse part
  std::vector<Matrix> l;       // per-mode low-rank matrices, shaped like unfold_i(m)
  std::vector<DenseTensor> y;  // ADMM duals
  int sweep = 0;
  std::vector<double> objective_history;
  std::vector<double> residual_history;  // ADMM primal residual max_i ||Fold_i(L_i) + S - M||
  /// SVD of the current L_i, valid after an L-update, empty otherwise.
  std::vector<std::optional<SvdFactors>> mode_svd;
};

/// Committee of per-mode completions with their weights.
struct ModeApproximations {
  std::vector<DenseTensor> approx;
  std::vector<double> weights;
};

SolverState init_state(const ProblemSpec& p);

/// Re-imposes the (possibly grown) observations of p on a previous state so
/// the next solve continues from it.
SolverState warm_state(SolverState prev, const ProblemSpec& p);

SolverState bcd_sweep(SolverState state, const ProblemSpec& p);
SolverState admm_sweep(SolverState state, const ProblemSpec& p);

/// Block updates that make up a sweep, exposed for descent checks.
namespace blocks {
void bcd_update_l(SolverState& st, const ProblemSpec& p);
void bcd_update_s(SolverState& st, const ProblemSpec& p);
void bcd_update_m(SolverState& st, const ProblemSpec& p);
void admm_update_l(SolverState& st, const ProblemSpec& p);
void admm_update_s(SolverState& st, const ProblemSpec& p);
void admm_update_m(SolverState& st, const ProblemSpec& p);
void admm_update_y(SolverState& st, const ProblemSpec& p);

/// Exact minimizer of lambda * ||T F^-1 S||_1 + (w/2) ||S - target||^2,
/// i.e. F T^-1 soft(T F^-1 target, lambda / w).
DenseTensor sparse_prox(const DenseTensor& target, double threshold, const SparsifyingTransform& transform);
}  // namespace blocks

/// BCD: sum a_i||L_i||_* + sum (lambda_i/2)||L_i + S_(i) - M_(i)||^2 + lambda ||T F^-1 S||_1.
/// ADMM: the augmented Lagrangian with rho/2 penalties and dual inner products.
double objective(const SolverState& state, const ProblemSpec& p);

/// max_i ||Fold_i(L_i) + S - M||_F.
double primal_residual(const SolverState& state);

struct SolveResult {
  SolverState state;
  ModeApproximations modes;
  bool converged = false;
};

SolveResult solve(const ProblemSpec& p);
/// Continues from an existing state (warm start).
SolveResult solve(const ProblemSpec& p, SolverState start);

ModeApproximations mode_approximations(const SolverState& state, const ProblemSpec& p);

/// Committee weights: 1/n for ADMM, lambda_i / sum lambda for BCD.
std::vector<double> committee_weights(const ProblemSpec& p);

}  // namespace lrtc
