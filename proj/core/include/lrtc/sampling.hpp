#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lrtc/solver.hpp"
#include "lrtc/tensor.hpp"

namespace lrtc {

/// A group of elements acquired together: a single element or a fiber.
struct Pattern {
  std::size_t id = 0;
  std::vector<std::size_t> elements;  // row-major offsets
  /// Mode along which the fiber runs; empty for a single-element pattern.
  std::optional<std::size_t> fiber_mode;
};

enum class UtilityMethod { Var, Lev, VarPlusLev, VarTimesLev };

/// Nonnegative real score per element (stored in the real part).
struct UtilityField {
  DenseTensor field;
  UtilityMethod method = UtilityMethod::Var;

  double operator[](std::size_t offset) const { return field[offset].real(); }
  double max() const;
};

enum class Combine { Sum, Product };

struct LemmaReport {
  double mu_tot = 0.0;
  std::vector<double> mu_i;
  double mu = 0.0;
  double residual = 0.0;
};

/// Committee disagreement V = sum w_i |M_i - E[M]|^2 with E[M] = sum w_i M_i.
/// Elements where every committee member agrees exactly score 0.
UtilityField variance_utility(const ModeApproximations& ma);

/// sum_k w_k Fold_k(l_k r_k^T) from the cached SVD of each L_k.
UtilityField leverage_utility(const SolverState& state, std::span<const double> weights,
                              double rank_tol = kDefaultRankTol);
UtilityField leverage_utility(const SolverState& state, const ProblemSpec& p,
                              double rank_tol = kDefaultRankTol);

/// Max-normalizes both fields, then adds or multiplies them elementwise.
UtilityField combine_utilities(const UtilityField& var, const UtilityField& lev, Combine mode);

double pattern_utility(const UtilityField& u, const Pattern& pattern);

/// The `count` patterns with the largest summed utility, ties to the smaller id.
std::vector<Pattern> select_batch(const UtilityField& u, std::span<const Pattern> patterns, std::size_t count);

/// Uniform draw without replacement, reproducible from seed.
std::vector<Pattern> random_baseline(std::span<const Pattern> patterns, std::size_t count, std::uint64_t seed);

/// Selection driven by the mode-1 leverage field alone.
std::vector<Pattern> coherence_baseline(const SolverState& state, std::span<const Pattern> patterns,
                                        std::size_t count, double rank_tol = kDefaultRankTol);

/// Error decomposition mu_tot = sum w_i mu_i - mu against a reference tensor.
LemmaReport lemma_decomposition(const ModeApproximations& ma, const DenseTensor& truth);

std::string_view to_string(UtilityMethod m);

}  // namespace lrtc
