#include "lrtc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace lrtc {

namespace {

void check_committee(const ModeApproximations& ma) {
  if (ma.approx.size() < 2) throw Error("committee needs at least 2 approximations");
  if (ma.weights.size() != ma.approx.size()) throw Error("committee weights do not match approximations");
  for (const auto& a : ma.approx) require_same_shape(a.shape(), ma.approx.front().shape(), "committee");
}

DenseTensor committee_mean(const ModeApproximations& ma) {
  DenseTensor mean = DenseTensor::zeros(ma.approx.front().shape());
  for (std::size_t i = 0; i < ma.approx.size(); ++i) mean += ma.approx[i] * ma.weights[i];
  return mean;
}

UtilityField normalized(const UtilityField& u) {
  UtilityField out = u;
  const double peak = u.max();
  if (peak > 0.0) out.field *= 1.0 / peak;
  return out;
}

}  // namespace

double UtilityField::max() const {
  double peak = 0.0;
  for (const auto& z : field.data()) peak = std::max(peak, z.real());
  return peak;
}

UtilityField variance_utility(const ModeApproximations& ma) {
  check_committee(ma);
  const DenseTensor mean = committee_mean(ma);
  UtilityField u{DenseTensor::zeros(mean.shape()), UtilityMethod::Var};
  for (std::size_t e = 0; e < mean.size(); ++e) {
    const Complex first = ma.approx.front()[e];
    bool agree = true;
    for (const auto& a : ma.approx) agree = agree && a[e] == first;
    if (agree) continue;
    double v = 0.0;
    for (std::size_t i = 0; i < ma.approx.size(); ++i) v += ma.weights[i] * std::norm(ma.approx[i][e] - mean[e]);
    u.field[e] = v;
  }
  return u;
}

UtilityField leverage_utility(const SolverState& state, std::span<const double> weights, double rank_tol) {
  const std::size_t n = state.l.size();
  if (weights.size() != n) throw Error("leverage weights do not match mode count");
  if (state.mode_svd.size() != n) throw Error("leverage_utility: mode SVD cache missing");
  const Shape& shape = state.m.shape();
  UtilityField u{DenseTensor::zeros(shape), UtilityMethod::Lev};

  for (std::size_t k = 0; k < n; ++k) {
    if (weights[k] == 0.0) continue;
    if (!state.mode_svd[k]) throw Error("leverage_utility: no cached SVD for mode " + std::to_string(k));
    const LeveragePair lev = leverage_scores(*state.mode_svd[k], rank_tol);
    if (lev.rank_used == 0) continue;
    // l(i) r(j) at every (row, col) of the mode-k unfolding, folded back.
    const Matrix outer = (lev.left * lev.right.transpose()).cast<Complex>();
    u.field += fold(outer, k, shape) * weights[k];
  }
  return u;
}

UtilityField leverage_utility(const SolverState& state, const ProblemSpec& p, double rank_tol) {
  const auto w = committee_weights(p);
  return leverage_utility(state, w, rank_tol);
}

UtilityField combine_utilities(const UtilityField& var, const UtilityField& lev, Combine mode) {
  require_same_shape(var.field.shape(), lev.field.shape(), "combine_utilities");
  const UtilityField a = normalized(var);
  const UtilityField b = normalized(lev);
  UtilityField out{DenseTensor::zeros(var.field.shape()),
                   mode == Combine::Sum ? UtilityMethod::VarPlusLev : UtilityMethod::VarTimesLev};
  for (std::size_t e = 0; e < out.field.size(); ++e)
    out.field[e] = mode == Combine::Sum ? a[e] + b[e] : a[e] * b[e];
  return out;
}

double pattern_utility(const UtilityField& u, const Pattern& pattern) {
  double sum = 0.0;
  for (auto off : pattern.elements) {
    if (off >= u.field.size()) throw Error("pattern element out of range: offset " + std::to_string(off));
    sum += u[off];
  }
  return sum;
}

std::vector<Pattern> select_batch(const UtilityField& u, std::span<const Pattern> patterns, std::size_t count) {
  if (count > patterns.size())
    throw Error("batch of " + std::to_string(count) + " exceeds " + std::to_string(patterns.size()) +
                " candidate patterns");
  struct Scored {
    double score;
    std::size_t id;
    std::size_t pos;
  };
  std::vector<Scored> scored;
  scored.reserve(patterns.size());
  for (std::size_t i = 0; i < patterns.size(); ++i)
    scored.push_back({pattern_utility(u, patterns[i]), patterns[i].id, i});
  auto better = [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(count), scored.end(), better);
  std::vector<Pattern> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(patterns[scored[i].pos]);
  return out;
}

std::vector<Pattern> random_baseline(std::span<const Pattern> patterns, std::size_t count, std::uint64_t seed) {
  if (count > patterns.size())
    throw Error("batch of " + std::to_string(count) + " exceeds " + std::to_string(patterns.size()) +
                " candidate patterns");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(patterns.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates with rejection-sampled bounded draws, so the result
  // does not depend on the standard library's distribution implementation.
  auto bounded = [&rng](std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
  };
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + bounded(patterns.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<Pattern> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(patterns[order[i]]);
  return out;
}

std::vector<Pattern> coherence_baseline(const SolverState& state, std::span<const Pattern> patterns,
                                        std::size_t count, double rank_tol) {
  std::vector<double> w(state.l.size(), 0.0);
  if (!w.empty()) w[0] = 1.0;
  return select_batch(leverage_utility(state, w, rank_tol), patterns, count);
}

LemmaReport lemma_decomposition(const ModeApproximations& ma, const DenseTensor& truth) {
  check_committee(ma);
  require_same_shape(truth.shape(), ma.approx.front().shape(), "lemma_decomposition");
  const DenseTensor mean = committee_mean(ma);
  LemmaReport rep;
  const UtilityField v = variance_utility(ma);
  rep.mu = 0.0;
  for (std::size_t e = 0; e < v.field.size(); ++e) rep.mu += v[e];
  double weighted = 0.0;
  for (std::size_t i = 0; i < ma.approx.size(); ++i) {
    rep.mu_i.push_back(squared_norm(truth - ma.approx[i]));
    weighted += ma.weights[i] * rep.mu_i.back();
  }
  rep.mu_tot = squared_norm(truth - mean);
  rep.residual = std::abs(rep.mu_tot - (weighted - rep.mu));
  return rep;
}

std::string_view to_string(UtilityMethod m) {
  switch (m) {
    case UtilityMethod::Var: return "Var";
    case UtilityMethod::Lev: return "Lev";
    case UtilityMethod::VarPlusLev: return "VarPlusLev";
    case UtilityMethod::VarTimesLev: return "VarTimesLev";
  }
  return "?";
}

}  // namespace lrtc
