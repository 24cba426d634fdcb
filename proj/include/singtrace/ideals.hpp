#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "singtrace/sequence.hpp"

namespace singtrace {

/// Horizon of closed-form psi functions (effectively unbounded).
inline constexpr Index kUnboundedHorizon = Index{1} << 62;

/// A concave increasing psi, known only at nonnegative integers:
/// psi(0) = 0 and psi(n + 1) - psi(n) = x(n) for a nonincreasing, strictly
/// positive increment sequence x.
class PsiFunction {
 public:
  using Evaluator = std::function<double(Index)>;

  PsiFunction() = default;

  /// psi from an explicit value rule and its increment rule. The two must
  /// agree; increments are validated as nonincreasing and positive.
  static PsiFunction closed_form(std::string name, Index horizon,
                                 Evaluator value, Evaluator increment);

  /// psi(n) = compensated sum of x(0..n-1). Builds a prefix table, so the
  /// usable horizon is min(x.horizon(), kExplicitCap). Throws ArgumentError
  /// for zero or increasing increments.
  static PsiFunction from_increments(const Sequence& x,
                                     std::string name = "file");

  /// psi(n) for 0 <= n <= horizon().
  double operator()(Index n) const;
  double increment(Index k) const { return increments_(k); }
  /// psi(2t)/psi(t), t >= 1.
  double ratio(Index t) const;

  Index horizon() const { return horizon_; }
  const std::string& name() const { return name_; }
  /// Increment sequence, truncated to `horizon` entries.
  DecreasingSequence increments(Index horizon) const;
  DecreasingSequence increments() const { return increments_; }

 private:
  std::string name_;
  Index horizon_ = 0;
  Evaluator value_;
  DecreasingSequence increments_;
};

PsiFunction psi_log();
PsiFunction psi_power(double alpha);
PsiFunction psi_linear();
/// Dyadic-block psi satisfying the doubling bound but whose ratio
/// psi(2t)/psi(t) keeps returning close to 1 while also exceeding 1.6.
PsiFunction psi_dpss();

struct MarcinkiewiczNormResult {
  double value = 0.0;
  Index argmax = 0;
  /// The running max did not increase over the last decade [horizon/10,
  /// horizon). A heuristic, not a proof that the sup is attained.
  bool attained_within_horizon = false;
};

/// max over n < horizon of (1/psi(n+1)) sum_{k<=n} a(k). Streams over a in
/// parallel chunks; deterministic.
MarcinkiewiczNormResult marcinkiewicz_norm(const DecreasingSequence& a,
                                           const PsiFunction& psi,
                                           Index horizon);

struct PsiDiagnostics {
  std::vector<Index> t;
  std::vector<double> ratio;  ///< psi(2t)/psi(t)
  double sampled_min = 0.0;
  double sampled_max = 0.0;
  /// Horizon-limited estimates of liminf/limsup: min and max over the
  /// samples with t >= tail_start.
  Index tail_start = 0;
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
  /// Every sample lies in [1, 2] (concavity with psi(0) = 0 forces this).
  bool ratio_bounds_hold = true;
};

/// Samples the doubling ratio at t = 1, ceil(t * grid), ... up to horizon/2.
/// The tail window is the upper half of the grid on a log scale.
PsiDiagnostics psi_diagnostics(const PsiFunction& psi, Index horizon,
                               double grid = 2.0);

/// (1/n) ||sigma_n a||_{M_psi} over indices m < horizon of sigma_n a.
/// Only block endpoints of sigma_n a are inspected: inside a block the ratio
/// is a linear numerator over a concave denominator, hence quasi-convex.
double direct_sum_norm_rate(const DecreasingSequence& a, const PsiFunction& psi,
                            Index n, Index horizon);

// Model sequences. All are generator-backed with horizon
// kDefaultModelHorizon unless stated otherwise.

DecreasingSequence harmonic(Index horizon = kDefaultModelHorizon);
/// (k+1)^-beta; beta <= 0 throws ConstructionError.
DecreasingSequence power_decay(double beta, Index horizon = kDefaultModelHorizon);
/// r^k for r in (0, 1]; r > 1 throws ConstructionError.
DecreasingSequence geometric(double r, Index horizon = kDefaultModelHorizon);
DecreasingSequence psi_increments(const PsiFunction& psi,
                                  Index horizon = kDefaultModelHorizon);
/// Increments of log(1+t) * (1.5 + 0.5 sin(log log(e+t))): the prefunctional
/// under psi_log keeps oscillating on doubly exponential scales.
DecreasingSequence oscillating_model(Index horizon = kDefaultModelHorizon);
/// Validated explicit buffer.
DecreasingSequence explicit_sequence(std::vector<double> values,
                                     std::string label = "explicit");

}  // namespace singtrace
