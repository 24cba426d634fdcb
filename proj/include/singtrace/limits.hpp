#pragma once

#include <string>
#include <utility>
#include <vector>

#include "singtrace/sequence.hpp"

namespace singtrace {

/// A finite-horizon averaging functional standing in for a dilation
/// invariant singular state. It reads x on [0, horizon).
///
/// Every kind is a positive linear average whose result is clamped to
/// [min x, max x] over the window it reads, which makes normalization exact
/// and keeps positivity and monotonicity exact under rounding.
struct LimitProcedure {
  enum class Kind { kCesaro, kLogMean, kDilationAveraged, kTailWindow };

  Kind kind = Kind::kDilationAveraged;
  unsigned order = 2;                   ///< Cesaro order (cesaro, dilavg)
  std::vector<unsigned> factors{2, 4, 8};  ///< dilavg factor set, in {2,3,4,8}
  double window = 0.1;                  ///< tail-window fraction in (0, 1]
  Index horizon = 1'000'000;

  static LimitProcedure cesaro(unsigned order, Index horizon);
  static LimitProcedure log_mean(Index horizon);
  static LimitProcedure dilation_averaged(std::vector<unsigned> factors,
                                          Index horizon, unsigned order = 2);
  static LimitProcedure tail_window(double fraction, Index horizon);

  LimitProcedure with_horizon(Index n) const;
  /// CLI spelling without the horizon, e.g. "dilavg:2,4,8" or "cesaro:2".
  std::string label() const;
  /// Throws ArgumentError on invalid parameters.
  void validate() const;
};

struct LimitEvaluation {
  double value = 0.0;
  /// |value(x) - value(x(. + 1))|, the shifted sequence read on horizon - 1.
  double shift_residual = 0.0;
  /// (n, |value(x) - value(sigma_n x)|), sigma_n x read on the same horizon.
  std::vector<std::pair<unsigned, double>> dilation_residuals;
  /// |value at horizon - value at horizon / 2|.
  double tail_sensitivity = 0.0;
};

/// Value only. x must be evaluable on [0, proc.horizon).
double glim_value(const LimitProcedure& proc, const Sequence& x);

/// Value plus residual diagnostics. Dilation residuals use the procedure's
/// factor set for dilavg and {2, 4, 8} otherwise.
LimitEvaluation glim_evaluate(const LimitProcedure& proc, const Sequence& x);

struct Extension {
  std::vector<double> cutoffs;
  std::vector<double> values;  ///< glim(min{m, x}) per cutoff, nondecreasing
  bool finite = false;
  double value = 0.0;          ///< last value when finite
};

/// Relative agreement of the last two cutoff values that counts as stable.
inline constexpr double kExtensionStability = 1e-6;

/// Extension of the procedure to unbounded x through min{m, x}. The verdict
/// is finite when the last two values agree within kExtensionStability
/// relative. Cutoffs must be nonnegative and strictly increasing (at least
/// two).
Extension glim_extend_unbounded(const LimitProcedure& proc, const Sequence& x,
                                const std::vector<double>& cutoffs);

/// Powers of two 1, 2, 4, ... up to the first one >= 4 * max of x over
/// [0, ceil(sqrt(N))). Growth beyond that early maximum is what the
/// extension reports as divergence.
std::vector<double> default_cutoffs(const LimitProcedure& proc,
                                    const Sequence& x);

struct ProductNullity {
  double value = 0.0;    ///< glim(u z), always computed
  double z_value = 0.0;  ///< glim(z)
  bool u_finite = false;
  bool precondition_met = false;  ///< z_value below threshold and u finite
};

ProductNullity product_nullity_check(const LimitProcedure& proc,
                                     const Sequence& z, const Sequence& u,
                                     double threshold = 1e-3);

}  // namespace singtrace
