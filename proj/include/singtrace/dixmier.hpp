#pragma once

#include <span>
#include <string>
#include <vector>

#include "singtrace/ideals.hpp"
#include "singtrace/limits.hpp"
#include "singtrace/sequence.hpp"
#include "singtrace/spectra.hpp"

namespace singtrace {

/// T(a)(n) = (1/psi(n+1)) sum_{k<=n} a(k) for n < horizon, as an explicit
/// buffer (horizon <= kExplicitCap).
Sequence prefunctional(const DecreasingSequence& a, const PsiFunction& psi,
                       Index horizon);

/// T(a) at the given strictly increasing indices, streamed without
/// materializing a; usable up to the horizon of a.
std::vector<double> prefunctional_at(const DecreasingSequence& a,
                                     const PsiFunction& psi,
                                     std::span<const Index> checkpoints);

/// Ratio-2 checkpoints from min(10^4, floor(sqrt(N))) up to N - 1.
std::vector<Index> band_checkpoints(Index horizon);

enum class Verdict { kMeasurableConsistent, kOscillating, kDivergent };
std::string to_string(Verdict v);

struct TraceEstimate {
  double value = 0.0;  ///< +inf when divergent
  std::string procedure;
  Index horizon = 0;
  double band_min = 0.0;
  double band_max = 0.0;
  double criterion = 0.0;  ///< additivity_criterion(psi, proc)
  Verdict verdict = Verdict::kOscillating;
  Extension extension;  ///< cutoff curve behind value

  double band_width() const { return band_max - band_min; }
};

struct VerdictThresholds {
  double band = 0.05;
  double spread = 0.05;
};

/// Generalized limit of T(a) through the unbounded extension (default
/// cutoffs), read at proc.horizon.
TraceEstimate dixmier_estimate(const DecreasingSequence& a,
                               const PsiFunction& psi,
                               const LimitProcedure& proc,
                               VerdictThresholds thresholds = {});

/// glim of n -> psi(2n+1)/psi(n+1). Close to 1 exactly when the procedure
/// sees an additive trace.
double additivity_criterion(const PsiFunction& psi, const LimitProcedure& proc);

/// diag(psi(1), psi(2) - psi(1), ...): its prefunctional is identically 1.
DecreasingSequence witness_operator(const PsiFunction& psi,
                                    Index horizon = kDefaultModelHorizon);

/// |T(2 sigma_{1/2} a)(n) - (psi(2n+2)/psi(n+1)) T(a)(2n+1)|, which vanishes
/// identically. Needs 2n+1 < horizon of a.
double dilation_lemma_check(const DecreasingSequence& a, const PsiFunction& psi,
                            Index n);

/// wedge(a, m * witness(psi)) on [0, horizon): its prefunctional is
/// min{T(a), m}.
DecreasingSequence wedge_truncation(const DecreasingSequence& a,
                                    const PsiFunction& psi, double m,
                                    Index horizon);

/// Cutoff curve m -> glim T(wedge_truncation(a, psi, m)). Finite when the
/// last two values agree (see kExtensionStability). Band and criterion are
/// those of T(a).
TraceEstimate normal_part_estimate(const DecreasingSequence& a,
                                   const PsiFunction& psi,
                                   const LimitProcedure& proc,
                                   const std::vector<double>& cutoffs,
                                   VerdictThresholds thresholds = {});

/// Largest horizon at which measurability values are computed; the band is
/// still streamed over the full horizon.
inline constexpr Index kMeasurabilityValueHorizon = 10'000'000;

struct MeasurabilityReport {
  std::vector<std::string> procedures;
  std::vector<double> values;
  Index value_horizon = 0;
  double spread = 0.0;
  Index horizon = 0;
  std::vector<Index> checkpoints;
  std::vector<double> band_values;  ///< T at checkpoints
  double band_min = 0.0;
  double band_max = 0.0;
  Verdict verdict = Verdict::kOscillating;

  double band_width() const { return band_max - band_min; }
};

/// Values of T(a) under each procedure (at min(horizon,
/// kMeasurabilityValueHorizon)), their spread, and the oscillation band of
/// T over ratio-2 checkpoints in [min(10^4, sqrt(horizon)), horizon).
MeasurabilityReport measurability_report(const DecreasingSequence& a,
                                         const PsiFunction& psi,
                                         const std::vector<LimitProcedure>& procs,
                                         Index horizon,
                                         VerdictThresholds thresholds = {});

struct AdditivityAudit {
  double tau_a = 0.0;
  double tau_b = 0.0;
  double tau_sum = 0.0;
  double defect = 0.0;  ///< tau_a + tau_b - tau_sum
  bool finite = true;
};

/// Commuting diagonal pair: mu(A+B) is the rearrangement of a + b.
AdditivityAudit additivity_audit(const DecreasingSequence& a,
                                 const DecreasingSequence& b,
                                 const PsiFunction& psi,
                                 const LimitProcedure& proc);

struct MatrixAudit {
  SandwichReport sandwich;
  double tau_a = 0.0;
  double tau_b = 0.0;
  double tau_sum = 0.0;
  double defect = 0.0;
};

/// Non-commuting pair of matrices: checks the submajorization sandwich and
/// evaluates tau on the zero-padded singular value sequences.
MatrixAudit additivity_audit(const DenseMatrix& a, const DenseMatrix& b,
                             const PsiFunction& psi, const LimitProcedure& proc);

}  // namespace singtrace
