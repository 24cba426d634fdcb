#include "singtrace/dixmier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "singtrace/error.hpp"
#include "singtrace/majorization.hpp"
#include "singtrace/parallel.hpp"
#include "singtrace/summation.hpp"

namespace singtrace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_psi_horizon(const PsiFunction& psi, Index n) {
  if (n > psi.horizon()) throw HorizonError(n, psi.horizon());
}

Verdict classify(bool finite, double value, double band_min, double band_max,
                 double band_threshold) {
  if (!finite) return Verdict::kDivergent;
  const bool tight = band_max - band_min <= band_threshold;
  const bool inside = value >= band_min - band_threshold &&
                      value <= band_max + band_threshold;
  return tight && inside ? Verdict::kMeasurableConsistent : Verdict::kOscillating;
}

void fill_band(TraceEstimate& est, const Sequence& t) {
  const auto points = band_checkpoints(est.horizon);
  est.band_min = kInf;
  est.band_max = -kInf;
  for (Index k : points) {
    est.band_min = std::min(est.band_min, t(k));
    est.band_max = std::max(est.band_max, t(k));
  }
}

}  // namespace

Sequence prefunctional(const DecreasingSequence& a, const PsiFunction& psi,
                       Index horizon) {
  require_psi_horizon(psi, horizon);
  const Sequence sums = prefix_sums(a, horizon);
  std::vector<double> t(horizon);
  for (Index n = 0; n < horizon; ++n) t[n] = sums(n) / psi(n + 1);
  return Sequence::from_values(std::move(t), "T(" + a.label() + "," + psi.name() + ")");
}

std::vector<double> prefunctional_at(const DecreasingSequence& a,
                                     const PsiFunction& psi,
                                     std::span<const Index> checkpoints) {
  if (!checkpoints.empty()) require_psi_horizon(psi, checkpoints.back() + 1);
  std::vector<double> t = prefix_sums_at(a, checkpoints);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] /= psi(checkpoints[i] + 1);
  return t;
}

std::vector<Index> band_checkpoints(Index horizon) {
  if (horizon == 0) throw ArgumentError("band needs a positive horizon");
  const Index last = horizon - 1;
  const auto root = static_cast<Index>(std::floor(std::sqrt(static_cast<double>(horizon))));
  Index k = std::max<Index>(1, std::min<Index>(10'000, root));
  std::vector<Index> points;
  for (; k < last; k *= 2) points.push_back(k);
  points.push_back(last);
  return points;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kMeasurableConsistent:
      return "measurable-consistent";
    case Verdict::kOscillating:
      return "oscillating";
    case Verdict::kDivergent:
      return "divergent";
  }
  return {};
}

TraceEstimate dixmier_estimate(const DecreasingSequence& a,
                               const PsiFunction& psi,
                               const LimitProcedure& proc,
                               VerdictThresholds thresholds) {
  TraceEstimate est;
  est.procedure = proc.label();
  est.horizon = proc.horizon;
  const Sequence t = prefunctional(a, psi, proc.horizon);
  est.extension = glim_extend_unbounded(proc, t, default_cutoffs(proc, t));
  est.value = est.extension.value;
  fill_band(est, t);
  est.criterion = additivity_criterion(psi, proc);
  est.verdict = classify(est.extension.finite, est.value, est.band_min,
                         est.band_max, thresholds.band);
  return est;
}

double additivity_criterion(const PsiFunction& psi, const LimitProcedure& proc) {
  require_psi_horizon(psi, 2 * proc.horizon);
  const Sequence ratio = Sequence::closure(
      proc.horizon,
      [psi](Index n) { return psi(2 * n + 1) / psi(n + 1); },
      "ratio(" + psi.name() + ")");
  return glim_value(proc, ratio);
}

DecreasingSequence witness_operator(const PsiFunction& psi, Index horizon) {
  return psi.increments(std::min(horizon, psi.horizon()));
}

double dilation_lemma_check(const DecreasingSequence& a, const PsiFunction& psi,
                            Index n) {
  if (2 * n + 1 >= a.horizon()) throw HorizonError(2 * n + 1, a.horizon());
  require_psi_horizon(psi, 2 * n + 2);
  // 2 sigma_{1/2} a (j) = a(2j) + a(2j+1); both sides stay in long double
  CompensatedSum left;
  for (Index j = 0; j <= n; ++j)
    left.add(static_cast<long double>(a(2 * j)) + a(2 * j + 1));
  CompensatedSum right;
  for (Index k = 0; k <= 2 * n + 1; ++k) right.add(a(k));
  const long double p1 = psi(n + 1);
  const long double p2 = psi(2 * n + 2);
  const long double lhs = left.value() / p1;
  const long double rhs = p2 / p1 * (right.value() / p2);
  return static_cast<double>(std::fabs(lhs - rhs));
}

DecreasingSequence wedge_truncation(const DecreasingSequence& a,
                                    const PsiFunction& psi, double m,
                                    Index horizon) {
  if (!(m >= 0.0) || !std::isfinite(m))
    throw ArgumentError("wedge truncation level must be finite and >= 0");
  const auto cap = DecreasingSequence::assume_sorted(
      scale(witness_operator(psi, horizon), m));
  return wedge(a, cap, horizon);
}

TraceEstimate normal_part_estimate(const DecreasingSequence& a,
                                   const PsiFunction& psi,
                                   const LimitProcedure& proc,
                                   const std::vector<double>& cutoffs,
                                   VerdictThresholds thresholds) {
  proc.validate();
  if (cutoffs.size() < 2)
    throw ArgumentError("normal part needs at least two cutoffs");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (!(cutoffs[i] > cutoffs[i - 1]))
      throw ArgumentError("cutoffs must be strictly increasing");

  TraceEstimate est;
  est.procedure = proc.label();
  est.horizon = proc.horizon;
  est.extension.cutoffs = cutoffs;
  est.extension.values.resize(cutoffs.size());
  parallel_for(cutoffs.size(), [&](std::size_t i) {
    const auto r = wedge_truncation(a, psi, cutoffs[i], proc.horizon);
    est.extension.values[i] = glim_value(proc, prefunctional(r, psi, proc.horizon));
  });
  const double last = est.extension.values.back();
  const double prev = est.extension.values[cutoffs.size() - 2];
  est.extension.finite =
      std::abs(last - prev) <=
      kExtensionStability * std::max(std::abs(last), std::abs(prev));
  est.extension.value = est.extension.finite ? last : kInf;
  est.value = est.extension.value;

  fill_band(est, prefunctional(a, psi, proc.horizon));
  est.criterion = additivity_criterion(psi, proc);
  est.verdict = classify(est.extension.finite, est.value, est.band_min,
                         est.band_max, thresholds.band);
  return est;
}

MeasurabilityReport measurability_report(const DecreasingSequence& a,
                                         const PsiFunction& psi,
                                         const std::vector<LimitProcedure>& procs,
                                         Index horizon,
                                         VerdictThresholds thresholds) {
  if (procs.size() < 2)
    throw ArgumentError("measurability needs at least two procedures");
  if (horizon > a.horizon()) throw HorizonError(horizon - 1, a.horizon());
  MeasurabilityReport r;
  r.horizon = horizon;
  r.value_horizon = std::min(horizon, kMeasurabilityValueHorizon);
  bool finite = true;
  double lo = kInf;
  double hi = -kInf;
  for (const auto& p : procs) {
    const auto proc = p.with_horizon(r.value_horizon);
    const double v = dixmier_estimate(a, psi, proc, thresholds).value;
    r.procedures.push_back(proc.label());
    r.values.push_back(v);
    finite = finite && std::isfinite(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  r.spread = finite ? hi - lo : kInf;

  r.checkpoints = band_checkpoints(horizon);
  r.band_values = prefunctional_at(a, psi, r.checkpoints);
  r.band_min = *std::min_element(r.band_values.begin(), r.band_values.end());
  r.band_max = *std::max_element(r.band_values.begin(), r.band_values.end());
  if (!finite)
    r.verdict = Verdict::kDivergent;
  else if (r.spread <= thresholds.spread && r.band_width() <= thresholds.band)
    r.verdict = Verdict::kMeasurableConsistent;
  else
    r.verdict = Verdict::kOscillating;
  return r;
}

AdditivityAudit additivity_audit(const DecreasingSequence& a,
                                 const DecreasingSequence& b,
                                 const PsiFunction& psi,
                                 const LimitProcedure& proc) {
  const auto sum = decreasing_rearrangement(add(a, b), proc.horizon);
  AdditivityAudit r;
  r.tau_a = dixmier_estimate(a, psi, proc).value;
  r.tau_b = dixmier_estimate(b, psi, proc).value;
  r.tau_sum = dixmier_estimate(sum, psi, proc).value;
  r.finite = std::isfinite(r.tau_a) && std::isfinite(r.tau_b) &&
             std::isfinite(r.tau_sum);
  r.defect = r.finite ? r.tau_a + r.tau_b - r.tau_sum
                      : std::numeric_limits<double>::quiet_NaN();
  return r;
}

MatrixAudit additivity_audit(const DenseMatrix& a, const DenseMatrix& b,
                             const PsiFunction& psi, const LimitProcedure& proc) {
  MatrixAudit r;
  r.sandwich = submajorization_chain(a, b);
  const Index n = std::max<Index>(proc.horizon, a.dim());
  const auto p = proc.with_horizon(n);
  r.tau_a = dixmier_estimate(singular_values(a).as_sequence(n), psi, p).value;
  r.tau_b = dixmier_estimate(singular_values(b).as_sequence(n), psi, p).value;
  r.tau_sum = dixmier_estimate(r.sandwich.sum.as_sequence(n), psi, p).value;
  r.defect = r.tau_a + r.tau_b - r.tau_sum;
  return r;
}

}  // namespace singtrace
