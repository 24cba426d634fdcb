#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include "chunked_scan.hpp"
#include "format.hpp"
#include "singtrace/error.hpp"
#include "singtrace/ideals.hpp"

namespace singtrace {
namespace {

struct Peak {
  long double value = -1.0L;
  Index index = 0;
};

// Keeps the first index attaining the max, so the reduction is
// order-independent.
void take(Peak& p, long double v, Index k) {
  if (v > p.value || (v == p.value && k < p.index)) {
    p.value = v;
    p.index = k;
  }
}

// Block values of the dyadic psi: increments equal v[j] on [2^j, 2^(j+1))
// (and v[0] at k = 0), so psi(2^j) = v[0] + sum_{i<j} v[i] 2^i.
struct DyadicTable {
  std::array<double, 64> v{};
  std::array<double, 64> at_power{};  // psi(2^j)
};

DyadicTable make_dpss_table() {
  constexpr double kDropTrigger = 1.6;
  DyadicTable t;
  t.v[0] = 1.0;
  t.at_power[0] = 1.0;
  t.at_power[1] = 2.0;
  int drops = 0;
  for (int j = 1; j < 63; ++j) {
    const double prev_ratio = t.at_power[j] / t.at_power[j - 1];
    if (prev_ratio >= kDropTrigger) {
      t.v[j] = std::ldexp(t.v[j - 1], -(5 + drops));
      ++drops;
    } else {
      t.v[j] = t.v[j - 1];
    }
    t.at_power[j + 1] = t.at_power[j] + std::ldexp(t.v[j], j);
  }
  return t;
}

int floor_log2(Index k) { return 63 - std::countl_zero(k); }

}  // namespace

PsiFunction PsiFunction::closed_form(std::string name, Index horizon,
                                     Evaluator value, Evaluator increment) {
  if (horizon == 0) throw ArgumentError("psi horizon must be positive");
  PsiFunction p;
  p.name_ = std::move(name);
  p.horizon_ = horizon;
  p.value_ = std::move(value);
  p.increments_ = DecreasingSequence(
      Sequence::generator("psi-inc:" + p.name_, horizon, std::move(increment)));
  if (!(p.increments_(horizon - 1) > 0.0))
    throw ConstructionError("psi '" + p.name_ + "' has a zero increment");
  return p;
}

PsiFunction PsiFunction::from_increments(const Sequence& x, std::string name) {
  const Index n = std::min(x.horizon(), kExplicitCap);
  if (n == 0) throw ArgumentError("psi needs at least one increment");
  std::vector<double> inc = x.materialize(n);
  for (Index k = 0; k < n; ++k) {
    if (!(inc[k] > 0.0))
      throw ArgumentError("psi increment " + std::to_string(k) +
                          " is not strictly positive");
    if (k > 0 && inc[k] > inc[k - 1])
      throw ArgumentError("psi increments increase at index " +
                          std::to_string(k));
  }
  const Sequence seq = Sequence::from_values(std::move(inc), "psi-inc:" + name);
  const Sequence table = prefix_sums(seq, n);
  PsiFunction p;
  p.name_ = std::move(name);
  p.horizon_ = n;
  p.value_ = [table](Index m) { return m == 0 ? 0.0 : table(m - 1); };
  p.increments_ = DecreasingSequence::assume_sorted(seq);
  return p;
}

double PsiFunction::operator()(Index n) const {
  if (n > horizon_) throw HorizonError(n, horizon_);
  return value_(n);
}

double PsiFunction::ratio(Index t) const {
  if (t == 0) throw ArgumentError("psi ratio needs t >= 1");
  return (*this)(2 * t) / (*this)(t);
}

DecreasingSequence PsiFunction::increments(Index horizon) const {
  return DecreasingSequence::assume_sorted(
      increments_.sequence().truncated(horizon));
}

PsiFunction psi_log() {
  return PsiFunction::closed_form(
      "log", kUnboundedHorizon,
      [](Index n) { return std::log1p(static_cast<double>(n)); },
      [](Index k) { return std::log1p(1.0 / (static_cast<double>(k) + 1.0)); });
}

PsiFunction psi_power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ArgumentError("power psi needs alpha in (0, 1)");
  return PsiFunction::closed_form(
      "power:" + detail::short_number(alpha),
      kUnboundedHorizon,
      [alpha](Index n) { return std::pow(static_cast<double>(n), alpha); },
      [alpha](Index k) {
        if (k == 0) return 1.0;
        const double kk = static_cast<double>(k);
        // (k+1)^a - k^a without cancellation
        return std::pow(kk, alpha) * std::expm1(alpha * std::log1p(1.0 / kk));
      });
}

PsiFunction psi_linear() {
  return PsiFunction::closed_form(
      "linear", kUnboundedHorizon,
      [](Index n) { return static_cast<double>(n); },
      [](Index) { return 1.0; });
}

PsiFunction psi_dpss() {
  static const DyadicTable table = make_dpss_table();
  return PsiFunction::closed_form(
      "dpss", kUnboundedHorizon,
      [](Index n) {
        if (n == 0) return 0.0;
        const int j = floor_log2(n);
        const Index base = Index{1} << j;
        return table.at_power[j] + static_cast<double>(n - base) * table.v[j];
      },
      [](Index k) { return k == 0 ? table.v[0] : table.v[floor_log2(k)]; });
}

MarcinkiewiczNormResult marcinkiewicz_norm(const DecreasingSequence& a,
                                           const PsiFunction& psi,
                                           Index horizon) {
  if (horizon == 0) throw ArgumentError("norm horizon must be >= 1");
  if (horizon > a.horizon()) throw HorizonError(horizon - 1, a.horizon());
  if (horizon > psi.horizon()) throw HorizonError(horizon, psi.horizon());
  const auto offsets = detail::chunk_offsets(a, horizon);
  std::vector<Peak> peaks(offsets.size());
  parallel_for(offsets.size(), [&](std::size_t c) {
    CompensatedSum acc = offsets[c];
    const Index end = std::min(horizon, (c + 1) * detail::kScanChunk);
    Peak p;
    for (Index k = c * detail::kScanChunk; k < end; ++k) {
      acc.add(a(k));
      take(p, static_cast<double>(acc.value()) / psi(k + 1), k);
    }
    peaks[c] = p;
  });
  Peak best;
  for (const Peak& p : peaks) take(best, p.value, p.index);
  MarcinkiewiczNormResult r;
  r.value = static_cast<double>(best.value);
  r.argmax = best.index;
  r.attained_within_horizon = best.index < (horizon + 9) / 10;
  return r;
}

PsiDiagnostics psi_diagnostics(const PsiFunction& psi, Index horizon,
                               double grid) {
  if (horizon < 4) throw ArgumentError("psi diagnostics need horizon >= 4");
  if (!(grid > 1.0) || !std::isfinite(grid))
    throw ArgumentError("grid ratio must be > 1");
  if (horizon > psi.horizon()) throw HorizonError(horizon, psi.horizon());
  PsiDiagnostics d;
  for (Index t = 1; 2 * t <= horizon;) {
    d.t.push_back(t);
    d.ratio.push_back(psi.ratio(t));
    const double next = std::ceil(static_cast<double>(t) * grid);
    t = std::max(t + 1, static_cast<Index>(next));
  }
  d.sampled_min = *std::min_element(d.ratio.begin(), d.ratio.end());
  d.sampled_max = *std::max_element(d.ratio.begin(), d.ratio.end());
  constexpr double kSlack = 1e-12;
  for (double r : d.ratio)
    if (r < 1.0 - kSlack || r > 2.0 + kSlack) d.ratio_bounds_hold = false;
  d.tail_start = static_cast<Index>(
      std::floor(std::sqrt(static_cast<double>(d.t.back()))));
  d.liminf_estimate = std::numeric_limits<double>::infinity();
  d.limsup_estimate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    if (d.t[i] < d.tail_start) continue;
    d.liminf_estimate = std::min(d.liminf_estimate, d.ratio[i]);
    d.limsup_estimate = std::max(d.limsup_estimate, d.ratio[i]);
  }
  return d;
}

double direct_sum_norm_rate(const DecreasingSequence& a, const PsiFunction& psi,
                            Index n, Index horizon) {
  if (n == 0) throw ArgumentError("direct sum needs n >= 1");
  if (horizon == 0) throw ArgumentError("norm horizon must be >= 1");
  if (horizon > psi.horizon()) throw HorizonError(horizon, psi.horizon());
  const Index blocks = horizon / n + (horizon % n != 0);
  if (blocks > a.horizon()) throw HorizonError(blocks - 1, a.horizon());

  const long double nn = static_cast<long double>(n);
  const auto offsets = detail::chunk_offsets(a, blocks);
  std::vector<Peak> peaks(offsets.size());
  parallel_for(offsets.size(), [&](std::size_t c) {
    CompensatedSum acc = offsets[c];
    const Index end = std::min(blocks, (c + 1) * detail::kScanChunk);
    Peak p;
    for (Index q = c * detail::kScanChunk; q < end; ++q) {
      const long double before = acc.value();
      const long double aq = a(q);
      acc.add(aq);
      const Index first = q * n;
      const Index last = std::min(first + n - 1, horizon - 1);
      take(p, (nn * before + aq) / psi(first + 1), first);
      if (last != first) {
        const long double len = static_cast<long double>(last - first + 1);
        take(p, (nn * before + len * aq) / psi(last + 1), last);
      }
    }
    peaks[c] = p;
  });
  Peak best;
  for (const Peak& p : peaks) take(best, p.value, p.index);
  return static_cast<double>(best.value / nn);
}

}  // namespace singtrace
