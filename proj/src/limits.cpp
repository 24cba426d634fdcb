#include "singtrace/limits.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "format.hpp"
#include "singtrace/error.hpp"
#include "singtrace/parallel.hpp"

namespace singtrace {
namespace {

constexpr unsigned kMaxOrder = 8;
const std::vector<unsigned> kResidualFactors{2, 4, 8};

// y(j) = w[offset + j / repeat] for j < length.
struct View {
  std::span<const double> w;
  Index offset = 0;
  Index repeat = 1;
  Index length = 0;

  double operator()(Index j) const { return w[offset + j / repeat]; }
  View dilated(Index d) const { return {w, offset, repeat * d, length * d}; }
};

struct Range {
  double lo;
  double hi;
};

// Extremes over the entries of w that y(j), first <= j < length, reads.
Range read_range(const View& v, Index first) {
  const auto b = v.w.begin() + static_cast<std::ptrdiff_t>(v.offset + first / v.repeat);
  const auto e = v.w.begin() +
                 static_cast<std::ptrdiff_t>(v.offset + (v.length - 1) / v.repeat + 1);
  const auto [lo, hi] = std::minmax_element(b, e);
  return {*lo, *hi};
}

double clamp_to(long double v, Range r) {
  return std::clamp(static_cast<double>(v), r.lo, r.hi);
}

double cesaro(const View& v, unsigned order) {
  long double sums[kMaxOrder] = {};
  long double avg = 0.0L;
  for (Index j = 0; j < v.length; ++j) {
    const long double count = static_cast<long double>(j + 1);
    avg = v(j);
    for (unsigned l = 0; l < order; ++l) {
      sums[l] += avg;
      avg = sums[l] / count;
    }
  }
  return clamp_to(avg, read_range(v, 0));
}

double log_mean(const View& v) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (Index j = 0; j < v.length; ++j) {
    const long double weight = 1.0L / static_cast<long double>(j + 1);
    num += weight * v(j);
    den += weight;
  }
  return clamp_to(num / den, read_range(v, 0));
}

double tail_window(const View& v, double fraction) {
  const auto len = static_cast<Index>(
      std::ceil(fraction * static_cast<double>(v.length)));
  const Index width = std::clamp<Index>(len, 1, v.length);
  const Index first = v.length - width;
  long double sum = 0.0L;
  for (Index j = first; j < v.length; ++j) sum += v(j);
  return clamp_to(sum / static_cast<long double>(width), read_range(v, first));
}

double evaluate(const LimitProcedure& p, const View& v) {
  switch (p.kind) {
    case LimitProcedure::Kind::kCesaro:
      return cesaro(v, p.order);
    case LimitProcedure::Kind::kLogMean:
      return log_mean(v);
    case LimitProcedure::Kind::kTailWindow:
      return tail_window(v, p.window);
    case LimitProcedure::Kind::kDilationAveraged: {
      // Each sigma_d x is read on its own horizon d * N, so every member of
      // the average sees the same stretch of x.
      long double sum = cesaro(v, p.order);
      for (unsigned d : p.factors) sum += cesaro(v.dilated(d), p.order);
      sum /= static_cast<long double>(p.factors.size() + 1);
      return clamp_to(sum, read_range(v, 0));
    }
  }
  return 0.0;
}

// x on [0, n) as a span; explicit buffers are used in place.
struct Window {
  std::vector<double> owned;
  std::span<const double> data;
};

Window read_window(const Sequence& x, Index n) {
  if (n == 0) throw ArgumentError("limit procedure needs a positive horizon");
  if (n > x.horizon()) throw HorizonError(n - 1, x.horizon());
  Window w;
  if (x.kind() == Sequence::Kind::kExplicit) {
    w.data = x.values().first(n);
  } else {
    w.owned = x.materialize(n);
    w.data = w.owned;
  }
  return w;
}

}  // namespace

LimitProcedure LimitProcedure::cesaro(unsigned order, Index horizon) {
  LimitProcedure p;
  p.kind = Kind::kCesaro;
  p.order = order;
  p.factors.clear();
  p.horizon = horizon;
  p.validate();
  return p;
}

LimitProcedure LimitProcedure::log_mean(Index horizon) {
  LimitProcedure p;
  p.kind = Kind::kLogMean;
  p.factors.clear();
  p.horizon = horizon;
  p.validate();
  return p;
}

LimitProcedure LimitProcedure::dilation_averaged(std::vector<unsigned> factors,
                                                 Index horizon, unsigned order) {
  LimitProcedure p;
  p.kind = Kind::kDilationAveraged;
  p.factors = std::move(factors);
  p.order = order;
  p.horizon = horizon;
  p.validate();
  return p;
}

LimitProcedure LimitProcedure::tail_window(double fraction, Index horizon) {
  LimitProcedure p;
  p.kind = Kind::kTailWindow;
  p.window = fraction;
  p.factors.clear();
  p.horizon = horizon;
  p.validate();
  return p;
}

LimitProcedure LimitProcedure::with_horizon(Index n) const {
  LimitProcedure p = *this;
  p.horizon = n;
  p.validate();
  return p;
}

void LimitProcedure::validate() const {
  if (horizon == 0) throw ArgumentError("limit procedure needs a positive horizon");
  if ((kind == Kind::kCesaro || kind == Kind::kDilationAveraged) &&
      (order < 1 || order > kMaxOrder))
    throw ArgumentError("cesaro order must be in [1, " +
                        std::to_string(kMaxOrder) + "]");
  if (kind == Kind::kDilationAveraged) {
    if (factors.empty()) throw ArgumentError("dilavg needs at least one factor");
    for (unsigned d : factors)
      if (d != 2 && d != 3 && d != 4 && d != 8)
        throw ArgumentError("dilavg factors must come from {2,3,4,8}");
  }
  if (kind == Kind::kTailWindow && !(window > 0.0 && window <= 1.0))
    throw ArgumentError("tail window fraction must be in (0, 1]");
}

std::string LimitProcedure::label() const {
  switch (kind) {
    case Kind::kCesaro:
      return "cesaro:" + std::to_string(order);
    case Kind::kLogMean:
      return "logmean";
    case Kind::kTailWindow:
      return "tail:" + detail::short_number(window);
    case Kind::kDilationAveraged: {
      std::string s = "dilavg:";
      for (std::size_t i = 0; i < factors.size(); ++i)
        s += (i ? "," : "") + std::to_string(factors[i]);
      if (order != 2) s += "@" + std::to_string(order);
      return s;
    }
  }
  return {};
}

double glim_value(const LimitProcedure& proc, const Sequence& x) {
  proc.validate();
  const Window w = read_window(x, proc.horizon);
  return evaluate(proc, View{w.data, 0, 1, proc.horizon});
}

LimitEvaluation glim_evaluate(const LimitProcedure& proc, const Sequence& x) {
  proc.validate();
  const Index n = proc.horizon;
  const Window w = read_window(x, n);
  const View full{w.data, 0, 1, n};

  LimitEvaluation out;
  out.value = evaluate(proc, full);
  if (n >= 2) {
    out.shift_residual =
        std::abs(out.value - evaluate(proc, View{w.data, 1, 1, n - 1}));
    out.tail_sensitivity =
        std::abs(out.value - evaluate(proc, View{w.data, 0, 1, n / 2}));
  }
  const auto& factors = proc.kind == LimitProcedure::Kind::kDilationAveraged
                            ? proc.factors
                            : kResidualFactors;
  for (unsigned d : factors) {
    // sigma_d x on the fixed horizon n reads x on [0, ceil(n / d)).
    const double dv = evaluate(proc, View{w.data, 0, d, n});
    out.dilation_residuals.emplace_back(d, std::abs(out.value - dv));
  }
  return out;
}

Extension glim_extend_unbounded(const LimitProcedure& proc, const Sequence& x,
                                const std::vector<double>& cutoffs) {
  proc.validate();
  if (cutoffs.size() < 2)
    throw ArgumentError("extension needs at least two cutoffs");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] >= 0.0) || !std::isfinite(cutoffs[i]))
      throw ArgumentError("cutoffs must be finite and >= 0");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
      throw ArgumentError("cutoffs must be strictly increasing");
  }
  const Window w = read_window(x, proc.horizon);

  Extension ext;
  ext.cutoffs = cutoffs;
  ext.values.resize(cutoffs.size());
  parallel_for(cutoffs.size(), [&](std::size_t i) {
    std::vector<double> capped(w.data.begin(), w.data.end());
    for (double& v : capped) v = std::min(v, cutoffs[i]);
    ext.values[i] = evaluate(proc, View{capped, 0, 1, proc.horizon});
  });
  const double last = ext.values.back();
  const double prev = ext.values[ext.values.size() - 2];
  ext.finite = std::abs(last - prev) <=
               kExtensionStability * std::max(std::abs(last), std::abs(prev));
  ext.value = ext.finite ? last : std::numeric_limits<double>::infinity();
  return ext;
}

std::vector<double> default_cutoffs(const LimitProcedure& proc,
                                    const Sequence& x) {
  const auto early = static_cast<Index>(
      std::ceil(std::sqrt(static_cast<double>(proc.horizon))));
  const Window w = read_window(x, std::min(early, proc.horizon));
  const double peak = *std::max_element(w.data.begin(), w.data.end());
  std::vector<double> cutoffs{1.0, 2.0};
  while (cutoffs.back() < 4.0 * peak) cutoffs.push_back(2.0 * cutoffs.back());
  return cutoffs;
}

ProductNullity product_nullity_check(const LimitProcedure& proc,
                                     const Sequence& z, const Sequence& u,
                                     double threshold) {
  ProductNullity r;
  r.z_value = glim_value(proc, z);
  r.u_finite = glim_extend_unbounded(proc, u, default_cutoffs(proc, u)).finite;
  r.value = glim_value(proc, multiply(u, z));
  r.precondition_met = r.z_value < threshold && r.u_finite;
  return r;
}

}  // namespace singtrace
