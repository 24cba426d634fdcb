#include "singtrace/majorization.hpp"

#include <algorithm>
#include <limits>

#include "singtrace/error.hpp"
#include "singtrace/summation.hpp"

namespace singtrace {

SubmajorizationReport check_submajorized(const DecreasingSequence& b,
                                         const DecreasingSequence& a, Index n,
                                         double tol) {
  if (n > b.horizon()) throw HorizonError(n - 1, b.horizon());
  if (n > a.horizon()) throw HorizonError(n - 1, a.horizon());
  if (n > kExplicitCap)
    throw ArgumentError("submajorization check beyond the explicit cap");
  SubmajorizationReport r;
  r.slack.resize(n);
  CompensatedSum sa;
  CompensatedSum sb;
  double running = std::numeric_limits<double>::infinity();
  for (Index m = 0; m < n; ++m) {
    sa.add(a(m));
    sb.add(b(m));
    const double gap = static_cast<double>(sa.value() - sb.value());
    running = std::min(running, gap);
    r.slack[m] = running;
    if (gap < -tol && !r.first_violation) r.first_violation = m;
  }
  r.holds = !r.first_violation.has_value();
  return r;
}

DecreasingSequence wedge(const DecreasingSequence& a,
                         const DecreasingSequence& b, Index n) {
  if (n > a.horizon()) throw HorizonError(n - 1, a.horizon());
  if (n > b.horizon()) throw HorizonError(n - 1, b.horizon());
  std::vector<double> out(n);
  CompensatedSum sa;
  CompensatedSum sb;
  long double prev_min = 0.0L;
  bool prev_from_a = true;
  for (Index k = 0; k < n; ++k) {
    const double ak = a(k);
    const double bk = b(k);
    sa.add(ak);
    sb.add(bk);
    const long double va = sa.value();
    const long double vb = sb.value();
    const bool from_a = va <= vb;
    const long double cur = from_a ? va : vb;
    if (k == 0)
      out[k] = from_a ? ak : bk;
    else if (from_a == prev_from_a)
      out[k] = from_a ? ak : bk;
    else
      out[k] = static_cast<double>(cur - prev_min);
    prev_min = cur;
    prev_from_a = from_a;
  }
  return DecreasingSequence::assume_sorted(Sequence::from_values(
      std::move(out), "wedge(" + a.label() + "," + b.label() + ")"));
}

std::pair<Sequence, Sequence> split_pointwise(const Sequence& y,
                                              const Sequence& x1,
                                              const Sequence& x2) {
  const Index n = std::min({y.horizon(), x1.horizon(), x2.horizon()});
  std::vector<double> y1(n);
  std::vector<double> y2(n);
  for (Index k = 0; k < n; ++k) {
    const double yk = y(k);
    const double a = x1(k);
    const double b = x2(k);
    if (yk > a + b)
      throw ArgumentError("split_pointwise: y exceeds x1 + x2 at index " +
                          std::to_string(k));
    y1[k] = std::min(yk, a);
    y2[k] = yk - y1[k];
    if (y1[k] + y2[k] != yk) {
      // y2 > yk / 2 here, so yk - y2 is exact; round y2 up until y1 <= x1
      if (yk - y2[k] > a) y2[k] = std::nextafter(y2[k], yk);
      y1[k] = yk - y2[k];
    }
  }
  return {Sequence::from_values(std::move(y1), "split1"),
          Sequence::from_values(std::move(y2), "split2")};
}

double top_m_sum(const Sequence& x, Index m) {
  if (m > x.horizon()) throw HorizonError(m - 1, x.horizon());
  std::vector<double> v = x.materialize(x.horizon());
  std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m),
                    v.end(), std::greater<>());
  CompensatedSum acc;
  for (Index k = 0; k < m; ++k) acc.add(v[k]);
  return static_cast<double>(acc.value());
}

std::string to_string(DecompositionPath p) {
  switch (p) {
    case DecompositionPath::kGreedyTransfer:
      return "greedy-transfer";
    case DecompositionPath::kExactIntegerSearch:
      return "exact-integer-search";
    case DecompositionPath::kLayerLp:
      return "layer-lp";
  }
  return {};
}

}  // namespace singtrace
