#include <algorithm>
#include <cmath>
#include <numeric>

#include "lp.hpp"
#include "singtrace/error.hpp"
#include "singtrace/majorization.hpp"
#include "singtrace/summation.hpp"

namespace singtrace {
namespace {

constexpr std::size_t kExactSearchMaxLength = 12;
constexpr std::size_t kExactSearchBudget = 5'000'000;
constexpr std::size_t kLpMaxLength = 400;

struct Problem {
  std::vector<double> b;
  std::vector<double> cap1;  // cap1[m] = sum_{k<m} a1(k), m = 0..n
  std::vector<double> cap2;
  bool integral = false;
  double tol = 0.0;

  std::size_t size() const { return b.size(); }
};

std::vector<double> caps(const DecreasingSequence& a, Index n) {
  std::vector<double> c(n + 1, 0.0);
  CompensatedSum acc;
  for (Index k = 0; k < n; ++k) {
    acc.add(a(k));
    c[k + 1] = static_cast<double>(acc.value());
  }
  return c;
}

bool is_integer(double v) {
  return v == std::floor(v) && std::abs(v) <= 0x1p50;
}

// Prefix sums of v sorted nonincreasingly, top[m] for m = 0..n.
std::vector<double> top_sums(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  std::vector<double> top(v.size() + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t k = 0; k < v.size(); ++k) {
    acc.add(v[k]);
    top[k + 1] = static_cast<double>(acc.value());
  }
  return top;
}

// First m >= 1 with top_m(v) > cap[m] + tol, or 0 when feasible.
std::size_t first_violation(const std::vector<double>& v,
                            const std::vector<double>& cap, double tol) {
  const auto top = top_sums(v);
  for (std::size_t m = 1; m < top.size(); ++m)
    if (top[m] > cap[m] + tol) return m;
  return 0;
}

// Largest amount b1[i] can grow while every top-m sum of b1 stays within
// cap1. Raising b1[i] to b1[i] + d puts it into the top m' at worst, so the
// binding constraint is b1[i] + d + top_{m'-1}(b1 without i) <= cap1[m'].
double room(const std::vector<double>& b1, std::size_t i,
            const std::vector<double>& cap1) {
  std::vector<double> others;
  others.reserve(b1.size() - 1);
  for (std::size_t k = 0; k < b1.size(); ++k)
    if (k != i) others.push_back(b1[k]);
  const auto top = top_sums(std::move(others));
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < cap1.size(); ++m)
    r = std::min(r, cap1[m] - b1[i] - top[m - 1]);
  return std::max(0.0, r);
}

struct Split {
  std::vector<double> b1;
  std::vector<double> b2;
};

std::optional<Split> greedy_transfer(const Problem& p,
                                     const DecreasingSequence& bseq,
                                     const DecreasingSequence& a1) {
  const std::size_t n = p.size();
  const auto w = wedge(bseq, a1, n);
  Split s{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    s.b1[k] = std::min(w(k), p.b[k]);
    s.b2[k] = p.b[k] - s.b1[k];
  }
  const std::size_t max_rounds = 20 * n + 100;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const std::size_t m = first_violation(s.b2, p.cap2, p.tol);
    if (m == 0) return s;
    double excess = top_sums(s.b2)[m] - p.cap2[m];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return s.b2[x] > s.b2[y];
    });
    bool moved = false;
    for (std::size_t r = 0; r < m && excess > p.tol; ++r) {
      const std::size_t i = order[r];
      double d = std::min({s.b2[i], room(s.b1, i, p.cap1), excess});
      if (p.integral) d = std::floor(d);
      if (!(d > 0.0)) continue;
      s.b1[i] += d;
      s.b2[i] = p.b[i] - s.b1[i];
      excess -= d;
      moved = true;
    }
    if (!moved) return std::nullopt;
  }
  return std::nullopt;
}

// Depth-first search over integer b1 in [0, b]. Partial top sums bound the
// final ones from below, so a violated partial constraint prunes the branch.
class IntegerSearch {
 public:
  explicit IntegerSearch(const Problem& p) : p_(p), b1_(p.size()) {}

  std::optional<Split> run() {
    if (!descend(0)) return std::nullopt;
    Split s{b1_, std::vector<double>(p_.size())};
    for (std::size_t k = 0; k < p_.size(); ++k) s.b2[k] = p_.b[k] - s.b1[k];
    return s;
  }

 private:
  bool partial_ok(std::size_t filled) const {
    std::vector<double> x1(b1_.begin(), b1_.begin() + static_cast<std::ptrdiff_t>(filled));
    std::vector<double> x2(filled);
    for (std::size_t k = 0; k < filled; ++k) x2[k] = p_.b[k] - b1_[k];
    const auto t1 = top_sums(std::move(x1));
    const auto t2 = top_sums(std::move(x2));
    for (std::size_t m = 1; m <= filled; ++m)
      if (t1[m] > p_.cap1[m] || t2[m] > p_.cap2[m]) return false;
    return true;
  }

  bool descend(std::size_t k) {
    if (k == p_.size()) return true;
    for (double v = p_.b[k]; v >= 0.0; v -= 1.0) {
      if (++nodes_ > kExactSearchBudget) return false;
      b1_[k] = v;
      if (partial_ok(k + 1) && descend(k + 1)) return true;
    }
    b1_[k] = 0.0;
    return false;
  }

  const Problem& p_;
  std::vector<double> b1_;
  std::size_t nodes_ = 0;
};

// b = sum_j d_j 1_[0,j] with d_j = b_j - b_{j+1}; b1 takes a fraction theta_j
// of every layer, which keeps both parts nonincreasing. The prefix sums of
// b1 are linear in theta:
//   B(m) - cap2[m] <= sum_j theta_j d_j min(j+1, m) <= cap1[m].
std::optional<Split> layer_lp(const Problem& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> layers;
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = p.b[j] - (j + 1 < n ? p.b[j + 1] : 0.0);
    if (d[j] > 0.0) layers.push_back(j);
  }
  const std::size_t nv = layers.size();
  std::vector<double> prefix_b(n + 1, 0.0);
  {
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
      acc.add(p.b[k]);
      prefix_b[k + 1] = static_cast<double>(acc.value());
    }
  }
  // Variables: theta (nv), upper slacks (n), lower surpluses (n), bound
  // slacks (nv).
  const std::size_t cols = nv + n + n + nv;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<double> row(cols, 0.0);
    for (std::size_t v = 0; v < nv; ++v)
      row[v] = d[layers[v]] * static_cast<double>(std::min(layers[v] + 1, m));
    std::vector<double> upper = row;
    upper[nv + (m - 1)] = 1.0;
    rows.push_back(std::move(upper));
    rhs.push_back(p.cap1[m]);
    const double lower = prefix_b[m] - p.cap2[m];
    if (lower > 0.0) {
      row[nv + n + (m - 1)] = -1.0;
      rows.push_back(std::move(row));
      rhs.push_back(lower);
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<double> row(cols, 0.0);
    row[v] = 1.0;
    row[nv + 2 * n + v] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(1.0);
  }
  const auto x = detail::feasible_point(std::move(rows), std::move(rhs), 1e-9);
  if (!x) return std::nullopt;

  Split s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  long double running = 0.0L;
  for (std::size_t v = nv; v-- > 0;) {
    const std::size_t j = layers[v];
    const long double theta = std::clamp((*x)[v], 0.0, 1.0);
    running += theta * d[j];
    const std::size_t lo = v > 0 ? layers[v - 1] + 1 : 0;
    for (std::size_t k = lo; k <= j; ++k) s.b1[k] = static_cast<double>(running);
  }
  for (std::size_t k = 0; k < n; ++k) {
    s.b1[k] = std::min(s.b1[k], p.b[k]);
    s.b2[k] = p.b[k] - s.b1[k];
  }
  return s;
}

bool verify(const Problem& p, const Split& s) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (s.b1[k] < 0.0 || s.b2[k] < 0.0 ||
        std::abs(s.b1[k] + s.b2[k] - p.b[k]) > p.tol)
      return false;
  return first_violation(s.b1, p.cap1, p.tol) == 0 &&
         first_violation(s.b2, p.cap2, p.tol) == 0;
}

}  // namespace

DecompositionCertificate decompose_submajorized(const DecreasingSequence& b,
                                                const DecreasingSequence& a1,
                                                const DecreasingSequence& a2,
                                                Index n) {
  if (n > b.horizon()) throw HorizonError(n - 1, b.horizon());
  if (n > a1.horizon()) throw HorizonError(n - 1, a1.horizon());
  if (n > a2.horizon()) throw HorizonError(n - 1, a2.horizon());

  Problem p;
  p.b = b.sequence().materialize(n);
  const auto a1v = a1.sequence().materialize(n);
  const auto a2v = a2.sequence().materialize(n);
  p.integral = std::all_of(p.b.begin(), p.b.end(), is_integer) &&
               std::all_of(a1v.begin(), a1v.end(), is_integer) &&
               std::all_of(a2v.begin(), a2v.end(), is_integer);
  p.tol = p.integral ? 0.0 : kCertificateTolerance;
  p.cap1 = caps(a1, n);
  p.cap2 = caps(a2, n);

  const auto sum = DecreasingSequence::assume_sorted(add(a1, a2).truncated(n));
  const auto pre = check_submajorized(b, sum, n, p.tol);
  if (!pre.holds)
    throw SubmajorizationError("b is not submajorized by a1 + a2",
                               *pre.first_violation);

  std::optional<Split> split;
  DecompositionPath path = DecompositionPath::kGreedyTransfer;
  split = greedy_transfer(p, b, a1);
  if (split && !verify(p, *split)) split.reset();
  if (!split && p.integral && n <= kExactSearchMaxLength) {
    path = DecompositionPath::kExactIntegerSearch;
    split = IntegerSearch(p).run();
    if (split && !verify(p, *split)) split.reset();
  }
  if (!split && n <= kLpMaxLength) {
    path = DecompositionPath::kLayerLp;
    Problem relaxed = p;
    relaxed.tol = kCertificateTolerance;
    split = layer_lp(relaxed);
    if (split && !verify(relaxed, *split)) split.reset();
  }
  if (!split)
    throw Error("decomposition solver failed on an instance of length " +
                std::to_string(n) + " that satisfies the precondition");

  DecompositionCertificate cert;
  cert.path = path;
  cert.integral = p.integral && path != DecompositionPath::kLayerLp;
  const double tol = cert.integral ? 0.0 : kCertificateTolerance;
  cert.b1 = Sequence::from_values(split->b1, "b1");
  cert.b2 = Sequence::from_values(split->b2, "b2");
  cert.report1 = check_submajorized(decreasing_rearrangement(cert.b1, n), a1, n, tol);
  cert.report2 = check_submajorized(decreasing_rearrangement(cert.b2, n), a2, n, tol);
  return cert;
}

}  // namespace singtrace
