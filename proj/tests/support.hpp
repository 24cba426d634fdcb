#pragma once

// Test-side generators and brute-force oracles. Nothing here calls into the
// library, so the checks stay independent of the code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::size_t pick(std::mt19937_64& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

/// Nonnegative nonincreasing vector of length n with entries in [0, scale].
inline std::vector<double> random_decreasing(std::mt19937_64& g, std::size_t n,
                                             double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(g, 0.0, scale);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

/// Plain Kahan summation in double.
inline double kahan(const std::vector<double>& v, std::size_t count) {
  double sum = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double y = v[k] - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

/// H_n from its asymptotic expansion; error below 1e-18 for n >= 1000.
inline long double harmonic_number(std::uint64_t n) {
  const long double x = static_cast<long double>(n);
  const long double gamma = 0.57721566490153286060651209L;
  const long double x2 = x * x;
  return std::log(x) + gamma + 1.0L / (2 * x) - 1.0L / (12 * x2) +
         1.0L / (120 * x2 * x2) - 1.0L / (252 * x2 * x2 * x2);
}

/// Exact H_n by direct summation, for small n.
inline long double harmonic_direct(std::uint64_t n) {
  long double s = 0.0L;
  for (std::uint64_t k = n; k >= 1; --k) s += 1.0L / static_cast<long double>(k);
  return s;
}

/// max over all size-m subsets of v of their sum (|v| <= 12).
inline double best_subset_sum(const std::vector<double>& v, std::size_t m) {
  double best = m == 0 ? 0.0 : -1.0;
  const std::size_t n = v.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s += v[i];
    best = std::max(best, s);
  }
  return best;
}

/// Top-m sums of v (m = 0..n) by sorting, in long double.
inline std::vector<long double> top_sums(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  std::vector<long double> t(v.size() + 1, 0.0L);
  for (std::size_t k = 0; k < v.size(); ++k) t[k + 1] = t[k] + v[k];
  return t;
}

/// Independent submajorization check of rearranged b against decreasing a.
inline bool submajorized(const std::vector<double>& b, const std::vector<double>& a,
                         long double tol = 0.0L) {
  const auto tb = top_sums(b);
  long double sa = 0.0L;
  for (std::size_t m = 0; m < b.size(); ++m) {
    sa += a[m];
    if (tb[m + 1] > sa + tol) return false;
  }
  return true;
}

using cplx = std::complex<long double>;

/// Characteristic polynomial coefficients of a Hermitian matrix (row-major),
/// by Faddeev-LeVerrier: p(x) = x^n + c[n-1] x^(n-1) + ... + c[0].
inline std::vector<long double> char_poly(const std::vector<cplx>& m, std::size_t n) {
  std::vector<cplx> mk(n * n, 0.0L);  // M_k
  std::vector<cplx> prod(n * n);
  std::vector<long double> c(n + 1, 0.0L);
  c[n] = 1.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I, with M_0 = 0
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += m[i * n + l] * mk[l * n + j];
        prod[i * n + j] = s + (i == j ? cplx(c[n - k + 1]) : cplx(0.0L));
      }
    mk = prod;
    cplx tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += m[i * n + l] * mk[l * n + i];
    c[n - k] = -tr.real() / static_cast<long double>(k);
  }
  return c;
}

/// Roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<cplx> poly_roots(const std::vector<long double>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<cplx> z(n);
  long double radius = 1.0L;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, 1.0L + std::abs(c[k]));
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar(radius, 0.4L + 2.0L * 3.14159265358979323846L * k / n);
  auto eval = [&](cplx x) {
    cplx r = 1.0L;
    for (std::size_t k = n; k-- > 0;) r = r * x + c[k];
    return r;
  };
  for (int it = 0; it < 5000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx den = 1.0L;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= eval(z[i]) / den;
    }
  }
  return z;
}

}  // namespace testing_support
