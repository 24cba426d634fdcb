#include <doctest.h>

#include <fstream>

#include "singtrace/error.hpp"
#include "singtrace/spectra.hpp"
#include "support.hpp"

using namespace singtrace;
namespace ts = testing_support;

namespace {

DenseMatrix random_matrix(std::mt19937_64& g, std::size_t n, bool complex_entries) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = {ts::uniform(g, -1, 1), complex_entries ? ts::uniform(g, -1, 1) : 0.0};
  return m;
}

// Q from Gram-Schmidt on a random complex matrix.
DenseMatrix random_unitary(std::mt19937_64& g, std::size_t n) {
  DenseMatrix m = random_matrix(g, n, true);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < j; ++p) {
      std::complex<double> dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(m(i, p)) * m(i, j);
      for (std::size_t i = 0; i < n; ++i) m(i, j) -= dot * m(i, p);
    }
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(m(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) m(i, j) /= norm;
  }
  return m;
}

DenseMatrix random_positive(std::mt19937_64& g, std::size_t n) {
  const DenseMatrix x = random_matrix(g, n, true);
  return x * x.adjoint();
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("diagonal and zero matrices") {
  const std::vector<double> d{1, 3, 2};
  CHECK(singular_values(DenseMatrix::diagonal(d)).singular_values == std::vector<double>{3, 2, 1});
  const auto z = singular_values(DenseMatrix(4));
  CHECK(z.singular_values == std::vector<double>(4, 0.0));
  const auto s = singular_values(DenseMatrix::diagonal(std::vector<double>{-2, 0.5}));
  CHECK(s.singular_values == std::vector<double>{2, 0.5});
  CHECK_FALSE(s.hermitian_positive);
  CHECK(singular_values(DenseMatrix::diagonal(d)).hermitian_positive);
}

TEST_CASE("singular values match characteristic polynomial roots of A*A") {
  auto g = ts::rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = ts::pick(g, 1, 4);
    const DenseMatrix a = random_matrix(g, n, trial % 2 == 1);
    const DenseMatrix gram = a.adjoint() * a;
    std::vector<ts::cplx> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] = ts::cplx(gram(i, j).real(), gram(i, j).imag());
    std::vector<double> expected;
    for (const auto& z : ts::poly_roots(ts::char_poly(m, n)))
      expected.push_back(std::sqrt(std::max(0.0L, z.real())));
    std::sort(expected.begin(), expected.end(), std::greater<>());
    const auto s = singular_values(a).singular_values;
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(s[k] - expected[k]) < 1e-8);
  }
}

TEST_CASE("unitary invariance") {
  auto g = ts::rng(22);
  for (std::size_t n : {3u, 8u, 24u}) {
    const DenseMatrix a = random_matrix(g, n, true);
    const auto u = random_unitary(g, n);
    const auto v = random_unitary(g, n);
    const auto s = singular_values(a).singular_values;
    const auto t = singular_values(u * a * v).singular_values;
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(s[k] - t[k]) <= 1e-9 * s[0]);
  }
}

TEST_CASE("well-conditioned inputs reach 1e-10 relative accuracy") {
  auto g = ts::rng(23);
  const std::size_t n = 16;
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = 1.0 + static_cast<double>(n - k);
  const auto u = random_unitary(g, n);
  const auto v = random_unitary(g, n);
  const auto s = singular_values(u * DenseMatrix::diagonal(d) * v).singular_values;
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(s[k] - d[k]) / d[k] < 1e-10);
}

TEST_CASE("positive hermitian flag") {
  auto g = ts::rng(24);
  CHECK(singular_values(random_positive(g, 6)).hermitian_positive);
  CHECK_FALSE(singular_values(random_matrix(g, 6, true)).hermitian_positive);
}

TEST_CASE("non-finite entries and bad dimensions are rejected") {
  DenseMatrix m(2);
  m(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(singular_values(m), ArgumentError);
  CHECK_THROWS_AS(DenseMatrix(0), ArgumentError);
  CHECK_THROWS_AS(DenseMatrix(kMaxDimension + 1), ArgumentError);
}

TEST_CASE("distribution function") {
  SpectralData s;
  s.singular_values = {3, 2, 1};
  CHECK(distribution_function(s, 1.5) == 2);
  CHECK(distribution_function(s, 3) == 0);
  CHECK(distribution_function(s, 10) == 0);
  CHECK(distribution_function(s, 0) == 3);
  CHECK_THROWS_AS(distribution_function(s, -1), ArgumentError);
}

TEST_CASE("inf{s : d(s) <= t} recovers mu(floor t)") {
  auto g = ts::rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    SpectralData s;
    const std::size_t n = ts::pick(g, 1, 12);
    for (std::size_t k = 0; k < n; ++k) s.singular_values.push_back(static_cast<double>(ts::pick(g, 0, 5)));
    std::sort(s.singular_values.begin(), s.singular_values.end(), std::greater<>());
    // d is a right-continuous step function that only moves at the values, so
    // the infimum is attained on the grid {0} ∪ {mu(k)}
    std::vector<double> grid{0.0};
    grid.insert(grid.end(), s.singular_values.begin(), s.singular_values.end());
    std::sort(grid.begin(), grid.end());
    for (double t = 0; t < static_cast<double>(n); t += 0.5) {
      double inf = grid.back();
      for (double x : grid)
        if (distribution_function(s, x) <= t) inf = std::min(inf, x);
      CHECK(inf == s.singular_values[static_cast<std::size_t>(t)]);
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
      CHECK(distribution_function(s, grid[i]) <= distribution_function(s, grid[i - 1]));
  }
}

TEST_CASE("direct sums merge spectra") {
  SpectralData a;
  a.singular_values = {3, 1};
  SpectralData b;
  b.singular_values = {2, 0};
  CHECK(direct_sum(a, b).singular_values == std::vector<double>{3, 2, 1, 0});
  SpectralData z;
  z.singular_values = {0, 0, 0};
  CHECK(direct_sum(a, z).singular_values == std::vector<double>{3, 1, 0, 0, 0});
  CHECK_THROWS_AS(direct_power(a, 0), ArgumentError);
}

TEST_CASE("A^(+3) equals sigma_3 mu(A)") {
  auto g = ts::rng(26);
  const auto s = singular_values(random_matrix(g, 5, true));
  const auto p = direct_power(s, 3);
  const auto up = dilate_up(s.as_sequence(5), 3);
  for (Index k = 0; k < 15; ++k) CHECK(p.singular_values[k] == up(k));
  // and the same through the pairwise merge
  const auto merged = direct_sum(direct_sum(s, s), s);
  CHECK(merged.singular_values == p.singular_values);
}

TEST_CASE("padding is exactly zero") {
  SpectralData s;
  s.singular_values = {2, 1};
  const auto seq = s.as_sequence(6);
  CHECK(seq(1) == 1.0);
  for (Index k = 2; k < 6; ++k) CHECK(seq(k) == 0.0);
  CHECK_THROWS_AS(s.as_sequence(1), ArgumentError);
}

TEST_CASE("submajorization sandwich on random positive pairs") {
  auto g = ts::rng(27);
  for (std::size_t n : {4u, 16u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto r = submajorization_chain(random_positive(g, n), random_positive(g, n));
      CHECK(r.holds);
      CHECK(r.lower_slack >= -1e-8);
      CHECK(r.upper_slack >= -1e-8);
    }
  }
}

TEST_CASE("matrix csv") {
  const std::string path = "matrix_test.csv";
  {
    std::ofstream f(path);
    f << "1,0\n0,-3\n";
  }
  CHECK(singular_values(read_matrix_csv(path)).singular_values == std::vector<double>{3, 1});
  {
    std::ofstream f(path);
    f << "1,0\n0\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(path), ArgumentError);
  {
    std::ofstream f(path);
    f << "1,2\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(path), ArgumentError);
}

}  // TEST_SUITE
