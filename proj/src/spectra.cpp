#include "singtrace/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "singtrace/error.hpp"
#include "singtrace/summation.hpp"

namespace singtrace {
namespace {

void check_dimension(std::size_t n) {
  if (n == 0 || n > kMaxDimension)
    throw ArgumentError("matrix dimension " + std::to_string(n) +
                        " outside [1, " + std::to_string(kMaxDimension) + "]");
}

constexpr int kMaxSweeps = 80;
constexpr double kPairTolerance = 1e-15;

// Cholesky of A + shift*I; false as soon as a pivot is not positive.
bool cholesky_succeeds(const DenseMatrix& a, double shift) {
  const std::size_t n = a.dim();
  std::vector<DenseMatrix::Scalar> l(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real() + shift;
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * n + k]);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      DenseMatrix::Scalar s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * std::conj(l[j * n + k]);
      l[i * n + j] = s / ljj;
    }
  }
  return true;
}

std::vector<double> prefix(const std::vector<double>& v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < v.size()) acc.add(v[k]);
    out[k] = static_cast<double>(acc.value());
  }
  return out;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), a_(n * n) {
  check_dimension(n);
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<Scalar> row_major)
    : n_(n), a_(std::move(row_major)) {
  check_dimension(n);
  if (a_.size() != n * n)
    throw ArgumentError("expected " + std::to_string(n * n) + " entries, got " +
                        std::to_string(a_.size()));
}

DenseMatrix DenseMatrix::from_real(std::size_t n,
                                   std::span<const double> row_major) {
  std::vector<Scalar> a(row_major.begin(), row_major.end());
  return DenseMatrix(n, std::move(a));
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix m(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double DenseMatrix::frobenius_norm() const {
  CompensatedSum acc;
  for (const auto& z : a_) acc.add(std::norm(z));
  return std::sqrt(static_cast<double>(acc.value()));
}

bool DenseMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y) {
  if (x.n_ != y.n_) throw ArgumentError("dimension mismatch in matrix sum");
  DenseMatrix m(x.n_);
  for (std::size_t k = 0; k < x.a_.size(); ++k) m.a_[k] = x.a_[k] + y.a_[k];
  return m;
}

DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
  if (x.n_ != y.n_) throw ArgumentError("dimension mismatch in matrix product");
  const std::size_t n = x.n_;
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const auto xik = x(i, k);
      if (xik == DenseMatrix::Scalar{}) continue;
      for (std::size_t j = 0; j < n; ++j) m(i, j) += xik * y(k, j);
    }
  return m;
}

DecreasingSequence SpectralData::as_sequence(Index horizon) const {
  if (horizon < singular_values.size())
    throw ArgumentError("horizon shorter than the matrix dimension");
  std::vector<double> v(horizon, 0.0);
  std::copy(singular_values.begin(), singular_values.end(), v.begin());
  return DecreasingSequence::assume_sorted(
      Sequence::from_values(std::move(v), "mu"));
}

SpectralData singular_values(const DenseMatrix& a) {
  const std::size_t n = a.dim();
  // Column-major working copy: column j occupies w[j*n, (j+1)*n).
  std::vector<DenseMatrix::Scalar> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ArgumentError("matrix entry (" + std::to_string(i) + "," +
                            std::to_string(j) + ") is not finite");
      w[j * n + i] = z;
    }

  std::vector<double> norms(n);
  auto column_norm = [&](std::size_t j) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(std::norm(w[j * n + i]));
    return static_cast<double>(acc.value());
  };
  for (std::size_t j = 0; j < n; ++j) norms[j] = column_norm(j);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto* cp = &w[p * n];
        auto* cq = &w[q * n];
        DenseMatrix::Scalar gamma{};
        for (std::size_t i = 0; i < n; ++i) gamma += std::conj(cp[i]) * cq[i];
        const double g = std::abs(gamma);
        const double alpha = norms[p];
        const double beta = norms[q];
        if (g == 0.0 || g <= kPairTolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const DenseMatrix::Scalar phase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const auto xp = cp[i];
          const auto xq = phase * cq[i];
          cp[i] = c * xp - s * xq;
          cq[i] = s * xp + c * xq;
        }
        norms[p] = column_norm(p);
        norms[q] = column_norm(q);
      }
    }
    if (!rotated) break;
  }

  SpectralData out;
  out.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.singular_values[j] = std::sqrt(norms[j]);
  std::sort(out.singular_values.begin(), out.singular_values.end(),
            std::greater<>());

  const double scale = a.frobenius_norm();
  out.hermitian_positive =
      a.is_hermitian(1e-12 * std::max(scale, 1.0)) &&
      cholesky_succeeds(a, 1e-12 * std::max(scale, 1e-300));
  return out;
}

Index distribution_function(const SpectralData& s, double threshold) {
  if (!(threshold >= 0.0))
    throw ArgumentError("distribution function needs s >= 0");
  const auto& v = s.singular_values;
  // v is nonincreasing: count the leading block strictly above threshold
  const auto it = std::partition_point(v.begin(), v.end(),
                                       [&](double x) { return x > threshold; });
  return static_cast<Index>(it - v.begin());
}

SpectralData direct_sum(const SpectralData& a, const SpectralData& b) {
  SpectralData out;
  out.singular_values.resize(a.dimension() + b.dimension());
  std::merge(a.singular_values.begin(), a.singular_values.end(),
             b.singular_values.begin(), b.singular_values.end(),
             out.singular_values.begin(), std::greater<>());
  out.hermitian_positive = a.hermitian_positive && b.hermitian_positive;
  return out;
}

SpectralData direct_power(const SpectralData& a, std::size_t copies) {
  if (copies == 0) throw ArgumentError("direct power needs at least one copy");
  SpectralData out;
  out.hermitian_positive = a.hermitian_positive;
  out.singular_values.reserve(a.dimension() * copies);
  for (double v : a.singular_values)
    out.singular_values.insert(out.singular_values.end(), copies, v);
  return out;
}

SandwichReport submajorization_chain(const DenseMatrix& a, const DenseMatrix& b,
                                     double tol) {
  const std::size_t n = a.dim();
  SandwichReport report;
  const SpectralData ma = singular_values(a);
  const SpectralData mb = singular_values(b);
  report.sum = singular_values(a + b);

  std::vector<double> pointwise(n);
  for (std::size_t k = 0; k < n; ++k)
    pointwise[k] = ma.singular_values[k] + mb.singular_values[k];
  const auto sum_prefix = prefix(report.sum.singular_values, n);
  const auto mid_prefix = prefix(pointwise, n);

  report.lower_slack = std::numeric_limits<double>::infinity();
  report.upper_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = sum_prefix[k];
    const double mid = mid_prefix[k];
    const double hi = sum_prefix[std::min(2 * k + 1, n - 1)];
    const double lower = (mid - lo) / std::max({std::abs(mid), std::abs(lo), 1e-300});
    const double upper = (hi - mid) / std::max({std::abs(hi), std::abs(mid), 1e-300});
    report.lower_slack = std::min(report.lower_slack, lower);
    report.upper_slack = std::min(report.upper_slack, upper);
  }
  report.holds = report.lower_slack >= -tol && report.upper_slack >= -tol;
  return report;
}

DenseMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open matrix file '" + path + "'");
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos)
        throw ArgumentError(path + ": bad matrix entry '" + cell + "'");
      values.push_back(v);
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw ArgumentError(path + ": ragged matrix rows");
    ++rows;
  }
  if (rows != cols) throw ArgumentError(path + ": matrix is not square");
  return DenseMatrix::from_real(rows, values);
}

}  // namespace singtrace
