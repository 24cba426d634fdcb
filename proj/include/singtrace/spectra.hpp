#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "singtrace/sequence.hpp"

namespace singtrace {

inline constexpr std::size_t kMaxDimension = 512;

/// Square complex matrix, row-major, dimension in [1, kMaxDimension].
class DenseMatrix {
 public:
  using Scalar = std::complex<double>;

  explicit DenseMatrix(std::size_t n);
  DenseMatrix(std::size_t n, std::vector<Scalar> row_major);

  static DenseMatrix from_real(std::size_t n, std::span<const double> row_major);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return n_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  DenseMatrix adjoint() const;
  double frobenius_norm() const;
  bool is_hermitian(double tol) const;

  friend DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y);
  friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y);

 private:
  std::size_t n_;
  std::vector<Scalar> a_;
};

/// Singular values mu(k, A) of a matrix, nonincreasing.
struct SpectralData {
  std::vector<double> singular_values;
  bool hermitian_positive = false;

  std::size_t dimension() const { return singular_values.size(); }
  /// mu(A) padded with exact zeros up to `horizon` (>= dimension()).
  DecreasingSequence as_sequence(Index horizon) const;
};

/// Eigenvalues of |A| = (A*A)^{1/2}, by one-sided (Hestenes) Jacobi on the
/// columns of A. Throws ArgumentError on non-finite entries.
SpectralData singular_values(const DenseMatrix& a);

/// d_A(s) = #{k : mu(k, A) > s}.
Index distribution_function(const SpectralData& s, double threshold);

/// mu(A ⊕ B): merged multiset, re-sorted.
SpectralData direct_sum(const SpectralData& a, const SpectralData& b);

/// mu(A^{⊕ copies}) = sigma_copies mu(A).
SpectralData direct_power(const SpectralData& a, std::size_t copies);

/// Prefix-level check of mu(A+B) ≺≺ mu(A)+mu(B) ≺≺ 2 sigma_{1/2} mu(A+B).
struct SandwichReport {
  bool holds = true;
  /// min over n of (sum_{k<=n}(mu(k,A)+mu(k,B)) - sum_{k<=n} mu(k,A+B)),
  /// relative to the larger side.
  double lower_slack = 0.0;
  /// min over n of (sum_{k<=2n+1} mu(k,A+B) - sum_{k<=n}(mu(k,A)+mu(k,B))),
  /// relative to the larger side.
  double upper_slack = 0.0;
  SpectralData sum;  ///< mu(A+B)
};

/// Both inequalities are checked for every n < dim with relative tolerance
/// `tol` (a prefix past the matrix dimension reads zeros).
SandwichReport submajorization_chain(const DenseMatrix& a, const DenseMatrix& b,
                                     double tol = 1e-8);

/// n rows of n comma-separated real values.
DenseMatrix read_matrix_csv(const std::string& path);

}  // namespace singtrace
