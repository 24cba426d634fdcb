#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "singtrace/sequence.hpp"

namespace singtrace {

struct SubmajorizationReport {
  bool holds = true;
  std::optional<Index> first_violation;
  /// slack[m] = min over m' <= m of (sum_{k<=m'} a(k) - sum_{k<=m'} b(k)).
  std::vector<double> slack;
};

/// b ≺≺ a on the first n entries: every prefix sum of b is at most the
/// matching prefix sum of a, up to an absolute tolerance.
SubmajorizationReport check_submajorized(const DecreasingSequence& b,
                                         const DecreasingSequence& a, Index n,
                                         double tol = 0.0);

/// The nonincreasing sequence whose prefix sums are min{A(m), B(m)}. Along
/// stretches where one curve stays below, entries are copied from that
/// sequence; only switch points take a difference of prefix sums.
DecreasingSequence wedge(const DecreasingSequence& a,
                         const DecreasingSequence& b, Index n);

/// y1 = min{y, x1}, y2 = y - y1 on the common horizon. Throws ArgumentError
/// naming the index where 0 <= y <= x1 + x2 fails.
std::pair<Sequence, Sequence> split_pointwise(const Sequence& y,
                                              const Sequence& x1,
                                              const Sequence& x2);

/// Sum of the m largest of x(0..horizon-1).
double top_m_sum(const Sequence& x, Index m);

enum class DecompositionPath { kGreedyTransfer, kExactIntegerSearch, kLayerLp };
std::string to_string(DecompositionPath p);

struct DecompositionCertificate {
  Sequence b1;
  Sequence b2;
  /// Checks of the decreasing rearrangements of b1 and b2 against a1, a2.
  SubmajorizationReport report1;
  SubmajorizationReport report2;
  DecompositionPath path = DecompositionPath::kGreedyTransfer;
  bool integral = false;  ///< inputs were integers and b1, b2 are too
};

/// Absolute slack allowed on real-valued certificates.
inline constexpr double kCertificateTolerance = 1e-12;

/// Splits b = b1 + b2 with b1 ≺≺ a1 and b2 ≺≺ a2 (after rearrangement).
///
/// Tries, in order: a greedy transfer that starts from min{wedge(b, a1), b}
/// and moves mass between the parts; for integer inputs with n <= 12, an
/// exhaustive integer search; a linear program over layer fractions of b.
/// Integer inputs are checked exactly. Throws SubmajorizationError when
/// b ≺≺ a1 + a2 fails.
DecompositionCertificate decompose_submajorized(const DecreasingSequence& b,
                                                const DecreasingSequence& a1,
                                                const DecreasingSequence& a2,
                                                Index n);

}  // namespace singtrace
