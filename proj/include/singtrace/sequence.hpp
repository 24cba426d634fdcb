#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace singtrace {

using Index = std::uint64_t;

/// Largest explicit buffer the library will allocate.
inline constexpr Index kExplicitCap = 10'000'000;
/// Horizon given to generator-backed model sequences unless told otherwise.
inline constexpr Index kDefaultModelHorizon = 100'000'000;

/// A nonnegative real sequence evaluable on [0, horizon).
///
/// Three backings are supported: an explicit (shared, immutable) buffer, a
/// named generator, and an anonymous closure over the index (used for lazy
/// views such as dilations). Copies are cheap and share state; all methods
/// are const and safe to call concurrently.
class Sequence {
 public:
  enum class Kind { kExplicit, kGenerator, kClosure };
  using Evaluator = std::function<double(Index)>;

  /// Empty explicit sequence (horizon 0).
  Sequence();

  /// Explicit buffer; every entry must be finite and >= 0.
  static Sequence from_values(std::vector<double> values,
                              std::string label = "explicit");
  static Sequence generator(std::string name, Index horizon, Evaluator f);
  static Sequence closure(Index horizon, Evaluator f,
                          std::string label = "closure");

  /// Entry k. Throws HorizonError for k >= horizon() and ArgumentError if a
  /// generator yields a negative or non-finite value.
  double operator()(Index k) const;

  Index horizon() const { return horizon_; }
  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  /// Backing buffer of an explicit sequence; empty span otherwise.
  std::span<const double> values() const;

  /// First n entries as a vector (n <= horizon, n <= kExplicitCap).
  std::vector<double> materialize(Index n) const;

  /// Same entries, horizon reduced to n.
  Sequence truncated(Index n) const;

 private:
  Kind kind_ = Kind::kExplicit;
  Index horizon_ = 0;
  std::string label_ = "explicit";
  std::shared_ptr<const std::vector<double>> buffer_;
  Evaluator eval_;
};

/// A Sequence whose entries are nonincreasing (and nonnegative).
class DecreasingSequence {
 public:
  DecreasingSequence() = default;

  /// Validates the ordering: exhaustively for explicit buffers, and on the
  /// first 65536 entries plus a geometric sample otherwise. Throws
  /// ConstructionError on violation.
  explicit DecreasingSequence(Sequence s);

  /// Wraps a sequence the caller knows to be nonincreasing.
  static DecreasingSequence assume_sorted(Sequence s);

  double operator()(Index k) const { return seq_(k); }
  Index horizon() const { return seq_.horizon(); }
  const std::string& label() const { return seq_.label(); }
  const Sequence& sequence() const { return seq_; }
  operator const Sequence&() const { return seq_; }  // NOLINT

 private:
  Sequence seq_;
};

/// First n entries of x sorted nonincreasingly.
DecreasingSequence decreasing_rearrangement(const Sequence& x, Index n);

/// output(m) = sum_{k<=m} x(k) for m < n, accumulated with compensation and
/// kept nondecreasing.
Sequence prefix_sums(const Sequence& x, Index n);

/// Compensated prefix sums of x evaluated only at the given (sorted,
/// strictly increasing) indices. Streams over [0, last checkpoint] in fixed
/// chunks, in parallel, without materializing x; the result does not depend
/// on the thread count.
std::vector<double> prefix_sums_at(const Sequence& x,
                                   std::span<const Index> checkpoints);

/// sigma_n: every entry repeated n times; horizon n * horizon(x).
Sequence dilate_up(const Sequence& x, Index n);
DecreasingSequence dilate_up(const DecreasingSequence& x, Index n);

/// sigma_{1/2}: averages of consecutive pairs; horizon floor(N/2).
Sequence dilate_half(const Sequence& x);

Sequence add(const Sequence& x, const Sequence& y);
Sequence multiply(const Sequence& x, const Sequence& y);
Sequence scale(const Sequence& x, double c);
Sequence min_with(const Sequence& x, double c);

/// One nonnegative decimal per line, index order, no header. Blank lines are
/// ignored.
Sequence read_sequence_csv(const std::string& path);

}  // namespace singtrace
