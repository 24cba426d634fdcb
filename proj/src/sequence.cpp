#include "singtrace/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "chunked_scan.hpp"
#include "singtrace/error.hpp"
#include "singtrace/parallel.hpp"
#include "singtrace/summation.hpp"

namespace singtrace {
namespace {

constexpr Index kExhaustiveOrderCheck = Index{1} << 16;

void require_entry(double v, Index k) {
  if (!std::isfinite(v) || v < 0.0)
    throw ArgumentError("sequence entry " + std::to_string(k) +
                        " is negative or not finite");
}

Index checked_product(Index a, Index b) {
  if (a != 0 && b > std::numeric_limits<Index>::max() / a)
    throw ArgumentError("dilated horizon overflows");
  return a * b;
}

}  // namespace

Sequence::Sequence()
    : buffer_(std::make_shared<const std::vector<double>>()) {}

Sequence Sequence::from_values(std::vector<double> values, std::string label) {
  if (values.size() > kExplicitCap)
    throw ArgumentError("explicit buffer of " + std::to_string(values.size()) +
                        " entries exceeds the cap of " +
                        std::to_string(kExplicitCap));
  for (Index k = 0; k < values.size(); ++k) require_entry(values[k], k);
  Sequence s;
  s.kind_ = Kind::kExplicit;
  s.horizon_ = values.size();
  s.label_ = std::move(label);
  s.buffer_ = std::make_shared<const std::vector<double>>(std::move(values));
  return s;
}

Sequence Sequence::generator(std::string name, Index horizon, Evaluator f) {
  Sequence s;
  s.kind_ = Kind::kGenerator;
  s.horizon_ = horizon;
  s.label_ = std::move(name);
  s.buffer_.reset();
  s.eval_ = std::move(f);
  return s;
}

Sequence Sequence::closure(Index horizon, Evaluator f, std::string label) {
  Sequence s = generator(std::move(label), horizon, std::move(f));
  s.kind_ = Kind::kClosure;
  return s;
}

double Sequence::operator()(Index k) const {
  if (k >= horizon_) throw HorizonError(k, horizon_);
  if (kind_ == Kind::kExplicit) return (*buffer_)[k];
  const double v = eval_(k);
  require_entry(v, k);
  return v;
}

std::span<const double> Sequence::values() const {
  if (kind_ != Kind::kExplicit) return {};
  return {buffer_->data(), buffer_->size()};
}

std::vector<double> Sequence::materialize(Index n) const {
  if (n > horizon_) throw HorizonError(n - 1, horizon_);
  if (n > kExplicitCap)
    throw ArgumentError("cannot materialize " + std::to_string(n) +
                        " entries (cap " + std::to_string(kExplicitCap) + ")");
  if (kind_ == Kind::kExplicit)
    return {buffer_->begin(), buffer_->begin() + static_cast<std::ptrdiff_t>(n)};
  std::vector<double> out(n);
  for (Index k = 0; k < n; ++k) out[k] = (*this)(k);
  return out;
}

Sequence Sequence::truncated(Index n) const {
  if (n > horizon_) throw HorizonError(n - 1, horizon_);
  Sequence s = *this;
  s.horizon_ = n;
  return s;
}

DecreasingSequence::DecreasingSequence(Sequence s) : seq_(std::move(s)) {
  const Index n = seq_.horizon();
  auto fail = [&](Index k) {
    throw ConstructionError("sequence '" + seq_.label() +
                            "' increases at index " + std::to_string(k));
  };
  const Index dense = seq_.kind() == Sequence::Kind::kExplicit
                          ? n
                          : std::min(n, kExhaustiveOrderCheck);
  double prev = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < dense; ++k) {
    const double v = seq_(k);
    if (v > prev) fail(k);
    prev = v;
  }
  if (dense == n) return;
  // Sparse probe of the remaining range: k = 2^j and 3 * 2^(j-1).
  for (Index base = kExhaustiveOrderCheck; base < n && base != 0; base *= 2) {
    for (Index k : {base, base + base / 2}) {
      if (k >= n) break;
      const double v = seq_(k);
      if (v > prev) fail(k);
      prev = v;
    }
  }
  if (seq_(n - 1) > prev) fail(n - 1);
}

DecreasingSequence DecreasingSequence::assume_sorted(Sequence s) {
  DecreasingSequence d;
  d.seq_ = std::move(s);
  return d;
}

DecreasingSequence decreasing_rearrangement(const Sequence& x, Index n) {
  std::vector<double> v = x.materialize(n);
  std::sort(v.begin(), v.end(), std::greater<>());
  return DecreasingSequence::assume_sorted(
      Sequence::from_values(std::move(v), "rearranged(" + x.label() + ")"));
}

Sequence prefix_sums(const Sequence& x, Index n) {
  if (n > x.horizon()) throw HorizonError(n - 1, x.horizon());
  if (n > kExplicitCap)
    throw ArgumentError("prefix sums beyond the explicit cap; use "
                        "prefix_sums_at for streaming checkpoints");
  std::vector<double> out(n);
  const auto offsets = detail::chunk_offsets(x, n);
  parallel_for(offsets.size(), [&](std::size_t c) {
    CompensatedSum acc = offsets[c];
    const Index end = std::min(n, (c + 1) * detail::kScanChunk);
    for (Index k = c * detail::kScanChunk; k < end; ++k) {
      acc.add(x(k));
      out[k] = static_cast<double>(acc.value());
    }
  });
  // the rounded compensated value can jitter by one ulp; the true sums of a
  // nonnegative sequence never decrease
  for (Index k = 1; k < n; ++k) out[k] = std::max(out[k], out[k - 1]);
  return Sequence::from_values(std::move(out), "prefix(" + x.label() + ")");
}

std::vector<double> prefix_sums_at(const Sequence& x,
                                   std::span<const Index> checkpoints) {
  if (checkpoints.empty()) return {};
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1])
      throw ArgumentError("checkpoints must be strictly increasing");
  const Index last = checkpoints.back();
  if (last >= x.horizon()) throw HorizonError(last, x.horizon());

  using detail::kScanChunk;
  const auto offsets = detail::chunk_offsets(x, last + 1);
  const Index chunks = offsets.size();

  // first_in_chunk[c]: first checkpoint at or after chunk c.
  std::vector<std::size_t> first_in_chunk(chunks + 1, checkpoints.size());
  for (std::size_t i = checkpoints.size(); i-- > 0;)
    first_in_chunk[checkpoints[i] / kScanChunk] = i;
  for (Index c = chunks; c-- > 0;)
    first_in_chunk[c] = std::min(first_in_chunk[c], first_in_chunk[c + 1]);

  std::vector<double> out(checkpoints.size());
  parallel_for(chunks, [&](std::size_t c) {
    std::size_t i = first_in_chunk[c];
    if (i >= checkpoints.size() || checkpoints[i] / kScanChunk != c) return;
    CompensatedSum acc = offsets[c];
    Index k = c * kScanChunk;
    for (; i < checkpoints.size() && checkpoints[i] / kScanChunk == c; ++i) {
      for (; k <= checkpoints[i]; ++k) acc.add(x(k));
      out[i] = static_cast<double>(acc.value());
    }
  });
  for (std::size_t i = 1; i < out.size(); ++i)
    out[i] = std::max(out[i], out[i - 1]);
  return out;
}

Sequence dilate_up(const Sequence& x, Index n) {
  if (n == 0) throw ArgumentError("dilation factor must be >= 1");
  if (n == 1) return x;
  return Sequence::closure(
      checked_product(x.horizon(), n), [x, n](Index k) { return x(k / n); },
      "dilate_up(" + x.label() + "," + std::to_string(n) + ")");
}

DecreasingSequence dilate_up(const DecreasingSequence& x, Index n) {
  return DecreasingSequence::assume_sorted(dilate_up(x.sequence(), n));
}

Sequence dilate_half(const Sequence& x) {
  if (x.horizon() < 2)
    throw ArgumentError("sigma_1/2 needs a horizon of at least 2");
  return Sequence::closure(
      x.horizon() / 2,
      [x](Index j) { return (x(2 * j) + x(2 * j + 1)) / 2.0; },
      "dilate_half(" + x.label() + ")");
}

Sequence add(const Sequence& x, const Sequence& y) {
  return Sequence::closure(
      std::min(x.horizon(), y.horizon()),
      [x, y](Index k) { return x(k) + y(k); },
      "add(" + x.label() + "," + y.label() + ")");
}

Sequence multiply(const Sequence& x, const Sequence& y) {
  return Sequence::closure(
      std::min(x.horizon(), y.horizon()),
      [x, y](Index k) { return x(k) * y(k); },
      "mul(" + x.label() + "," + y.label() + ")");
}

Sequence scale(const Sequence& x, double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ArgumentError("scale factor must be finite and >= 0");
  return Sequence::closure(
      x.horizon(), [x, c](Index k) { return c * x(k); }, "scale(" + x.label() + ")");
}

Sequence min_with(const Sequence& x, double c) {
  if (!(c >= 0.0)) throw ArgumentError("min cutoff must be >= 0");
  return Sequence::closure(
      x.horizon(), [x, c](Index k) { return std::min(c, x(k)); },
      "min(" + x.label() + ")");
}

Sequence read_sequence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open sequence file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string field = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || !std::isfinite(v) || v < 0.0)
      throw ArgumentError(path + ":" + std::to_string(line_no) +
                          ": expected a nonnegative decimal, got '" + field +
                          "'");
    values.push_back(v);
  }
  return Sequence::from_values(std::move(values), "file:" + path);
}

}  // namespace singtrace
