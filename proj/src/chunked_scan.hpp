#pragma once

#include <algorithm>
#include <vector>

#include "singtrace/parallel.hpp"
#include "singtrace/sequence.hpp"
#include "singtrace/summation.hpp"

namespace singtrace::detail {

inline constexpr Index kScanChunk = Index{1} << 16;

inline Index chunk_count(Index n) { return (n + kScanChunk - 1) / kScanChunk; }

/// offsets[c] is the compensated sum of x over [0, c * kScanChunk). Chunk
/// totals are computed in parallel and folded in chunk order, so the result
/// is independent of the thread count.
inline std::vector<CompensatedSum> chunk_offsets(const Sequence& x, Index n) {
  const Index chunks = chunk_count(n);
  std::vector<long double> totals(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const Index begin = c * kScanChunk;
    const Index end = std::min(begin + kScanChunk, n);
    CompensatedSum acc;
    for (Index k = begin; k < end; ++k) acc.add(x(k));
    totals[c] = acc.value();
  });
  std::vector<CompensatedSum> offsets(chunks);
  CompensatedSum running;
  for (Index c = 0; c < chunks; ++c) {
    offsets[c] = running;
    running.add(totals[c]);
  }
  return offsets;
}

}  // namespace singtrace::detail
