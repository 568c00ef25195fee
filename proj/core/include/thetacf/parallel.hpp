#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace thetacf {

// Sum `values[first, last)` by recursive halving.  The addition tree depends
// only on the element count, never on thread scheduling, so results are
// byte-identical for any worker count.
inline double deterministicPairwiseSum(const double* values, std::size_t first,
                                       std::size_t last) {
  std::size_t n = last - first;
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i) acc += values[i];
    return acc;
  }
  std::size_t mid = first + n / 2;
  return deterministicPairwiseSum(values, first, mid) +
         deterministicPairwiseSum(values, mid, last);
}

inline double deterministicPairwiseSum(const std::vector<double>& values) {
  return deterministicPairwiseSum(values.data(), 0, values.size());
}

// Fixed block size for streaming reductions; lets independent workers each
// produce per-block partial sums that are later combined in index order.
inline constexpr std::size_t kReductionBlock = 4096;

// Evaluate term(i) for i in [0, count) and sum the results with a fixed
// addition tree: each 4096-element block is pairwise-summed, then the block
// sums are pairwise-summed in block order.  `jobs` only controls how blocks
// are distributed over threads; the returned value is identical for any jobs.
inline double deterministicBlockSum(std::size_t count,
                                    const std::function<double(std::size_t)>& term,
                                    unsigned jobs) {
  if (count == 0) return 0.0;
  std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> blockSums(blocks, 0.0);
  auto runBlock = [&](std::size_t b) {
    std::size_t lo = b * kReductionBlock;
    std::size_t hi = std::min(count, lo + kReductionBlock);
    std::vector<double> terms;
    terms.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) terms.push_back(term(i));
    blockSums[b] = deterministicPairwiseSum(terms);
  };
  if (jobs <= 1 || blocks == 1) {
    for (std::size_t b = 0; b < blocks; ++b) runBlock(b);
  } else {
    unsigned workers = std::min<std::size_t>(jobs, blocks);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) runBlock(b);
      });
    }
    for (auto& t : pool) t.join();
  }
  return deterministicPairwiseSum(blockSums);
}

// Run body(i) for i in [0, count) across `jobs` threads with a static stride
// schedule.  Bodies must write only to disjoint slots.
inline void parallelFor(std::size_t count,
                        const std::function<void(std::size_t)>& body,
                        unsigned jobs) {
  if (count == 0) return;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace thetacf
