#include "thetacf/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thetacf/expansion.hpp"
#include "thetacf/parallel.hpp"
#include "thetacf/rng.hpp"

namespace thetacf {

namespace {

// Leaves stored in memory up to this count (one double each); beyond it the
// enumeration is re-walked for every bisection iteration.
constexpr std::size_t kStoreThreshold = std::size_t(1) << 24;

std::size_t cylinderCountChecked(std::int64_t m, std::int64_t M,
                                 std::size_t depth, std::size_t budget) {
  if (M <= m) throw std::domain_error("digit ceiling must exceed m");
  if (depth == 0) throw std::domain_error("enumeration depth must be >= 1");
  unsigned __int128 count = 1;
  const unsigned __int128 cap = budget;
  for (std::size_t i = 0; i < depth; ++i) {
    count *= static_cast<unsigned __int128>(M - m + 1);
    if (count > cap)
      throw std::domain_error("enumeration budget exceeded: (M-m+1)^depth > " +
                              std::to_string(budget));
  }
  return static_cast<std::size_t>(count);
}

// Depth-first walk over all digit words, calling leaf(lnLength) once per
// word in lexicographic digit order.  Registers R_n = l_n R_{n-1} + m R_{n-2}
// stay in 64-bit integers with an overflow guard.
template <typename Leaf>
void walkCylinders(std::int64_t m, std::int64_t M, std::size_t depth,
                   LengthMode mode, Leaf&& leaf) {
  const double lnM = std::log(static_cast<double>(m));
  const double halfPow = (static_cast<double>(depth) - 0.5) * lnM;
  const double lowerAdj = lnM - std::log(static_cast<double>(m + 1));

  auto recurse = [&](auto&& self, std::size_t level, std::int64_t r,
                     std::int64_t rPrev) -> void {
    if (level == depth) {
      double lnLen;
      switch (mode) {
        case LengthMode::Exact:
          lnLen = halfPow - std::log(static_cast<double>(r)) -
                  std::log(static_cast<double>(r + rPrev));
          break;
        case LengthMode::Upper:
          lnLen = halfPow - 2.0 * std::log(static_cast<double>(r));
          break;
        case LengthMode::Lower:
          lnLen = halfPow - 2.0 * std::log(static_cast<double>(r)) + lowerAdj;
          break;
        default:
          throw std::logic_error("unknown length mode");
      }
      leaf(lnLen);
      return;
    }
    for (std::int64_t d = m; d <= M; ++d) {
      __int128 next = static_cast<__int128>(d) * r +
                      static_cast<__int128>(m) * rPrev;
      if (next > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error(
            "cylinder registers exceed 64 bits at this depth");
      self(self, level + 1, static_cast<std::int64_t>(next), r);
    }
  };
  recurse(recurse, 0, 1, 0);
}

// Streamed deterministic sum of exp(s*lnLen) over one full walk: fixed 4096
// blocks, pairwise inside each block and across block sums.
double streamedSum(std::int64_t m, std::int64_t M, std::size_t depth,
                   LengthMode mode, double s) {
  std::vector<double> buffer;
  buffer.reserve(kReductionBlock);
  std::vector<double> blockSums;
  walkCylinders(m, M, depth, mode, [&](double lnLen) {
    buffer.push_back(std::exp(s * lnLen));
    if (buffer.size() == kReductionBlock) {
      blockSums.push_back(
          deterministicPairwiseSum(buffer.data(), 0, buffer.size()));
      buffer.clear();
    }
  });
  if (!buffer.empty())
    blockSums.push_back(
        deterministicPairwiseSum(buffer.data(), 0, buffer.size()));
  return deterministicPairwiseSum(blockSums.data(), 0, blockSums.size());
}

}  // namespace

JarnikBounds jarnikBounds(std::int64_t m, std::int64_t M) {
  if (!isValidFieldModulus(m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  if (M <= 2 * m + 1)
    throw std::domain_error("digit ceiling must satisfy M > 2m + 1");
  JarnikBounds b;
  b.m = m;
  b.M = M;
  double md = static_cast<double>(m), Md = static_cast<double>(M);
  b.lower = 1.0 - 2.0 * (md + 1.0) / ((Md + 1.0) * std::log(md + 1.0));
  b.upper = 1.0 - md / ((Md + 2.0) * std::log(2.0 * Md * (Md + 1.0) / md));
  return b;
}

const char* lengthModeName(LengthMode mode) {
  switch (mode) {
    case LengthMode::Lower: return "lower";
    case LengthMode::Upper: return "upper";
    case LengthMode::Exact: return "exact";
  }
  return "unknown";
}

MoranRoot moranRoot(std::int64_t m, std::int64_t M, std::size_t depth,
                    double tol, LengthMode mode, unsigned jobs,
                    std::size_t budget) {
  if (!isValidFieldModulus(m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  if (!(tol > 0.0)) throw std::domain_error("bisection tolerance must be > 0");
  std::size_t count = cylinderCountChecked(m, M, depth, budget);

  std::vector<double> stored;
  const bool useStored = count <= kStoreThreshold;
  if (useStored) {
    stored.reserve(count);
    walkCylinders(m, M, depth, mode,
                  [&](double lnLen) { stored.push_back(lnLen); });
  }
  auto sumAt = [&](double s) {
    if (useStored)
      return deterministicBlockSum(
          count, [&](std::size_t i) { return std::exp(s * stored[i]); }, jobs);
    return streamedSum(m, M, depth, mode, s);
  };

  MoranRoot out;
  out.mode = mode;
  out.cylinderCount = count;
  double lo = 0.0, hi = 1.0;
  double fLo = sumAt(lo) - 1.0;
  double fHi = sumAt(hi) - 1.0;
  if (!(fLo > 0.0))
    throw std::runtime_error("degenerate cover: sum at s = 0 is not above 1");
  if (!(fHi < 0.0))
    throw std::runtime_error(
        "total cover length at s = 1 is not below 1; no root in (0, 1)");
  std::size_t iters = 0;
  while (hi - lo > tol && iters < 200) {
    double mid = 0.5 * (lo + hi);
    double fMid = sumAt(mid) - 1.0;
    if (fMid > 0.0) {
      lo = mid;
      fLo = fMid;
    } else {
      hi = mid;
      fHi = fMid;
    }
    ++iters;
  }
  out.root = 0.5 * (lo + hi);
  out.intervalLo = lo;
  out.intervalHi = hi;
  out.residualLo = fLo;
  out.residualHi = fHi;
  out.iterations = iters;
  return out;
}

DimensionBracket moranBracket(std::int64_t m, std::int64_t M,
                              std::size_t depth, double tol, unsigned jobs,
                              std::size_t budget) {
  DimensionBracket b;
  b.depth = depth;
  b.lowerSolve = moranRoot(m, M, depth, tol, LengthMode::Lower, jobs, budget);
  b.upperSolve = moranRoot(m, M, depth, tol, LengthMode::Upper, jobs, budget);
  b.cylinderCount = b.lowerSolve.cylinderCount;
  b.sLow = b.lowerSolve.root;
  b.sHigh = b.upperSolve.root;
  return b;
}

const char* pairSchemeName(PairScheme scheme) {
  switch (scheme) {
    case PairScheme::EarlyDigit: return "early-digit";
    case PairScheme::RandomBase: return "random-base";
  }
  return "unknown";
}

namespace {

std::vector<std::int64_t> randomBase(Rng& rng, std::size_t length,
                                     std::int64_t m, std::int64_t M) {
  std::vector<std::int64_t> base(length);
  for (auto& d : base) d = rng.uniformInt(m, M);
  return base;
}

}  // namespace

HolderEstimate holderExponentEstimate(const ConstructionParams& params,
                                      std::size_t truncationDepth,
                                      std::size_t pairCount,
                                      std::uint64_t seed, PairScheme scheme) {
  validateParams(params);
  if (pairCount < 2) throw std::domain_error("need at least two probe pairs");
  auto positions = insertionPositions(params, truncationDepth);
  if (positions.size() < 2)
    throw std::domain_error(
        "truncation depth must cover at least two insertion positions");
  std::size_t baseLen = truncationDepth - positions.size();
  if (baseLen == 0)
    throw std::domain_error("no base digits left at this truncation depth");

  HolderEstimate est;
  est.scheme = scheme;
  est.requestedPairs = pairCount;
  est.truncationDepth = truncationDepth;

  std::vector<double> exponents;
  exponents.reserve(pairCount);
  for (std::size_t i = 0; i < pairCount; ++i) {
    Rng rng = Rng::forTask(seed, i);
    std::vector<std::int64_t> base1 = randomBase(rng, baseLen, params.m,
                                                 params.M);
    std::vector<std::int64_t> base2;
    if (scheme == PairScheme::EarlyDigit) {
      base2 = base1;
      std::size_t window = std::min<std::size_t>(4, baseLen);
      std::size_t j = static_cast<std::size_t>(
          rng.uniformInt(0, static_cast<std::int64_t>(window) - 1));
      std::int64_t fresh = base2[j];
      while (fresh == base2[j]) fresh = rng.uniformInt(params.m, params.M);
      base2[j] = fresh;
    } else {
      base2 = randomBase(rng, baseLen, params.m, params.M);
    }

    ConstructedWord w1 = insertApply(base1, params, truncationDepth);
    ConstructedWord w2 = insertApply(base2, params, truncationDepth);
    QuadraticNumber dy = valueOf(w1.word) - valueOf(w2.word);
    QuadraticNumber df =
        valueOf(seedDelete(w1.word)) - valueOf(seedDelete(w2.word));
    if (dy.isZero() || df.isZero()) {
      ++est.skippedPairs;
      continue;
    }
    double ady = std::fabs(dy.toDouble());
    double adf = std::fabs(df.toDouble());
    if (!(ady > 0.0) || !(adf > 0.0) || !std::isfinite(ady) ||
        !std::isfinite(adf)) {
      ++est.skippedPairs;
      continue;
    }
    exponents.push_back(std::log(adf) / std::log(ady));
  }

  est.usedPairs = exponents.size();
  if (exponents.empty())
    throw std::runtime_error("all probe pairs coincided; nothing to estimate");
  std::sort(exponents.begin(), exponents.end());
  est.minExponent = exponents.front();
  est.maxExponent = exponents.back();
  std::size_t n = exponents.size();
  est.medianExponent = (n % 2 == 1)
                           ? exponents[n / 2]
                           : 0.5 * (exponents[n / 2 - 1] + exponents[n / 2]);
  return est;
}

}  // namespace thetacf
