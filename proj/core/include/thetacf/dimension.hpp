#pragma once
// Dimension estimates for bounded-digit sets: closed-form sandwich bounds,
// a Moran-equation bracket over exhaustive depth-n cylinder covers, and an
// empirical Hoelder-exponent probe for the digit-deletion (seed) map.

#include <cstdint>
#include <vector>

#include "thetacf/construction.hpp"

namespace thetacf {

// Closed-form dimension sandwich for the set of points whose digits all lie
// in [m, M]:
//   lower = 1 - 2(m+1) / ((M+1) ln(m+1))
//   upper = 1 - m / ((M+2) ln(2M(M+1)/m))
struct JarnikBounds {
  std::int64_t m = 2;
  std::int64_t M = 10;
  double lower = 0.0;
  double upper = 1.0;
};

// Requires M > 2m + 1 (below that the lower formula goes nonpositive and the
// sandwich degenerates).
JarnikBounds jarnikBounds(std::int64_t m, std::int64_t M);

// Cylinder-length model entering the Moran sum.  With integer registers
// R = R_n, R' = R_{n-1} the exact depth-n length is
//   |I_n| = m^{(2n-1)/2} / (R (R + R')),
// and the two-sided estimate theta/((1+theta^2) Q^2) <= |I_n| <= theta/Q^2
// turns into Upper = m^{(2n-1)/2}/R^2 and Lower = Upper * m/(m+1).
enum class LengthMode { Lower, Upper, Exact };

const char* lengthModeName(LengthMode mode);

// One bisection solve of  sum_cylinders length(w)^s = 1  over all words of
// the given depth with digits in [m, M].  The reduction order is fixed
// (4096-term blocks, pairwise within and across blocks), so results are
// byte-identical for every `jobs` value.
struct MoranRoot {
  LengthMode mode = LengthMode::Exact;
  double root = 0.0;        // midpoint of the final bisection interval
  double intervalLo = 0.0;  // final bisection interval; the residual
  double intervalHi = 1.0;  //   sum - 1 changes sign across it
  double residualLo = 0.0;  // sum(intervalLo) - 1  (positive)
  double residualHi = 0.0;  // sum(intervalHi) - 1  (negative)
  std::size_t iterations = 0;
  std::size_t cylinderCount = 0;
};

MoranRoot moranRoot(std::int64_t m, std::int64_t M, std::size_t depth,
                    double tol, LengthMode mode, unsigned jobs = 1,
                    std::size_t budget = 100000000);

// Two-sided bracket for the depth-n Moran solution with the true lengths:
// sLow is the root under the Lower length model, sHigh under Upper.  The
// root under Exact always lies inside [sLow, sHigh].
struct DimensionBracket {
  double sLow = 0.0;
  double sHigh = 1.0;
  std::size_t depth = 0;
  std::size_t cylinderCount = 0;
  MoranRoot lowerSolve;  // full solver state for both sides
  MoranRoot upperSolve;
  double width() const { return sHigh - sLow; }
};

DimensionBracket moranBracket(std::int64_t m, std::int64_t M,
                              std::size_t depth, double tol,
                              unsigned jobs = 1,
                              std::size_t budget = 100000000);

// How Hoelder probe pairs are drawn.  EarlyDigit perturbs one early base
// digit of a common random base word (the pair then differs from a shallow
// coding depth on); RandomBase draws two independent random base words.
enum class PairScheme { EarlyDigit, RandomBase };

const char* pairSchemeName(PairScheme scheme);

struct HolderEstimate {
  PairScheme scheme = PairScheme::EarlyDigit;
  std::size_t requestedPairs = 0;
  std::size_t usedPairs = 0;     // pairs with distinct values on both sides
  std::size_t skippedPairs = 0;  // coincident pairs dropped
  std::size_t truncationDepth = 0;
  double minExponent = 0.0;
  double medianExponent = 0.0;
  double maxExponent = 0.0;
};

// Empirical Hoelder exponent of the seed map (deletion of the inserted
// digits): for each pair of depth-`truncationDepth` synthesized words y1, y2
// with the same construction parameters but different base digits, the
// per-pair exponent is log|f(y1)-f(y2)| / log|y1-y2| with exact values and
// exact differences (both distances < 1).  Requires truncationDepth to cover
// at least two insertion positions and pairCount >= 2.
HolderEstimate holderExponentEstimate(const ConstructionParams& params,
                                      std::size_t truncationDepth,
                                      std::size_t pairCount,
                                      std::uint64_t seed,
                                      PairScheme scheme = PairScheme::EarlyDigit);

}  // namespace thetacf
