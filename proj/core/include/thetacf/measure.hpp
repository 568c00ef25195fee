#pragma once
// The invariant measure of the digit map: density, interval measure, digit
// law, invariance verification, inverse-CDF sampling, and digit statistics
// along orbits (exact field points and sampled points alike).

#include <cstdint>
#include <vector>

#include "thetacf/construction.hpp"
#include "thetacf/expansion.hpp"

namespace thetacf {

// gamma[a, b] = log((1 + theta b)/(1 + theta a)) / log(1 + theta^2) on the
// domain [0, theta], theta = 1/sqrt(m).  Total mass is 1 and the measure is
// invariant under the digit map.
class GaussMeasure {
 public:
  explicit GaussMeasure(std::int64_t m);

  std::int64_t m() const { return m_; }
  double theta() const { return theta_; }
  double normalizer() const { return normalizer_; }  // log(1 + 1/m)

  // Density (1/normalizer) * theta/(1 + theta x) at x in [0, theta].
  double density(double x) const;

  // Measure of [a, b]; requires 0 <= a <= b <= theta (domain checked with a
  // 1e-12 slack for rounding of theta itself).
  double intervalMeasure(double a, double b) const;

  // Probability that the first digit equals j (j >= m):
  // log((1+1/j)/(1+1/(j+1))) / normalizer.
  double digitLaw(std::int64_t j) const;

  // Telescoped partial sum over j = m..J and the matching analytic tail;
  // partialSum + tail = 1 identically.
  double digitLawPartialSum(std::int64_t J) const;
  double digitLawTail(std::int64_t J) const;

  // First digit of a sampled point: floor(sqrt(m)/x), clamped to >= m for
  // in-domain x; returns -1 off the domain.
  std::int64_t firstDigit(double x) const;

  // Inverse CDF: u in [0,1] -> ((1+1/m)^u - 1)/theta in [0, theta].
  double inverseCdf(double u) const;

 private:
  std::int64_t m_;
  double theta_;
  double normalizer_;
};

// Comparison of gamma[a, b] against the sum of its digit-branch preimages
// l = m..cutoff plus the closed-form remainder of the branches beyond the
// cutoff.  Exact invariance means measure = branchSum + tailExact; the
// reported residual is the numerical defect of that identity.
struct InvarianceReport {
  std::int64_t m = 2;
  double a = 0.0, b = 0.0;
  std::int64_t cutoff = 0;
  double measure = 0.0;
  double branchSum = 0.0;      // branches l = m..cutoff, fixed reduction order
  double tailExact = 0.0;      // closed form of all branches beyond cutoff
  double tailBound = 0.0;      // measure of (0, 1/(theta(cutoff+1))], the
                               //   union of the branch domains beyond cutoff
  double truncationRemainder = 0.0;  // |measure - branchSum|, O(1/cutoff)
  double residual = 0.0;             // |measure - branchSum - tailExact|
  bool tailWithinBound = false;      // tailExact <= tailBound
};

InvarianceReport invarianceDefect(std::int64_t m, double a, double b,
                                  std::int64_t cutoff, unsigned jobs = 1);

// `count` deterministic-for-seed samples distributed per the measure, via
// the closed-form inverse CDF.  Samples are generated in fixed 4096 blocks
// with per-block generators, so output is identical for any `jobs`.
std::vector<double> sampleGamma(std::int64_t m, std::uint64_t seed,
                                std::size_t count, unsigned jobs = 1);

// Running digit statistics along an orbit: the digit word (with its
// termination flag) and sum/max/ratio samples at the requested checkpoints
// (checkpoints beyond an early termination point are dropped, not errors).
struct OrbitStats {
  DigitWord word;
  std::vector<RatioSample> series;
  // Sampled-path diagnostics (0 for the exact path):
  std::uint64_t precisionRestarts = 0;
  mpfr_prec_t finalPrecision = 0;
};

OrbitStats orbitStatsExact(const QuadraticNumber& x, std::size_t n,
                           const std::vector<std::size_t>& checkpoints);

// Same statistics for a point sampled from the measure (seeded draw).  The
// point is transcendental, so the orbit runs in interval arithmetic; any
// digit ambiguity restarts the whole orbit at doubled precision.
OrbitStats orbitStatsSampled(std::int64_t m, std::uint64_t seed,
                             std::size_t n,
                             const std::vector<std::size_t>& checkpoints);

}  // namespace thetacf
