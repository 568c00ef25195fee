#include "thetacf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thetacf/parallel.hpp"
#include "thetacf/rng.hpp"

namespace thetacf {

namespace {

constexpr double kDomainSlack = 1e-12;

}  // namespace

GaussMeasure::GaussMeasure(std::int64_t m) : m_(m) {
  if (!isValidFieldModulus(m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  theta_ = 1.0 / std::sqrt(static_cast<double>(m));
  normalizer_ = std::log1p(1.0 / static_cast<double>(m));
}

double GaussMeasure::density(double x) const {
  if (x < -kDomainSlack || x > theta_ + kDomainSlack)
    throw std::domain_error("density argument outside [0, theta]");
  return theta_ / ((1.0 + theta_ * x) * normalizer_);
}

double GaussMeasure::intervalMeasure(double a, double b) const {
  if (a < -kDomainSlack || b > theta_ + kDomainSlack || a > b)
    throw std::domain_error("interval endpoints must satisfy 0 <= a <= b <= theta");
  a = std::max(a, 0.0);
  b = std::min(b, theta_);
  return (std::log1p(theta_ * b) - std::log1p(theta_ * a)) / normalizer_;
}

double GaussMeasure::digitLaw(std::int64_t j) const {
  if (j < m_) throw std::domain_error("digit below the alphabet minimum m");
  double dj = static_cast<double>(j);
  return (std::log1p(1.0 / dj) - std::log1p(1.0 / (dj + 1.0))) / normalizer_;
}

double GaussMeasure::digitLawPartialSum(std::int64_t J) const {
  if (J < m_) throw std::domain_error("partial sum needs J >= m");
  return 1.0 - digitLawTail(J);
}

double GaussMeasure::digitLawTail(std::int64_t J) const {
  if (J < m_) throw std::domain_error("tail needs J >= m");
  return std::log1p(1.0 / (static_cast<double>(J) + 1.0)) / normalizer_;
}

std::int64_t GaussMeasure::firstDigit(double x) const {
  if (!(x > 0.0) || x > theta_ + kDomainSlack) return -1;
  double v = std::sqrt(static_cast<double>(m_)) / x;
  if (v >= 9.0e18) return std::numeric_limits<std::int64_t>::max();
  std::int64_t d = static_cast<std::int64_t>(std::floor(v));
  return std::max(d, m_);  // x <= theta forces the digit to at least m
}

double GaussMeasure::inverseCdf(double u) const {
  if (u < 0.0 || u > 1.0)
    throw std::domain_error("inverse CDF argument outside [0, 1]");
  return std::expm1(u * normalizer_) / theta_;
}

InvarianceReport invarianceDefect(std::int64_t m, double a, double b,
                                  std::int64_t cutoff, unsigned jobs) {
  GaussMeasure gm(m);
  if (cutoff < m)
    throw std::domain_error("branch cutoff must be at least m");
  InvarianceReport rep;
  rep.m = m;
  rep.a = a;
  rep.b = b;
  rep.cutoff = cutoff;
  rep.measure = gm.intervalMeasure(a, b);  // also validates the domain

  const double theta = gm.theta();
  const double norm = gm.normalizer();
  std::size_t branches = static_cast<std::size_t>(cutoff - m + 1);
  rep.branchSum = deterministicBlockSum(
      branches,
      [&](std::size_t i) {
        double l = static_cast<double>(m + static_cast<std::int64_t>(i));
        return (std::log1p(theta / (a + theta * l)) -
                std::log1p(theta / (b + theta * l))) /
               norm;
      },
      jobs);

  double edge = theta * (static_cast<double>(cutoff) + 1.0);
  rep.tailExact = (std::log(b + edge) - std::log(a + edge)) / norm;
  rep.tailBound = gm.intervalMeasure(0.0, std::min(gm.theta(), 1.0 / edge));
  rep.truncationRemainder = std::fabs(rep.measure - rep.branchSum);
  rep.residual = std::fabs(rep.measure - rep.branchSum - rep.tailExact);
  rep.tailWithinBound = rep.tailExact <= rep.tailBound + 1e-15;
  return rep;
}

std::vector<double> sampleGamma(std::int64_t m, std::uint64_t seed,
                                std::size_t count, unsigned jobs) {
  GaussMeasure gm(m);
  if (count == 0) throw std::domain_error("sample count must be >= 1");
  std::vector<double> out(count);
  std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  parallelFor(
      blocks,
      [&](std::size_t b) {
        Rng rng = Rng::forTask(seed, b);
        std::size_t lo = b * kReductionBlock;
        std::size_t hi = std::min(count, lo + kReductionBlock);
        for (std::size_t i = lo; i < hi; ++i)
          out[i] = gm.inverseCdf(rng.uniform01());
      },
      jobs);
  return out;
}

namespace {

std::vector<std::size_t> effectiveCheckpoints(
    const std::vector<std::size_t>& requested, std::size_t length) {
  std::vector<std::size_t> cps;
  if (requested.empty()) {
    cps.reserve(length);
    for (std::size_t k = 1; k <= length; ++k) cps.push_back(k);
  } else {
    for (std::size_t c : requested)
      if (c >= 1 && c <= length) cps.push_back(c);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  }
  return cps;
}

}  // namespace

OrbitStats orbitStatsExact(const QuadraticNumber& x, std::size_t n,
                           const std::vector<std::size_t>& checkpoints) {
  OrbitStats stats;
  stats.word = digitStream(x, n);
  auto cps = effectiveCheckpoints(checkpoints, stats.word.digits.size());
  stats.series = ratioSeries(stats.word, cps);
  return stats;
}

OrbitStats orbitStatsSampled(std::int64_t m, std::uint64_t seed,
                             std::size_t n,
                             const std::vector<std::size_t>& checkpoints) {
  if (!isValidFieldModulus(m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  if (n == 0) throw std::domain_error("orbit length must be >= 1");

  Rng rng(seed);
  std::uint64_t draw = rng.next();
  mpz_class uNum(static_cast<unsigned long>(draw));
  mpz_class uDen = 1;
  mpz_mul_2exp(uDen.get_mpz_t(), uDen.get_mpz_t(), 64);

  const mpfr_prec_t basePrec =
      static_cast<mpfr_prec_t>(128 + 6 * static_cast<long>(n));
  const mpfr_prec_t capPrec = basePrec * 64;

  OrbitStats stats;
  stats.word.m = m;
  for (mpfr_prec_t prec = basePrec;; prec *= 2) {
    if (prec > capPrec)
      throw std::runtime_error(
          "orbit precision cap exceeded; the sampled point resists digit "
          "separation");
    std::vector<std::int64_t> digits;
    digits.reserve(n);
    bool ambiguous = false;

    RealInterval sqrtM = RealInterval::fromInt(static_cast<long>(m), prec).sqrt();
    RealInterval one = RealInterval::fromInt(1, prec);
    // x = ((1 + 1/m)^u - 1) * sqrt(m), the inverse CDF of the measure.
    RealInterval u = RealInterval::fromRational(uNum, uDen, prec);
    RealInterval base = RealInterval::fromRational(
        mpz_class(static_cast<long>(m + 1)), mpz_class(static_cast<long>(m)),
        prec);
    RealInterval x = base.pow(u).sub(one).mul(sqrtM);

    for (std::size_t k = 0; k < n; ++k) {
      if (!x.isPositive()) {
        ambiguous = true;  // cannot separate from 0; retry sharper
        break;
      }
      RealInterval t = sqrtM.div(x);  // 1/(theta x)
      mpz_class d;
      if (!t.floorExactlyKnown(d) || d < m) {
        ambiguous = true;
        break;
      }
      if (!mpz_fits_slong_p(d.get_mpz_t()))
        throw std::overflow_error("orbit digit exceeds the 64-bit range");
      digits.push_back(static_cast<std::int64_t>(d.get_si()));
      RealInterval inv = one.div(x);
      RealInterval thetaD = RealInterval::fromMpz(d, prec).div(sqrtM);
      x = inv.sub(thetaD);
    }
    if (!ambiguous) {
      stats.word.digits = std::move(digits);
      stats.finalPrecision = prec;
      break;
    }
    ++stats.precisionRestarts;
  }

  auto cps = effectiveCheckpoints(checkpoints, stats.word.digits.size());
  stats.series = ratioSeries(stats.word, cps);
  return stats;
}

}  // namespace thetacf
