#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "thetacf/qfield.hpp"

namespace thetacf {

// Thrown when the digit map is applied at an orbit point that is exactly
// zero: the expansion of the starting point has terminated.
class OrbitTerminated : public std::runtime_error {
 public:
  OrbitTerminated() : std::runtime_error("orbit reached zero: expansion terminated") {}
};

// A finite digit word over the alphabet {m, m+1, m+2, ...}, optionally
// remembering which positions (1-based) were produced by sparse insertion
// rather than by the base pattern.
struct DigitWord {
  std::int64_t m = 2;
  std::vector<std::int64_t> digits;
  std::vector<std::size_t> insertedPositions;  // 1-based, strictly increasing
  bool terminated = false;

  std::size_t depth() const { return digits.size(); }
};

// Throws std::domain_error unless every digit is >= m and m is admissible.
void validateWord(const DigitWord& w);

struct GaussStepResult {
  mpz_class digit;       // floor of 1/(theta*x); always >= m on the domain
  QuadraticNumber next;  // 1/x - theta*digit, again in [0, theta]
};

// One exact step of the digit map T(x) = 1/x - theta*floor(1/(theta*x)) on
// (0, theta], theta = 1/sqrt(m).  Throws std::domain_error off the domain
// and OrbitTerminated at exactly zero.
GaussStepResult gaussStep(const QuadraticNumber& x);

// First `count` digits of x's expansion, computed exactly.  If the orbit
// hits zero early the word is shorter and `terminated` is set.
DigitWord digitStream(const QuadraticNumber& x, std::size_t count);

// Exact orbit points x, T(x), T^2(x), ...  The result has count+1 entries
// unless the orbit terminates, in which case the final entry is the exact
// zero where it stopped.
std::vector<QuadraticNumber> orbitExact(const QuadraticNumber& x,
                                        std::size_t count);

// Exact value of the finite expansion [l_1, ..., l_n]: the point whose
// digit word is exactly `w` followed by termination.  Throws
// std::domain_error for the empty word (no finite expansion is empty).
QuadraticNumber valueOf(const DigitWord& w);

// coeff * sqrt(m)^exponent as an exact field element (exponent may be
// negative).
QuadraticNumber powSqrtM(const mpz_class& coeff, long exponent,
                         std::int64_t m);

// Fundamental interval of a digit word, tracked through exact integer
// registers: with R_{-1}=0, R_0=1, S_{-1}=1, S_0=0 and
//   R_n = d_n R_{n-1} + m R_{n-2},   S_n = d_n S_{n-1} + m S_{n-2},
// the convergent denominators and numerators are
//   Q_n = R_n * sqrt(m)^{-n},        P_n = S_n * sqrt(m)^{-(n+1)},
// so every geometric quantity below is an exact field element.
class Cylinder {
 public:
  static Cylinder base(const FieldSpec& field);
  static Cylinder fromDigits(const FieldSpec& field,
                             const std::vector<std::int64_t>& digits);

  // Cylinder of the word extended by one digit (must be >= m).
  Cylinder child(std::int64_t digit) const;

  std::size_t depth() const { return depth_; }
  std::int64_t m() const { return m_; }

  const mpz_class& reg() const { return r_; }        // R_n
  const mpz_class& regPrev() const { return rPrev_; }  // R_{n-1}
  const mpz_class& regP() const { return s_; }       // S_n
  const mpz_class& regPPrev() const { return sPrev_; }  // S_{n-1}

  QuadraticNumber q() const;      // Q_n
  QuadraticNumber qPrev() const;  // Q_{n-1}
  QuadraticNumber p() const;      // P_n
  QuadraticNumber pPrev() const;  // P_{n-1}

  QuadraticNumber value() const;          // P_n / Q_n
  QuadraticNumber otherEndpoint() const;  // (P_n + theta P_{n-1}) / (Q_n + theta Q_{n-1})
  QuadraticNumber leftEndpoint() const;   // min of the two endpoints
  QuadraticNumber rightEndpoint() const;  // max of the two endpoints
  QuadraticNumber length() const;         // exact interval length

  // Exact check of S_{n-1} R_n - S_n R_{n-1} == (-m)^n, the register form of
  // the alternating determinant of consecutive convergents.
  bool determinantOk() const;

 private:
  Cylinder(std::int64_t m) : m_(m) {}

  std::int64_t m_ = 2;
  std::size_t depth_ = 0;
  mpz_class r_ = 1, rPrev_ = 0;  // R_0, R_{-1}
  mpz_class s_ = 0, sPrev_ = 1;  // S_0, S_{-1}
};

// Effect on the convergent denominator of deleting digit k (1-based) from
// the word: ratio = Q_n(full) / Q_{n-1}(word without digit k), which is
// pinned to [(d_k + m) theta / 2, (d_k + m) theta].
struct SensitivityRow {
  std::size_t k = 0;
  std::int64_t digit = 0;
  double ratio = 0.0;
  double lowerBound = 0.0;
  double upperBound = 0.0;
  bool ok = false;
};

SensitivityRow denominatorSensitivity(const DigitWord& w, std::size_t k);

// Distance between the plotted points of two children of a common prefix
// word carrying consecutive digits d and d+1, with the closed form
//   gap = theta / ((d theta Q + Q')((d+1) theta Q + Q'))
// and the coarser certified bound gap >= 1 / (theta Q^2 (d+1)(d+2)).
struct AdjacentGapReport {
  std::int64_t digit;
  QuadraticNumber gap;
  QuadraticNumber bound;
  bool identityOk;  // direct endpoint difference matches closed form
  bool boundOk;     // gap >= bound
};

AdjacentGapReport adjacentGap(const DigitWord& prefix, std::int64_t d);

struct MetricDepthRow {
  std::size_t n = 0;
  double q = 0.0;       // Q_n
  double length = 0.0;  // |I_n|
  bool growthOk = false;       // Q_n^2 >= (m+1)^{n-1}
  bool lengthUpperOk = false;  // |I_n| <= theta / Q_n^2
  bool lengthLowerOk = false;  // theta / ((1+theta^2) Q_n^2) <= |I_n|
  bool qRatioOk = false;       // Q_{n-1} <= theta Q_n
  bool determinantOk = false;
};

struct MetricReport {
  std::int64_t m = 2;
  std::size_t depth = 0;
  std::vector<MetricDepthRow> rows;
  std::vector<SensitivityRow> sensitivity;
  bool allOk = false;
  std::vector<std::string> failures;
};

// Run every exact per-depth estimate over the prefixes of `w`, plus the
// digit-deletion sensitivity check at each position.
MetricReport verifyMetric(const DigitWord& w);

}  // namespace thetacf
