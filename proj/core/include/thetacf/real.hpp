#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace thetacf {

// Thrown when a rigorously evaluated quantity sits too close to an integer (or
// to a comparison threshold) to decide its floor even at extreme precision.
// The cutoff is an interval width of 2^-128; nothing is ever silently rounded.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed interval [lo, hi] of MPFR numbers with outward (directed) rounding.
// Every operation returns an interval guaranteed to contain the exact result,
// assuming the operands do.  Only the operations needed by this library are
// provided; transcendental ones lean on MPFR being correctly rounded per mode.
class RealInterval {
 public:
  explicit RealInterval(mpfr_prec_t prec);
  RealInterval(const RealInterval& other);
  RealInterval(RealInterval&& other) noexcept;
  RealInterval& operator=(const RealInterval& other);
  RealInterval& operator=(RealInterval&& other) noexcept;
  ~RealInterval();

  static RealInterval fromInt(long v, mpfr_prec_t prec);
  static RealInterval fromMpz(const mpz_class& v, mpfr_prec_t prec);
  // num/den with den > 0.
  static RealInterval fromRational(const mpz_class& num, const mpz_class& den,
                                   mpfr_prec_t prec);

  mpfr_prec_t prec() const { return prec_; }

  RealInterval add(const RealInterval& rhs) const;
  RealInterval sub(const RealInterval& rhs) const;
  RealInterval mul(const RealInterval& rhs) const;
  // Throws std::domain_error if rhs straddles or touches zero.
  RealInterval div(const RealInterval& rhs) const;
  RealInterval neg() const;
  // Requires a strictly positive interval.
  RealInterval log() const;
  RealInterval exp() const;
  RealInterval sqrt() const;
  // this^expo for base >= 1 and expo arbitrary; falls back to exp(expo*log x)
  // for positive bases below one.
  RealInterval pow(const RealInterval& expo) const;

  bool isPositive() const;  // entire interval > 0
  bool isNegative() const;
  // Strict comparison against an exact rational; returns -1 (entirely below),
  // +1 (entirely above), 0 (undecided: the interval straddles the value).
  int compareRational(const mpz_class& num, const mpz_class& den) const;

  // If floor(lo) == floor(hi) the common value is stored and true returned.
  bool floorExactlyKnown(mpz_class& out) const;
  bool widthBelow(long exponent2) const;  // width < 2^exponent2

  double midDouble() const;
  double loDouble() const;
  double hiDouble() const;
  double widthDouble() const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
  mpfr_prec_t prec_;
  friend RealInterval thetaInterval(long m, mpfr_prec_t prec);
};

// 1/sqrt(m) as a tight interval.
RealInterval thetaInterval(long m, mpfr_prec_t prec);

// Evaluates `eval` at doubling precision until the floor of the result is
// unambiguous.  Raises AmbiguityError when the value is provably within
// 2^-128 of an integer and still undecided.
mpz_class rigorousFloor(const std::function<RealInterval(mpfr_prec_t)>& eval,
                        mpfr_prec_t startPrec);

// Decides `eval(prec) < num/den` (strict) with the same escalation scheme.
bool rigorousLessThan(const std::function<RealInterval(mpfr_prec_t)>& eval,
                      const mpz_class& num, const mpz_class& den,
                      mpfr_prec_t startPrec);

// An exact rational with den > 0, kept reduced.  Small helper used for the
// gamma exponent and the alpha parameter, where binary floats must not leak
// rounding into floor computations.
struct Rational {
  mpz_class num{0};
  mpz_class den{1};

  Rational() = default;
  Rational(long n, long d);
  Rational(mpz_class n, mpz_class d);
  void reduce();
  double toDouble() const;
  std::string str() const;
  bool positive() const { return num > 0; }
};

// Parses "3/4", "0.75", "4" into an exact rational.
Rational parseRational(const std::string& text);

}  // namespace thetacf
