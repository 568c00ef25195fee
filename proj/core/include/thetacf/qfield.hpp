#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace thetacf {

// The ambient field Q(sqrt(m)) for a fixed non-square m >= 2.  The expansion
// parameter is theta = 1/sqrt(m).
struct FieldSpec {
  std::int64_t m;

  explicit FieldSpec(std::int64_t m_);
};

bool isValidFieldModulus(std::int64_t m);

// An element (p + q*sqrt(m))/r of Q(sqrt(m)), kept canonical: r > 0 and
// gcd(p, q, r) = 1.  sqrt(m) is irrational for every valid m, so the
// representation is unique and equality/comparison are decidable exactly.
class QuadraticNumber {
 public:
  QuadraticNumber(mpz_class p, mpz_class q, mpz_class r, std::int64_t m);

  static QuadraticNumber zero(std::int64_t m);
  static QuadraticNumber integer(const mpz_class& v, std::int64_t m);
  static QuadraticNumber rational(const mpz_class& num, const mpz_class& den,
                                  std::int64_t m);
  static QuadraticNumber sqrtM(std::int64_t m);   // sqrt(m)
  static QuadraticNumber theta(std::int64_t m);   // 1/sqrt(m) = sqrt(m)/m

  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  const mpz_class& r() const { return r_; }
  std::int64_t m() const { return m_; }
  bool isRational() const { return q_ == 0; }
  bool isZero() const { return p_ == 0 && q_ == 0; }

  QuadraticNumber operator+(const QuadraticNumber& rhs) const;
  QuadraticNumber operator-(const QuadraticNumber& rhs) const;
  QuadraticNumber operator*(const QuadraticNumber& rhs) const;
  QuadraticNumber operator/(const QuadraticNumber& rhs) const;  // rhs != 0
  QuadraticNumber operator-() const;
  QuadraticNumber inverse() const;  // *this != 0
  QuadraticNumber scaled(const mpz_class& k) const;  // multiply by integer

  bool operator==(const QuadraticNumber& rhs) const;
  bool operator!=(const QuadraticNumber& rhs) const { return !(*this == rhs); }

  // Sign of the exact real value: -1, 0, +1.
  int sign() const;

  // Exact floor of the real value (works for any sign).
  mpz_class floorExact() const;

  // Correctly rounded decimal rendering with `digits` places after the point
  // (ties, which can only occur for rational values, round half away from
  // zero).  Exact integer arithmetic throughout; no binary floats involved.
  std::string toDecimal(int digits) const;

  // Nearest double, via 256-bit MPFR evaluation.
  double toDouble() const;

  std::string str() const;  // "(p + q*sqrt(m))/r" debugging form

 private:
  void normalize();
  mpz_class p_, q_, r_;
  std::int64_t m_;
};

// Exact three-way comparison: -1, 0, +1 as a < b, a == b, a > b.
int compareExact(const QuadraticNumber& a, const QuadraticNumber& b);

}  // namespace thetacf
