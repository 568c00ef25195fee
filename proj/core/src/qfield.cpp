#include "thetacf/qfield.hpp"

#include <mpfr.h>

#include <utility>

namespace thetacf {

bool isValidFieldModulus(std::int64_t m) {
  if (m < 2) return false;
  mpz_class mm(static_cast<long>(m)), root;
  mpz_sqrt(root.get_mpz_t(), mm.get_mpz_t());
  return root * root != mm;
}

FieldSpec::FieldSpec(std::int64_t m_) : m(m_) {
  if (!isValidFieldModulus(m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
}

QuadraticNumber::QuadraticNumber(mpz_class p, mpz_class q, mpz_class r,
                                 std::int64_t m)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), m_(m) {
  if (!isValidFieldModulus(m_))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  if (r_ == 0) throw std::domain_error("quadratic number with zero denominator");
  normalize();
}

void QuadraticNumber::normalize() {
  if (r_ < 0) {
    p_ = -p_;
    q_ = -q_;
    r_ = -r_;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), p_.get_mpz_t(), q_.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r_.get_mpz_t());
  if (g > 1) {
    p_ /= g;
    q_ /= g;
    r_ /= g;
  }
}

QuadraticNumber QuadraticNumber::zero(std::int64_t m) {
  return QuadraticNumber(0, 0, 1, m);
}

QuadraticNumber QuadraticNumber::integer(const mpz_class& v, std::int64_t m) {
  return QuadraticNumber(v, 0, 1, m);
}

QuadraticNumber QuadraticNumber::rational(const mpz_class& num,
                                          const mpz_class& den,
                                          std::int64_t m) {
  return QuadraticNumber(num, 0, den, m);
}

QuadraticNumber QuadraticNumber::sqrtM(std::int64_t m) {
  return QuadraticNumber(0, 1, 1, m);
}

QuadraticNumber QuadraticNumber::theta(std::int64_t m) {
  // 1/sqrt(m) = sqrt(m)/m
  return QuadraticNumber(0, 1, static_cast<long>(m), m);
}

namespace {
void requireSameField(const QuadraticNumber& a, const QuadraticNumber& b) {
  if (a.m() != b.m())
    throw std::domain_error("mixing quadratic numbers from different fields");
}
}  // namespace

QuadraticNumber QuadraticNumber::operator+(const QuadraticNumber& rhs) const {
  requireSameField(*this, rhs);
  return QuadraticNumber(p_ * rhs.r_ + rhs.p_ * r_, q_ * rhs.r_ + rhs.q_ * r_,
                         r_ * rhs.r_, m_);
}

QuadraticNumber QuadraticNumber::operator-(const QuadraticNumber& rhs) const {
  requireSameField(*this, rhs);
  return QuadraticNumber(p_ * rhs.r_ - rhs.p_ * r_, q_ * rhs.r_ - rhs.q_ * r_,
                         r_ * rhs.r_, m_);
}

QuadraticNumber QuadraticNumber::operator*(const QuadraticNumber& rhs) const {
  requireSameField(*this, rhs);
  return QuadraticNumber(p_ * rhs.p_ + q_ * rhs.q_ * m_,
                         p_ * rhs.q_ + q_ * rhs.p_, r_ * rhs.r_, m_);
}

QuadraticNumber QuadraticNumber::inverse() const {
  if (isZero()) throw std::domain_error("inverse of zero");
  // 1/((p + q*s)/r) = r*(p - q*s)/(p^2 - q^2 m), with s = sqrt(m) irrational,
  // so the norm p^2 - q^2 m vanishes only at zero.
  mpz_class norm = p_ * p_ - q_ * q_ * m_;
  return QuadraticNumber(r_ * p_, -r_ * q_, norm, m_);
}

QuadraticNumber QuadraticNumber::operator/(const QuadraticNumber& rhs) const {
  return *this * rhs.inverse();
}

QuadraticNumber QuadraticNumber::operator-() const {
  return QuadraticNumber(-p_, -q_, r_, m_);
}

QuadraticNumber QuadraticNumber::scaled(const mpz_class& k) const {
  return QuadraticNumber(p_ * k, q_ * k, r_, m_);
}

bool QuadraticNumber::operator==(const QuadraticNumber& rhs) const {
  return m_ == rhs.m_ && p_ == rhs.p_ && q_ == rhs.q_ && r_ == rhs.r_;
}

int QuadraticNumber::sign() const {
  // Sign of p + q*sqrt(m) (r > 0 after normalization).
  int sp = sgn(p_), sq = sgn(q_);
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // Opposite signs: compare p^2 with q^2 m; the larger magnitude wins.
  mpz_class lhs = p_ * p_, rhs = q_ * q_ * m_;
  int c = cmp(lhs, rhs);
  if (c == 0) {
    // p^2 == q^2 m would make sqrt(m) rational.
    throw std::logic_error("impossible equality p^2 == q^2*m");
  }
  return c > 0 ? sp : sq;
}

int compareExact(const QuadraticNumber& a, const QuadraticNumber& b) {
  if (a.m() != b.m())
    throw std::domain_error("comparing quadratic numbers from different fields");
  return (a - b).sign();
}

mpz_class QuadraticNumber::floorExact() const {
  if (q_ == 0) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), p_.get_mpz_t(), r_.get_mpz_t());
    return f;
  }
  // Bracket q*sqrt(m) within one: s = isqrt(q^2 m) gives
  //   q >= 0: q*sqrt(m) in [s, s+1)      (exact hit impossible)
  //   q <  0: q*sqrt(m) in (-(s+1), -s)
  mpz_class s;
  {
    mpz_class t = q_ * q_ * m_;
    mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
  }
  mpz_class nLo = p_ + (sgn(q_) > 0 ? s : -(s + 1));
  // Value lies in (nLo/r, (nLo+1)/r); its floor is fdiv(nLo+1, r) exactly when
  // the value reaches that candidate, else fdiv(nLo, r).
  mpz_class c1, c2;
  mpz_fdiv_q(c1.get_mpz_t(), nLo.get_mpz_t(), r_.get_mpz_t());
  mpz_class nHi = nLo + 1;
  mpz_fdiv_q(c2.get_mpz_t(), nHi.get_mpz_t(), r_.get_mpz_t());
  if (c1 == c2) return c1;
  // Decide exactly whether value >= c2.
  QuadraticNumber diff = *this - integer(c2, m_);
  return diff.sign() >= 0 ? c2 : c1;
}

std::string QuadraticNumber::toDecimal(int digits) const {
  if (digits < 0) throw std::invalid_argument("negative digit count");
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  QuadraticNumber scaledV = scaled(pow10);
  mpz_class n = scaledV.floorExact();
  // Round to nearest: compare the fractional part against 1/2 exactly.
  QuadraticNumber frac2 = (scaledV - integer(n, m_)).scaled(2);
  int c = compareExact(frac2, integer(1, m_));
  if (c > 0 || (c == 0 && n >= 0)) n += 1;  // ties away from zero
  bool neg = n < 0;
  mpz_class absN = abs(n);
  std::string s = absN.get_str();
  if (static_cast<int>(s.size()) <= digits)
    s.insert(0, static_cast<std::size_t>(digits + 1 - s.size()), '0');
  std::string out;
  if (neg) out += '-';
  if (digits == 0) {
    out += s;
  } else {
    out += s.substr(0, s.size() - digits);
    out += '.';
    out += s.substr(s.size() - digits);
  }
  return out;
}

double QuadraticNumber::toDouble() const {
  mpfr_t acc, t;
  mpfr_init2(acc, 256);
  mpfr_init2(t, 256);
  mpfr_set_si(acc, static_cast<long>(m_), MPFR_RNDN);
  mpfr_sqrt(acc, acc, MPFR_RNDN);
  mpfr_mul_z(acc, acc, q_.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(t, p_.get_mpz_t(), MPFR_RNDN);
  mpfr_add(acc, acc, t, MPFR_RNDN);
  mpfr_div_z(acc, acc, r_.get_mpz_t(), MPFR_RNDN);
  double v = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clear(acc);
  mpfr_clear(t);
  return v;
}

std::string QuadraticNumber::str() const {
  return "(" + p_.get_str() + " + " + q_.get_str() + "*sqrt(" +
         std::to_string(m_) + "))/" + r_.get_str();
}

}  // namespace thetacf
