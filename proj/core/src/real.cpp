#include "thetacf/real.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace thetacf {

namespace {
constexpr long kAmbiguityExponent = -128;
constexpr mpfr_prec_t kPrecCeiling = mpfr_prec_t{1} << 30;
}  // namespace

RealInterval::RealInterval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_nan(lo_);
  mpfr_set_nan(hi_);
}

RealInterval::RealInterval(const RealInterval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

RealInterval::RealInterval(RealInterval&& other) noexcept : prec_(other.prec_) {
  mpfr_init2(lo_, 2);
  mpfr_init2(hi_, 2);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

RealInterval& RealInterval::operator=(const RealInterval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.prec_);
    mpfr_set_prec(hi_, other.prec_);
    prec_ = other.prec_;
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

RealInterval& RealInterval::operator=(RealInterval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  std::swap(prec_, other.prec_);
  return *this;
}

RealInterval::~RealInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

RealInterval RealInterval::fromInt(long v, mpfr_prec_t prec) {
  RealInterval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::fromMpz(const mpz_class& v, mpfr_prec_t prec) {
  RealInterval r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::fromRational(const mpz_class& num,
                                        const mpz_class& den,
                                        mpfr_prec_t prec) {
  if (den <= 0) throw std::domain_error("fromRational: denominator must be positive");
  RealInterval r(prec);
  mpq_class q(num, den);
  q.canonicalize();
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::add(const RealInterval& rhs) const {
  RealInterval r(std::max(prec_, rhs.prec_));
  mpfr_add(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, rhs.hi_, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::sub(const RealInterval& rhs) const {
  RealInterval r(std::max(prec_, rhs.prec_));
  mpfr_sub(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::neg() const {
  RealInterval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::mul(const RealInterval& rhs) const {
  RealInterval r(std::max(prec_, rhs.prec_));
  mpfr_t t;
  mpfr_init2(t, r.prec_);
  // lo: minimum of the four products rounded down.
  mpfr_mul(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_mul(t, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, hi_, rhs.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, hi_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  // hi: maximum of the four products rounded up.
  mpfr_mul(r.hi_, lo_, rhs.lo_, MPFR_RNDU);
  mpfr_mul(t, lo_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, hi_, rhs.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, hi_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

RealInterval RealInterval::div(const RealInterval& rhs) const {
  if (mpfr_sgn(rhs.lo_) <= 0 && mpfr_sgn(rhs.hi_) >= 0)
    throw std::domain_error("interval division by an interval containing zero");
  RealInterval r(std::max(prec_, rhs.prec_));
  mpfr_t t;
  mpfr_init2(t, r.prec_);
  mpfr_div(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_div(t, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, hi_, rhs.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, hi_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(r.hi_, lo_, rhs.lo_, MPFR_RNDU);
  mpfr_div(t, lo_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, hi_, rhs.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, hi_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

RealInterval RealInterval::log() const {
  if (mpfr_sgn(lo_) <= 0)
    throw std::domain_error("interval log of a non-positive interval");
  RealInterval r(prec_);
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::exp() const {
  RealInterval r(prec_);
  mpfr_exp(r.lo_, lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, hi_, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::sqrt() const {
  if (mpfr_sgn(lo_) < 0)
    throw std::domain_error("interval sqrt of a negative interval");
  RealInterval r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::pow(const RealInterval& expo) const {
  if (mpfr_sgn(lo_) <= 0)
    throw std::domain_error("interval pow needs a positive base");
  if (mpfr_cmp_ui(lo_, 1) >= 0 && mpfr_sgn(expo.lo_) >= 0) {
    // x^e increasing in both arguments for x >= 1, e >= 0.
    RealInterval r(std::max(prec_, expo.prec_));
    mpfr_pow(r.lo_, lo_, expo.lo_, MPFR_RNDD);
    mpfr_pow(r.hi_, hi_, expo.hi_, MPFR_RNDU);
    return r;
  }
  return log().mul(expo).exp();
}

bool RealInterval::isPositive() const { return mpfr_sgn(lo_) > 0; }
bool RealInterval::isNegative() const { return mpfr_sgn(hi_) < 0; }

int RealInterval::compareRational(const mpz_class& num,
                                  const mpz_class& den) const {
  mpq_class q(num, den);
  q.canonicalize();
  if (mpfr_cmp_q(hi_, q.get_mpq_t()) < 0) return -1;
  if (mpfr_cmp_q(lo_, q.get_mpq_t()) > 0) return 1;
  return 0;
}

bool RealInterval::floorExactlyKnown(mpz_class& out) const {
  if (mpfr_nan_p(lo_) || mpfr_nan_p(hi_)) return false;
  mpz_class flo, fhi;
  mpfr_get_z(flo.get_mpz_t(), lo_, MPFR_RNDD);
  mpfr_get_z(fhi.get_mpz_t(), hi_, MPFR_RNDD);
  if (flo == fhi) {
    out = flo;
    return true;
  }
  return false;
}

bool RealInterval::widthBelow(long exponent2) const {
  mpfr_t w, bound;
  mpfr_init2(w, prec_);
  mpfr_init2(bound, 8);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_set_ui_2exp(bound, 1, exponent2, MPFR_RNDN);
  bool below = mpfr_cmp(w, bound) < 0;
  mpfr_clear(w);
  mpfr_clear(bound);
  return below;
}

double RealInterval::midDouble() const {
  mpfr_t mid;
  mpfr_init2(mid, prec_);
  mpfr_add(mid, lo_, hi_, MPFR_RNDN);
  mpfr_div_ui(mid, mid, 2, MPFR_RNDN);
  double v = mpfr_get_d(mid, MPFR_RNDN);
  mpfr_clear(mid);
  return v;
}

double RealInterval::loDouble() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double RealInterval::hiDouble() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double RealInterval::widthDouble() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double v = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return v;
}

RealInterval thetaInterval(long m, mpfr_prec_t prec) {
  RealInterval r(prec);
  mpfr_set_si(r.lo_, m, MPFR_RNDU);
  mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDU);
  mpfr_si_div(r.lo_, 1, r.lo_, MPFR_RNDD);
  mpfr_set_si(r.hi_, m, MPFR_RNDD);
  mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDD);
  mpfr_si_div(r.hi_, 1, r.hi_, MPFR_RNDU);
  return r;
}

mpz_class rigorousFloor(const std::function<RealInterval(mpfr_prec_t)>& eval,
                        mpfr_prec_t startPrec) {
  for (mpfr_prec_t prec = std::max<mpfr_prec_t>(startPrec, 16);;
       prec *= 2) {
    RealInterval iv = eval(prec);
    mpz_class out;
    if (iv.floorExactlyKnown(out)) return out;
    if (iv.widthBelow(kAmbiguityExponent))
      throw AmbiguityError(
          "floor undecidable: value within 2^-128 of an integer");
    if (prec > kPrecCeiling)
      throw std::runtime_error("rigorousFloor: precision ceiling exceeded");
  }
}

bool rigorousLessThan(const std::function<RealInterval(mpfr_prec_t)>& eval,
                      const mpz_class& num, const mpz_class& den,
                      mpfr_prec_t startPrec) {
  for (mpfr_prec_t prec = std::max<mpfr_prec_t>(startPrec, 16);;
       prec *= 2) {
    RealInterval iv = eval(prec);
    int c = iv.compareRational(num, den);
    if (c < 0) return true;
    if (c > 0) return false;
    if (iv.widthBelow(kAmbiguityExponent))
      throw AmbiguityError(
          "comparison undecidable: value within 2^-128 of the threshold");
    if (prec > kPrecCeiling)
      throw std::runtime_error("rigorousLessThan: precision ceiling exceeded");
  }
}

Rational::Rational(long n, long d) : num(n), den(d) { reduce(); }
Rational::Rational(mpz_class n, mpz_class d)
    : num(std::move(n)), den(std::move(d)) {
  reduce();
}

void Rational::reduce() {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

double Rational::toDouble() const {
  mpq_class q(num, den);
  return q.get_d();
}

std::string Rational::str() const {
  if (den == 1) return num.get_str();
  return num.get_str() + "/" + den.get_str();
}

Rational parseRational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  // All literals are decimal; pass an explicit base so mpz never interprets a
  // leading zero as octal.
  if (slash != std::string::npos) {
    mpz_class n(text.substr(0, slash), 10);
    mpz_class d(text.substr(slash + 1), 10);
    return Rational(n, d);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos)
    return Rational(mpz_class(text, 10), mpz_class(1));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  bool neg = !digits.empty() && digits[0] == '-';
  std::string payload = neg ? digits.substr(1) : digits;
  if (payload.empty() ||
      !std::all_of(payload.begin(), payload.end(),
                   [](unsigned char c) { return std::isdigit(c); }))
    throw std::invalid_argument("bad rational literal: " + text);
  mpz_class n(digits, 10);
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 10, text.size() - dot - 1);
  return Rational(n, d);
}

}  // namespace thetacf
