#include "thetacf/expansion.hpp"

#include <algorithm>

namespace thetacf {

namespace {

QuadraticNumber absValue(const QuadraticNumber& x) {
  return x.sign() < 0 ? -x : x;
}

}  // namespace

void validateWord(const DigitWord& w) {
  if (!isValidFieldModulus(w.m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  for (std::size_t i = 0; i < w.digits.size(); ++i) {
    if (w.digits[i] < w.m)
      throw std::domain_error("digit " + std::to_string(w.digits[i]) +
                              " at position " + std::to_string(i + 1) +
                              " is below the alphabet minimum " +
                              std::to_string(w.m));
  }
  std::size_t prev = 0;
  for (std::size_t pos : w.insertedPositions) {
    if (pos == 0 || pos > w.digits.size() || pos <= prev)
      throw std::domain_error("inserted positions must be strictly increasing and within the word");
    prev = pos;
  }
}

GaussStepResult gaussStep(const QuadraticNumber& x) {
  if (x.isZero()) throw OrbitTerminated();
  std::int64_t m = x.m();
  QuadraticNumber theta = QuadraticNumber::theta(m);
  if (x.sign() < 0 || compareExact(x, theta) > 0)
    throw std::domain_error("digit map applied outside (0, theta]");
  QuadraticNumber inv = x.inverse();
  QuadraticNumber scaledInv = inv * QuadraticNumber::sqrtM(m);  // 1/(theta*x)
  mpz_class digit = scaledInv.floorExact();
  QuadraticNumber next = inv - theta.scaled(digit);
  return GaussStepResult{digit, next};
}

DigitWord digitStream(const QuadraticNumber& x, std::size_t count) {
  DigitWord w;
  w.m = x.m();
  w.digits.reserve(count);
  QuadraticNumber cur = x;
  for (std::size_t i = 0; i < count; ++i) {
    if (cur.isZero()) {
      w.terminated = true;
      break;
    }
    GaussStepResult step = gaussStep(cur);
    if (!mpz_fits_slong_p(step.digit.get_mpz_t()))
      throw std::overflow_error("expansion digit exceeds the 64-bit range");
    w.digits.push_back(static_cast<std::int64_t>(step.digit.get_si()));
    cur = step.next;
  }
  if (!w.terminated && cur.isZero()) w.terminated = true;
  return w;
}

std::vector<QuadraticNumber> orbitExact(const QuadraticNumber& x,
                                        std::size_t count) {
  std::vector<QuadraticNumber> points;
  points.reserve(count + 1);
  points.push_back(x);
  for (std::size_t i = 0; i < count; ++i) {
    const QuadraticNumber& cur = points.back();
    if (cur.isZero()) break;
    points.push_back(gaussStep(cur).next);
  }
  return points;
}

QuadraticNumber valueOf(const DigitWord& w) {
  validateWord(w);
  if (w.digits.empty())
    throw std::domain_error("the empty word has no finite expansion value");
  return Cylinder::fromDigits(FieldSpec(w.m), w.digits).value();
}

QuadraticNumber powSqrtM(const mpz_class& coeff, long exponent,
                         std::int64_t m) {
  mpz_class mm(static_cast<long>(m));
  mpz_class scale;
  if (exponent >= 0) {
    mpz_pow_ui(scale.get_mpz_t(), mm.get_mpz_t(),
               static_cast<unsigned long>(exponent / 2));
    if (exponent % 2 == 0) return QuadraticNumber(coeff * scale, 0, 1, m);
    return QuadraticNumber(0, coeff * scale, 1, m);
  }
  long k = -exponent;
  if (k % 2 == 0) {
    mpz_pow_ui(scale.get_mpz_t(), mm.get_mpz_t(),
               static_cast<unsigned long>(k / 2));
    return QuadraticNumber(coeff, 0, scale, m);
  }
  mpz_pow_ui(scale.get_mpz_t(), mm.get_mpz_t(),
             static_cast<unsigned long>((k + 1) / 2));
  return QuadraticNumber(0, coeff, scale, m);
}

Cylinder Cylinder::base(const FieldSpec& field) { return Cylinder(field.m); }

Cylinder Cylinder::fromDigits(const FieldSpec& field,
                              const std::vector<std::int64_t>& digits) {
  Cylinder c(field.m);
  for (std::int64_t d : digits) c = c.child(d);
  return c;
}

Cylinder Cylinder::child(std::int64_t digit) const {
  if (digit < m_)
    throw std::domain_error("digit " + std::to_string(digit) +
                            " is below the alphabet minimum " +
                            std::to_string(m_));
  Cylinder next(m_);
  next.depth_ = depth_ + 1;
  next.r_ = digit * r_ + m_ * rPrev_;
  next.rPrev_ = r_;
  next.s_ = digit * s_ + m_ * sPrev_;
  next.sPrev_ = s_;
  return next;
}

QuadraticNumber Cylinder::q() const {
  return powSqrtM(r_, -static_cast<long>(depth_), m_);
}

QuadraticNumber Cylinder::qPrev() const {
  return powSqrtM(rPrev_, -(static_cast<long>(depth_) - 1), m_);
}

QuadraticNumber Cylinder::p() const {
  return powSqrtM(s_, -(static_cast<long>(depth_) + 1), m_);
}

QuadraticNumber Cylinder::pPrev() const {
  return powSqrtM(sPrev_, -static_cast<long>(depth_), m_);
}

QuadraticNumber Cylinder::value() const {
  // P_n / Q_n = S_n / (R_n sqrt(m)) = S_n sqrt(m) / (m R_n).
  return QuadraticNumber(0, s_, r_ * m_, m_);
}

QuadraticNumber Cylinder::otherEndpoint() const {
  // (P_n + theta P_{n-1}) / (Q_n + theta Q_{n-1}) telescopes in registers to
  // (S_n + S_{n-1}) / ((R_n + R_{n-1}) sqrt(m)).
  return QuadraticNumber(0, s_ + sPrev_, (r_ + rPrev_) * m_, m_);
}

QuadraticNumber Cylinder::leftEndpoint() const {
  return depth_ % 2 == 0 ? value() : otherEndpoint();
}

QuadraticNumber Cylinder::rightEndpoint() const {
  return depth_ % 2 == 0 ? otherEndpoint() : value();
}

QuadraticNumber Cylinder::length() const {
  // theta / (Q_n (Q_n + theta Q_{n-1})) = sqrt(m)^{2n-1} / (R_n (R_n + R_{n-1})).
  QuadraticNumber t = powSqrtM(1, 2 * static_cast<long>(depth_) - 1, m_);
  return QuadraticNumber(t.p(), t.q(), t.r() * r_ * (r_ + rPrev_), m_);
}

bool Cylinder::determinantOk() const {
  mpz_class det = sPrev_ * r_ - s_ * rPrev_;
  mpz_class expect;
  mpz_class mm(static_cast<long>(m_));
  mpz_pow_ui(expect.get_mpz_t(), mm.get_mpz_t(),
             static_cast<unsigned long>(depth_));
  if (depth_ % 2 == 1) expect = -expect;
  return det == expect;
}

namespace {

// Registers R_j for the full word (prefix denominators, index 0..n).
std::vector<mpz_class> denominatorRegisters(const DigitWord& w) {
  std::vector<mpz_class> regs;
  regs.reserve(w.digits.size() + 1);
  mpz_class prev = 0, cur = 1;
  regs.push_back(cur);
  for (std::int64_t d : w.digits) {
    mpz_class next = d * cur + w.m * prev;
    prev = cur;
    cur = next;
    regs.push_back(cur);
  }
  return regs;
}

// Final denominator register of the word with digit k (1-based) removed.
mpz_class omitRegister(const DigitWord& w, std::size_t k) {
  mpz_class prev = 0, cur = 1;
  for (std::size_t i = 0; i < w.digits.size(); ++i) {
    if (i + 1 == k) continue;
    mpz_class next = w.digits[i] * cur + w.m * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

SensitivityRow denominatorSensitivity(const DigitWord& w, std::size_t k) {
  validateWord(w);
  if (k == 0 || k > w.digits.size())
    throw std::out_of_range("sensitivity position outside the word");
  std::vector<mpz_class> regs = denominatorRegisters(w);
  const mpz_class& full = regs.back();
  mpz_class omitted = omitRegister(w, k);

  SensitivityRow row;
  row.k = k;
  row.digit = w.digits[k - 1];
  // ratio = Q_n(full) / Q_{n-1}(omit) = theta * R_n / R'_{n-1}.
  row.ratio = QuadraticNumber(0, full, omitted * w.m, w.m).toDouble();
  mpz_class span = row.digit + w.m;
  row.lowerBound = QuadraticNumber(0, span, 2 * w.m, w.m).toDouble();
  row.upperBound = QuadraticNumber(0, span, w.m, w.m).toDouble();
  bool lowerOk = span * omitted <= 2 * full;
  bool upperOk = full <= span * omitted;
  row.ok = lowerOk && upperOk;
  return row;
}

AdjacentGapReport adjacentGap(const DigitWord& prefix, std::int64_t d) {
  validateWord(prefix);
  if (d < prefix.m)
    throw std::domain_error("child digit below the alphabet minimum");
  Cylinder base = Cylinder::fromDigits(FieldSpec(prefix.m), prefix.digits);
  Cylinder left = base.child(d);
  Cylinder right = base.child(d + 1);

  QuadraticNumber theta = QuadraticNumber::theta(prefix.m);
  QuadraticNumber gap = theta / (left.q() * right.q());
  QuadraticNumber direct = absValue(left.value() - right.value());
  bool identityOk = compareExact(direct, gap) == 0;

  QuadraticNumber qsq = base.q() * base.q();
  QuadraticNumber bound =
      (theta * qsq).scaled(mpz_class(d + 1) * mpz_class(d + 2)).inverse();
  bool boundOk = compareExact(gap, bound) >= 0;
  return AdjacentGapReport{d, gap, bound, identityOk, boundOk};
}

MetricReport verifyMetric(const DigitWord& w) {
  validateWord(w);
  MetricReport rep;
  rep.m = w.m;
  rep.depth = w.digits.size();
  rep.allOk = true;

  auto fail = [&rep](const std::string& what) {
    rep.allOk = false;
    rep.failures.push_back(what);
  };

  Cylinder cyl = Cylinder::base(FieldSpec(w.m));
  mpz_class growthFloor = 1;  // (m+1)^{n-1}
  mpz_class mPow = 1;         // m^n
  for (std::size_t n = 1; n <= w.digits.size(); ++n) {
    cyl = cyl.child(w.digits[n - 1]);
    if (n > 1) growthFloor *= (w.m + 1);
    mPow *= w.m;

    MetricDepthRow row;
    row.n = n;
    row.q = cyl.q().toDouble();
    row.length = cyl.length().toDouble();

    const mpz_class& r = cyl.reg();
    const mpz_class& rPrev = cyl.regPrev();
    // Q_n^2 >= (m+1)^{n-1}  <=>  R_n^2 >= (m+1)^{n-1} m^n.
    row.growthOk = r * r >= growthFloor * mPow;
    // |I_n| <= theta / Q_n^2  <=>  R_n (R_n + R_{n-1}) >= R_n^2.
    row.lengthUpperOk = r * (r + rPrev) >= r * r;
    // theta / ((1 + theta^2) Q_n^2) <= |I_n|
    //   <=>  m R_n (R_n + R_{n-1}) <= (m+1) R_n^2.
    row.lengthLowerOk = w.m * r * (r + rPrev) <= (w.m + 1) * r * r;
    // Q_{n-1} <= theta Q_n  <=>  m R_{n-1} <= R_n.
    row.qRatioOk = w.m * rPrev <= r;
    row.determinantOk = cyl.determinantOk();

    if (!row.growthOk) fail("denominator growth failed at depth " + std::to_string(n));
    if (!row.lengthUpperOk) fail("length upper bound failed at depth " + std::to_string(n));
    if (!row.lengthLowerOk) fail("length lower bound failed at depth " + std::to_string(n));
    if (!row.qRatioOk) fail("denominator ratio bound failed at depth " + std::to_string(n));
    if (!row.determinantOk) fail("determinant identity failed at depth " + std::to_string(n));
    rep.rows.push_back(std::move(row));
  }

  for (std::size_t k = 1; k <= w.digits.size(); ++k) {
    SensitivityRow row = denominatorSensitivity(w, k);
    if (!row.ok) fail("deletion sensitivity failed at position " + std::to_string(k));
    rep.sensitivity.push_back(row);
  }
  return rep;
}

}  // namespace thetacf
