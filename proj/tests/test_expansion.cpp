#include <doctest.h>

#include <cmath>
#include <vector>

#include "thetacf/expansion.hpp"
#include "thetacf/rng.hpp"

using namespace thetacf;

namespace {

DigitWord randomWord(Rng& rng, std::int64_t m, std::size_t depth,
                     std::int64_t span) {
  DigitWord w;
  w.m = m;
  for (std::size_t i = 0; i < depth; ++i)
    w.digits.push_back(rng.uniformInt(m, m + span));
  return w;
}

}  // namespace

TEST_CASE("digit word validation") {
  DigitWord ok{2, {2, 5, 11}, {}, false};
  CHECK_NOTHROW(validateWord(ok));
  DigitWord small{2, {2, 1}, {}, false};
  CHECK_THROWS_AS(validateWord(small), std::domain_error);
  DigitWord badField{4, {4, 5}, {}, false};
  CHECK_THROWS_AS(validateWord(badField), std::domain_error);
}

TEST_CASE("digit streams of exact points") {
  QuadraticNumber s = QuadraticNumber::sqrtM(2);
  QuadraticNumber one = QuadraticNumber::integer(1, 2);

  DigitWord a = digitStream(s - one, 8);  // sqrt(2) - 1
  CHECK(a.digits == std::vector<std::int64_t>{3, 4, 2, 4, 2, 4, 2, 4});
  CHECK_FALSE(a.terminated);

  DigitWord b = digitStream(QuadraticNumber::rational(1, 2, 2), 8);
  CHECK(b.digits == std::vector<std::int64_t>{2, 2, 4, 2, 4, 2, 4, 2});
  CHECK_FALSE(b.terminated);

  // theta itself: single digit m, then the orbit hits zero.
  DigitWord c = digitStream(QuadraticNumber::theta(2), 5);
  CHECK(c.digits == std::vector<std::int64_t>{2});
  CHECK(c.terminated);

  // theta/2: digit 4, then zero.
  DigitWord d = digitStream(QuadraticNumber::theta(2) /
                                QuadraticNumber::integer(2, 2),
                            5);
  CHECK(d.digits == std::vector<std::int64_t>{4});
  CHECK(d.terminated);

  DigitWord e = digitStream(QuadraticNumber::theta(3), 5);
  CHECK(e.digits == std::vector<std::int64_t>{3});
  CHECK(e.terminated);
}

TEST_CASE("domain guards on the digit map") {
  // Zero is the terminal point: an empty, already-terminated expansion.
  DigitWord z = digitStream(QuadraticNumber::zero(2), 3);
  CHECK(z.digits.empty());
  CHECK(z.terminated);
  CHECK_THROWS_AS(digitStream(QuadraticNumber::integer(1, 2), 3),
                  std::domain_error);  // 1 > theta
  CHECK_THROWS_AS(digitStream(-QuadraticNumber::theta(2), 3),
                  std::domain_error);
  DigitWord empty{2, {}, {}, false};
  CHECK_THROWS_AS(valueOf(empty), std::domain_error);
}

TEST_CASE("orbit points stay in the fundamental interval") {
  QuadraticNumber x = QuadraticNumber::sqrtM(2) - QuadraticNumber::integer(1, 2);
  std::vector<QuadraticNumber> pts = orbitExact(x, 6);
  CHECK(pts.size() == 7);
  CHECK(pts[0] == x);
  QuadraticNumber th = QuadraticNumber::theta(2);
  for (const auto& p : pts) {
    CHECK(p.sign() > 0);
    CHECK(compareExact(p, th) <= 0);
  }
  // One hand-applied step: T(x) = 1/x - theta * digit.
  GaussStepResult st = gaussStep(x);
  CHECK(st.digit == 3);
  CHECK(st.next == x.inverse() - th.scaled(st.digit));
  CHECK(pts[1] == st.next);
}

TEST_CASE("finite words round-trip through their value") {
  // A trailing digit equal to m is the one ambiguous finite expansion (the
  // tail [m] is exactly theta), so sample final digits above m.
  Rng rng(2026);
  const std::int64_t ms[3] = {2, 3, 5};
  for (int i = 0; i < 100; ++i) {
    std::int64_t m = ms[i % 3];
    std::size_t depth = 1 + static_cast<std::size_t>(rng.uniformInt(0, 9));
    DigitWord w = randomWord(rng, m, depth, 8);
    w.digits.back() = rng.uniformInt(m + 1, m + 9);
    QuadraticNumber x = valueOf(w);
    DigitWord back = digitStream(x, depth + 3);
    CHECK(back.digits == w.digits);
    CHECK(back.terminated);
  }
}

TEST_CASE("a trailing digit m collapses into the previous digit") {
  // [l1, ..., lk, m] and [l1, ..., lk + 1] are the same point, and the digit
  // map produces the shorter expansion.
  DigitWord longer{2, {3, 5, 2}, {}, false};
  DigitWord shorter{2, {3, 6}, {}, false};
  CHECK(valueOf(longer) == valueOf(shorter));
  DigitWord back = digitStream(valueOf(longer), 5);
  CHECK(back.digits == shorter.digits);
  CHECK(back.terminated);

  DigitWord longer3{3, {4, 7, 3}, {}, false};
  DigitWord shorter3{3, {4, 8}, {}, false};
  CHECK(valueOf(longer3) == valueOf(shorter3));
}

TEST_CASE("cylinder midpoints reproduce their digits") {
  Rng rng(909);
  for (int i = 0; i < 60; ++i) {
    std::int64_t m = i % 2 == 0 ? 2 : 3;
    std::size_t depth = 1 + static_cast<std::size_t>(rng.uniformInt(0, 7));
    DigitWord w = randomWord(rng, m, depth, 6);
    Cylinder cyl = Cylinder::fromDigits(FieldSpec(m), w.digits);
    QuadraticNumber mid = (cyl.leftEndpoint() + cyl.rightEndpoint()) /
                          QuadraticNumber::integer(2, m);
    DigitWord back = digitStream(mid, depth);
    CHECK(back.digits == w.digits);
  }
}

TEST_CASE("cylinder oracle values at depth two") {
  Cylinder c = Cylinder::fromDigits(FieldSpec(2), {2, 2});
  CHECK(c.depth() == 2);
  CHECK(c.value().toDecimal(8) == "0.47140452");
  CHECK(c.otherEndpoint().toDecimal(8) == "0.53033009");
  CHECK(c.q() == QuadraticNumber::integer(3, 2));  // Q_2 = R_2 / m
  CHECK(c.determinantOk());
  // Exact length sqrt(2)/24 = m^{3/2} / (R_2 (R_2 + R_1)) with R_2=6, R_1=2.
  CHECK(c.length() ==
        QuadraticNumber(mpz_class(0), mpz_class(1), mpz_class(24), 2));
  CHECK(c.length() == c.rightEndpoint() - c.leftEndpoint());

  // Depth one: word (2) has exact length sqrt(2)/6.
  Cylinder d1 = Cylinder::fromDigits(FieldSpec(2), {2});
  CHECK(d1.length() ==
        QuadraticNumber(mpz_class(0), mpz_class(1), mpz_class(6), 2));
}

TEST_CASE("cylinders nest and tile") {
  FieldSpec f(2);
  Cylinder parent = Cylinder::fromDigits(f, {3});
  Cylinder child = parent.child(4);
  CHECK(child.depth() == 2);
  // child == fromDigits({3,4})
  CHECK(child.value() == Cylinder::fromDigits(f, {3, 4}).value());
  CHECK(compareExact(parent.leftEndpoint(), child.leftEndpoint()) <= 0);
  CHECK(compareExact(child.rightEndpoint(), parent.rightEndpoint()) <= 0);

  // Depth-1 intervals are adjacent: left end of (l) equals right end of (l+1),
  // and the first one reaches theta.
  QuadraticNumber th = QuadraticNumber::theta(2);
  CHECK(Cylinder::fromDigits(f, {2}).rightEndpoint() == th);
  for (std::int64_t l = 2; l <= 12; ++l) {
    Cylinder a = Cylinder::fromDigits(f, {l});
    Cylinder b = Cylinder::fromDigits(f, {l + 1});
    CHECK(a.leftEndpoint() == b.rightEndpoint());
  }
}

TEST_CASE("endpoint orientation alternates with depth parity") {
  FieldSpec f(2);
  std::vector<std::int64_t> digits;
  for (std::size_t depth = 1; depth <= 5; ++depth) {
    digits.push_back(2);
    Cylinder c = Cylinder::fromDigits(f, digits);
    if (depth % 2 == 0) {
      CHECK(c.value() == c.leftEndpoint());
    } else {
      CHECK(c.value() == c.rightEndpoint());
    }
  }
}

TEST_CASE("metric report holds on random admissible words") {
  Rng rng(31337);
  const std::int64_t ms[3] = {2, 3, 5};
  for (int i = 0; i < 300; ++i) {
    std::int64_t m = ms[i % 3];
    std::size_t depth = 2 + static_cast<std::size_t>(rng.uniformInt(0, 8));
    DigitWord w = randomWord(rng, m, depth, 15);
    MetricReport r = verifyMetric(w);
    CHECK(r.allOk);
    CHECK(r.rows.size() == depth);
    if (!r.allOk) {
      for (const auto& f : r.failures) MESSAGE(f);
      break;
    }
  }
}

TEST_CASE("denominator sensitivity oracle") {
  DigitWord w{2, {2, 2}, {}, false};
  SensitivityRow row = denominatorSensitivity(w, 1);
  CHECK(row.ok);
  CHECK(row.ratio == doctest::Approx(2.121320344).epsilon(1e-8));
  CHECK(row.lowerBound == doctest::Approx(1.414213562).epsilon(1e-8));
  CHECK(row.upperBound == doctest::Approx(2.828427125).epsilon(1e-8));
}

TEST_CASE("adjacent digit gaps satisfy the two-sided identity") {
  DigitWord p1{2, {3}, {}, false};
  DigitWord p2{2, {2, 4}, {}, false};
  for (std::int64_t d = 2; d <= 12; ++d) {
    AdjacentGapReport g1 = adjacentGap(p1, d);
    CHECK(g1.identityOk);
    CHECK(g1.boundOk);
    AdjacentGapReport g2 = adjacentGap(p2, d);
    CHECK(g2.identityOk);
    CHECK(g2.boundOk);
  }
}
