#include <doctest.h>

#include <cmath>
#include <vector>

#include "thetacf/construction.hpp"
#include "thetacf/dimension.hpp"

using namespace thetacf;

TEST_CASE("closed-form dimension sandwich") {
  JarnikBounds b = jarnikBounds(2, 10);
  CHECK(b.lower == doctest::Approx(0.50350587638536148).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(0.96454263102988846).epsilon(1e-12));

  JarnikBounds b2 = jarnikBounds(2, 100);
  CHECK(b2.lower == doctest::Approx(0.94592638257662354).epsilon(1e-12));
  CHECK(b2.upper == doctest::Approx(0.99787340293606597).epsilon(1e-12));

  JarnikBounds b3 = jarnikBounds(2, 1000);
  CHECK(b3.lower == doctest::Approx(0.99454402061961933).epsilon(1e-12));
  CHECK(b3.upper == doctest::Approx(0.99985553457598120).epsilon(1e-12));

  JarnikBounds b4 = jarnikBounds(2, 10000);
  CHECK(b4.lower == doctest::Approx(0.99945391107291659).epsilon(1e-12));
  CHECK(b4.upper == doctest::Approx(0.99998914486791668).epsilon(1e-12));

  // In the unit interval, ordered, monotone in M.
  double prevLo = 0.0, prevUp = 0.0;
  for (const JarnikBounds* jb : {&b, &b2, &b3, &b4}) {
    CHECK(jb->lower > 0.0);
    CHECK(jb->upper < 1.0);
    CHECK(jb->lower < jb->upper);
    CHECK(jb->lower > prevLo);
    CHECK(jb->upper > prevUp);
    prevLo = jb->lower;
    prevUp = jb->upper;
  }

  CHECK_THROWS_AS(jarnikBounds(2, 5), std::domain_error);  // needs M > 2m+1
  JarnikBounds b5 = jarnikBounds(3, 8);
  CHECK(b5.lower > 0.0);
  CHECK(b5.lower < b5.upper);
  CHECK(b5.upper < 1.0);
}

TEST_CASE("depth-one root solves") {
  MoranRoot lower = moranRoot(2, 10, 1, 1e-9, LengthMode::Lower);
  MoranRoot upper = moranRoot(2, 10, 1, 1e-9, LengthMode::Upper);
  MoranRoot exact = moranRoot(2, 10, 1, 1e-9, LengthMode::Exact);

  CHECK(lower.root == doctest::Approx(0.73102898).epsilon(1e-6));
  CHECK(upper.root == doctest::Approx(0.87194202).epsilon(1e-6));
  CHECK(exact.root == doctest::Approx(0.77129366).epsilon(1e-6));
  for (const MoranRoot* r : {&lower, &upper, &exact}) {
    CHECK(r->cylinderCount == 9);
    CHECK(r->residualLo > 0.0);
    CHECK(r->residualHi < 0.0);
    CHECK(r->intervalLo <= r->root);
    CHECK(r->root <= r->intervalHi);
    CHECK(r->intervalHi - r->intervalLo <= 2e-9);
    CHECK(r->iterations < 200);
  }

  // Independent hand evaluation of the depth-one sum at two points, from the
  // exact lengths |I_1(l)| = sqrt(2)/(l(l+1)).
  auto sumAt = [](double s) {
    double total = 0.0;
    for (int l = 2; l <= 10; ++l)
      total += std::pow(std::sqrt(2.0) / (l * (l + 1.0)), s);
    return total;
  };
  CHECK(sumAt(0.5) == doctest::Approx(2.033122027).epsilon(1e-8));
  CHECK(sumAt(0.8) == doctest::Approx(0.9313219182).epsilon(1e-8));
  CHECK(sumAt(exact.root) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("exact roots at deeper levels") {
  MoranRoot d2 = moranRoot(2, 10, 2, 1e-9, LengthMode::Exact);
  CHECK(d2.root == doctest::Approx(0.82268943).epsilon(1e-6));
  CHECK(d2.cylinderCount == 81);
  MoranRoot d3 = moranRoot(2, 10, 3, 1e-9, LengthMode::Exact);
  CHECK(d3.root == doctest::Approx(0.84220573).epsilon(1e-6));
  CHECK(d3.cylinderCount == 729);
}

TEST_CASE("bracket sandwich tightens with depth") {
  JarnikBounds jb = jarnikBounds(2, 10);
  std::vector<DimensionBracket> brs;
  for (std::size_t depth = 1; depth <= 4; ++depth)
    brs.push_back(moranBracket(2, 10, depth, 1e-9));

  for (std::size_t i = 0; i < brs.size(); ++i) {
    CHECK(brs[i].sLow < brs[i].sHigh);
    MoranRoot ex = moranRoot(2, 10, i + 1, 1e-9, LengthMode::Exact);
    CHECK(brs[i].sLow <= ex.root);
    CHECK(ex.root <= brs[i].sHigh);
    CHECK(brs[i].sLow <= jb.upper);
    CHECK(jb.lower <= brs[i].sHigh);
    if (i > 0) {
      CHECK(brs[i].width() < brs[i - 1].width());
      // consecutive brackets overlap
      CHECK(brs[i].sLow <= brs[i - 1].sHigh);
      CHECK(brs[i - 1].sLow <= brs[i].sHigh);
    }
  }

  // depth-2 and depth-3 frozen brackets
  CHECK(brs[1].sLow == doctest::Approx(0.79175895).epsilon(1e-6));
  CHECK(brs[1].sHigh == doctest::Approx(0.86460036).epsilon(1e-6));
  CHECK(brs[2].sLow == doctest::Approx(0.82148937).epsilon(1e-6));
  CHECK(brs[2].sHigh == doctest::Approx(0.87236825).epsilon(1e-6));
}

TEST_CASE("enumeration budget and parallel determinism") {
  CHECK_THROWS_AS(moranRoot(2, 10, 12, 1e-6, LengthMode::Exact, 1, 1000),
                  std::domain_error);

  MoranRoot one = moranRoot(2, 10, 4, 1e-9, LengthMode::Exact, 1);
  MoranRoot three = moranRoot(2, 10, 4, 1e-9, LengthMode::Exact, 3);
  CHECK(one.root == three.root);
  CHECK(one.residualLo == three.residualLo);
  CHECK(one.residualHi == three.residualHi);
  CHECK(one.iterations == three.iterations);
}

TEST_CASE("empirical regularity exponent of the deletion map") {
  ConstructionParams p;
  p.m = 2;
  p.M = 10;
  p.alpha = parseRational("4");
  p.sparse = makeSparseSpec(parseRational("3/4"));
  p.n0 = 2;

  HolderEstimate early = holderExponentEstimate(p, 12, 50, 2024,
                                                PairScheme::EarlyDigit);
  CHECK(early.usedPairs >= 45);
  CHECK(early.minExponent >= 0.9);
  CHECK(early.minExponent <= early.medianExponent);
  CHECK(early.medianExponent <= early.maxExponent);
  CHECK(early.medianExponent == doctest::Approx(1.0).epsilon(0.02));

  HolderEstimate randomBase = holderExponentEstimate(p, 12, 50, 2024,
                                                     PairScheme::RandomBase);
  CHECK(randomBase.usedPairs >= 45);
  CHECK(randomBase.minExponent >= 0.9);

  CHECK_THROWS(holderExponentEstimate(p, 12, 1, 2024, PairScheme::EarlyDigit));
}
