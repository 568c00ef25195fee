#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "thetacf/construction.hpp"
#include "thetacf/rng.hpp"

using namespace thetacf;

namespace {

ConstructionParams goldenParams() {
  ConstructionParams p;
  p.m = 2;
  p.M = 10;
  p.alpha = parseRational("4");
  p.sparse = makeSparseSpec(parseRational("3/4"));
  p.n0 = 2;
  p.base = BaseWordSpec{};  // constant m
  return p;
}

std::vector<std::int64_t> indexPrefix(const SparseSpec& spec, std::size_t upTo) {
  std::vector<std::int64_t> out;
  for (std::size_t k = 1; k <= upTo; ++k)
    out.push_back(sparseIndex(k, spec).get_si());
  return out;
}

}  // namespace

TEST_CASE("sparse index sequences match hand-computed prefixes") {
  SparseSpec s34 = makeSparseSpec(parseRational("3/4"));
  CHECK(indexPrefix(s34, 12) ==
        std::vector<std::int64_t>{2, 5, 9, 16, 28, 46, 73, 116, 180, 276, 419,
                                  631});
  CHECK(s34.kMin == 2);
  CHECK(sparseIndex(100, s34) == mpz_class("54149865291659"));

  SparseSpec s14 = makeSparseSpec(parseRational("1/4"));
  CHECK(indexPrefix(s14, 12) ==
        std::vector<std::int64_t>{2, 3, 3, 4, 4, 4, 5, 5, 5, 5, 6, 6});
  CHECK(s14.kMin == 2);

  SparseSpec s13 = makeSparseSpec(parseRational("1/3"));
  CHECK(indexPrefix(s13, 8) ==
        std::vector<std::int64_t>{2, 3, 4, 4, 5, 6, 6, 7});

  CHECK_THROWS(makeSparseSpec(parseRational("0")));
  CHECK_THROWS(makeSparseSpec(parseRational("1")));
  CHECK_THROWS(makeSparseSpec(parseRational("5/4")));
}

TEST_CASE("growth diagnostics in exact and log-domain modes") {
  SparseSpec s34 = makeSparseSpec(parseRational("3/4"));

  auto exact = sequenceDiagnostics({5}, s34, false);
  REQUIRE(exact.size() == 1);
  CHECK_FALSE(exact[0].logDomain);
  CHECK(exact[0].gap == 18.0);  // n_6 - n_5 = 46 - 28
  CHECK(exact[0].incrD == doctest::Approx(1.129234436).epsilon(1e-8));
  CHECK(exact[0].floorErrBound == 0.0);

  auto logRows = sequenceDiagnostics({100, 100000000}, s34, true);
  REQUIRE(logRows.size() == 2);
  CHECK(logRows[0].logDomain);
  CHECK(logRows[0].incrC == doctest::Approx(0.23687559).epsilon(1e-6));
  CHECK(logRows[1].incrC == doctest::Approx(0.00750000).epsilon(1e-4));
  CHECK(logRows[0].incrD == doctest::Approx(1.05589986).epsilon(1e-6));
  CHECK(logRows[1].incrD == doctest::Approx(0.11111633).epsilon(1e-6));
  CHECK(logRows[0].floorErrBound > 0.0);
  CHECK(logRows[0].floorErrBound < 1e-13);

  auto gaps = sequenceDiagnostics({10, 10000}, s34, true);
  CHECK(gaps[0].relGap == doctest::Approx(0.51693538).epsilon(1e-6));
  CHECK(gaps[1].relGap == doctest::Approx(0.07788314).epsilon(1e-6));
}

TEST_CASE("construction parameters are validated") {
  ConstructionParams p = goldenParams();

  ConstructionParams bad = p;
  bad.m = 4;
  CHECK_THROWS_AS(synthesize(bad, 30), std::domain_error);

  bad = p;
  bad.M = 5;  // must exceed 2m+1
  CHECK_THROWS_AS(synthesize(bad, 30), std::domain_error);

  bad = p;
  bad.alpha = Rational(0, 1);
  CHECK_THROWS_AS(synthesize(bad, 30), std::domain_error);

  bad = p;
  bad.n0 = 1;  // below kMin
  CHECK_THROWS_AS(synthesize(bad, 30), std::domain_error);

  bad = p;
  bad.base.policy = BasePolicy::Explicit;
  bad.base.pattern = {2, 2};  // too short for depth 30
  CHECK_THROWS(synthesize(bad, 30));
}

TEST_CASE("scan for an admissible start index") {
  ConstructionParams p = goldenParams();
  ConditionReport rep = findN0(p, 1000);
  REQUIRE(rep.n0Conditions.has_value());
  REQUIRE(rep.n0Construction.has_value());
  CHECK(*rep.n0Conditions == 2);
  CHECK(*rep.n0Construction == 2);
  REQUIRE_FALSE(rep.records.empty());
  const ConditionRecord& r = rep.records.front();
  CHECK(r.k == 2);
  CHECK(r.nK == 5);
  CHECK(r.nK1 == 9);
  CHECK(r.condAValue == doctest::Approx(41.780510209700424).epsilon(1e-9));
  CHECK(r.condBValue == doctest::Approx(0.96373686568413319).epsilon(1e-9));
  CHECK(r.condCGap == 4.0);
  CHECK(r.condCBound == doctest::Approx(4.5850202160233557).epsilon(1e-9));
  CHECK(r.okA);
  CHECK(r.okB);
  CHECK(r.okC);
  CHECK(r.strictIncrease);
  CHECK(rep.edgeEnvelope > 0.0);

  // With gamma=1/4 and alpha=1 the first admissible index is far out; a short
  // scan reports none.
  ConstructionParams q = p;
  q.alpha = parseRational("1");
  q.sparse = makeSparseSpec(parseRational("1/4"));
  q.n0 = q.sparse.kMin;
  ConditionReport none = findN0(q, 60);
  CHECK_FALSE(none.n0Conditions.has_value());
  CHECK_FALSE(none.n0Construction.has_value());
}

TEST_CASE("golden construction word") {
  ConstructionParams p = goldenParams();
  ConstructedWord cw = synthesize(p, 30);

  REQUIRE(cw.insertions.size() == 4);
  const std::size_t positions[4] = {5, 9, 16, 28};
  const std::int64_t digits[4] = {41, 127, 274, 488};
  const long sums[4] = {8, 55, 194, 490};
  for (int i = 0; i < 4; ++i) {
    CHECK(cw.insertions[i].position == positions[i]);
    CHECK(cw.insertions[i].digit == digits[i]);
    CHECK(cw.insertions[i].accumulatedSum == sums[i]);
  }
  CHECK(cw.word.digits.size() == 30);
  CHECK(cw.word.insertedPositions ==
        std::vector<std::size_t>{5, 9, 16, 28});
  CHECK(cw.word.digits[0] == 2);   // constant base fills with m
  CHECK(cw.word.digits[4] == 41);  // 1-based position 5
  CHECK(cw.word.digits[8] == 127);

  std::vector<RatioSample> series = ratioSeries(cw.word, {5, 6, 7, 8, 9});
  REQUIRE(series.size() == 5);
  const double ratios[5] = {3.925275186, 4.284297803, 4.426122183,
                            4.458333670, 3.993905742};
  for (int i = 0; i < 5; ++i) {
    CHECK(series[i].defined);
    CHECK(series[i].ratio == doctest::Approx(ratios[i]).epsilon(1e-8));
    CHECK(series[i].errBound < 1e-60);
  }

  EnvelopeBlock b2 = ratioEnvelope(cw, 2);
  CHECK(b2.blockStart == 5);
  CHECK(b2.blockEnd == 8);
  CHECK(b2.bMax == 6);
  CHECK(b2.low == doctest::Approx(2.231006618).epsilon(1e-8));
  CHECK(b2.high == doctest::Approx(9.249382772).epsilon(1e-8));
  // The low edge depends on the base mass inside the block, so it tightens
  // when the word is cut at the insertion: at depth 30 the k=3 block holds
  // six base digits (bMax = 12), at depth 9 none.
  EnvelopeBlock b3 = ratioEnvelope(cw, 3);
  CHECK(b3.bMax == 12);
  CHECK(b3.low == doctest::Approx(3.2577665042).epsilon(1e-8));
  CHECK(b3.high == doctest::Approx(6.590173480).epsilon(1e-8));
  ConstructedWord cw9 = synthesize(p, 9);
  EnvelopeBlock b3cut = ratioEnvelope(cw9, 3);
  CHECK(b3cut.bMax == 0);
  CHECK(b3cut.low == doctest::Approx(3.968551923).epsilon(1e-8));
  CHECK(b3cut.high == doctest::Approx(6.590173480).epsilon(1e-8));

  for (const auto& ins : cw.insertions) {
    EnvelopeCheck ec = checkEnvelope(cw, ins.k);
    CHECK(ec.allInside);
    CHECK(ec.violations.empty());
  }
  MonotonicityReport mono = checkMonotonicity(cw);
  CHECK(mono.allAtLeastM);
  CHECK(mono.nonDecreasing);
  CHECK(mono.allOk());
}

TEST_CASE("base word policies") {
  BaseWordSpec constant;  // digit 0 means "use m"
  auto a = generateBaseDigits(constant, 2, 10, 5);
  CHECK(a == std::vector<std::int64_t>{2, 2, 2, 2, 2});

  BaseWordSpec c7{BasePolicy::Constant, 7, {}, 0};
  CHECK(generateBaseDigits(c7, 2, 10, 3) ==
        std::vector<std::int64_t>{7, 7, 7});

  BaseWordSpec per{BasePolicy::Periodic, 0, {3, 4, 5}, 0};
  CHECK(generateBaseDigits(per, 2, 10, 7) ==
        std::vector<std::int64_t>{3, 4, 5, 3, 4, 5, 3});

  BaseWordSpec rnd{BasePolicy::Random, 0, {}, 9};
  auto r1 = generateBaseDigits(rnd, 2, 10, 20);
  auto r2 = generateBaseDigits(rnd, 2, 10, 20);
  CHECK(r1 == r2);
  for (std::int64_t d : r1) {
    CHECK(d >= 2);
    CHECK(d <= 10);
  }

  BaseWordSpec ex{BasePolicy::Explicit, 0, {2, 3}, 0};
  CHECK(generateBaseDigits(ex, 2, 10, 2) == std::vector<std::int64_t>{2, 3});
  CHECK_THROWS(generateBaseDigits(ex, 2, 10, 3));

  BaseWordSpec low{BasePolicy::Constant, 1, {}, 0};
  CHECK_THROWS(generateBaseDigits(low, 2, 10, 3));
  BaseWordSpec high{BasePolicy::Constant, 11, {}, 0};
  CHECK_THROWS(generateBaseDigits(high, 2, 10, 3));
}

TEST_CASE("deletion inverts insertion") {
  ConstructionParams p = goldenParams();
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = Rng::forTask(77, i);
    std::vector<std::int64_t> base;
    for (int j = 0; j < 40; ++j) base.push_back(rng.uniformInt(2, 10));

    ConstructedWord w40 = insertApply(base, p, 40);
    DigitWord seed = seedDelete(w40.word);
    std::size_t consumed = 40 - w40.insertions.size();
    REQUIRE(seed.digits.size() == consumed);
    for (std::size_t j = 0; j < consumed; ++j)
      CHECK(seed.digits[j] == base[j]);
    CHECK(seed.insertedPositions.empty());

    // Prefix determinism: a shorter build is a prefix of a longer one.
    ConstructedWord w30 = insertApply(base, p, 30);
    for (std::size_t j = 0; j < 30; ++j)
      CHECK(w30.word.digits[j] == w40.word.digits[j]);
  }

  // Depth below the first insertion position passes the base through.
  std::vector<std::int64_t> base{3, 4, 5, 6};
  ConstructedWord shallow = insertApply(base, p, 4);
  CHECK(shallow.insertions.empty());
  CHECK(shallow.word.digits == base);
  CHECK(seedDelete(shallow.word).digits == base);
}

TEST_CASE("colliding insertion positions are rejected") {
  ConstructionParams p = goldenParams();
  p.sparse = makeSparseSpec(parseRational("1/4"));
  p.n0 = 2;  // n_2 = n_3 = 3 collide
  CHECK_THROWS_AS(insertionPositions(p, 10), std::domain_error);
}

TEST_CASE("ratio sample edge cases") {
  RatioSample tooShallow = makeRatioSample(2, mpz_class(10), 4);
  CHECK_FALSE(tooShallow.defined);
  RatioSample degenerate = makeRatioSample(5, mpz_class(4), 4);
  CHECK_FALSE(degenerate.defined);

  RatioSample s = makeRatioSample(5, mpz_class(20), 4);
  CHECK(s.defined);
  double expect = 4.0 * std::log(5.0) * std::log(std::log(5.0)) / 16.0;
  CHECK(s.ratio == doctest::Approx(expect).epsilon(1e-12));
  CHECK(s.errBound < 1e-60);
}

TEST_CASE("automatic checkpoints") {
  CHECK(autoCheckpoints(30) == std::vector<std::size_t>{3, 5, 10, 20, 30});
  CHECK(autoCheckpoints(3) == std::vector<std::size_t>{3});
  CHECK(autoCheckpoints(100) ==
        std::vector<std::size_t>{3, 5, 10, 20, 50, 100});
  auto big = autoCheckpoints(1552);
  CHECK(std::find(big.begin(), big.end(), 1000) != big.end());
  CHECK(big.back() == 1552);
  for (std::size_t i = 1; i < big.size(); ++i) CHECK(big[i - 1] < big[i]);
}

TEST_CASE("regularity witnesses on the golden word") {
  ConstructionParams p = goldenParams();
  ConstructedWord cw = synthesize(p, 9);  // insertions at 5 and 9
  HolderWitnessReport hw = holderWitnessBounds(cw);

  REQUIRE(hw.step2.size() == 2);
  CHECK(hw.step2[0].k == 2);
  CHECK(hw.step2[0].digit == 41);
  CHECK(hw.step2[0].bound == 512);  // 2^(2*2+5)
  CHECK(hw.step2[0].ok);
  CHECK(hw.step2[1].digit == 127);
  CHECK(hw.step2[1].bound == 2048);  // 2^(2*3+5)
  CHECK(hw.step2[1].ok);
  CHECK(hw.step2Ok);

  // Hand recurrence R_n = l_n R_{n-1} + 2 R_{n-2} on (2,2,2,2,41,2,2,2,127)
  // gives 3820192; the seven-digit all-2 seed gives 896.
  CHECK(hw.deletions == 2);
  CHECK(hw.regWord == 3820192);
  CHECK(hw.regSeed == 896);
  CHECK(hw.factor == mpz_class(1) << 22);  // 2^(t^2 + (2 n0 + 5) t), t=2
  CHECK(hw.step3Ok);
  CHECK(hw.allOk);

  // Deeper cut: three more base digits on each side of the deletion.
  ConstructedWord cw12 = synthesize(p, 12);
  HolderWitnessReport hw12 = holderWitnessBounds(cw12);
  CHECK(hw12.regWord == 61481920);
  CHECK(hw12.regSeed == 18272);
  CHECK(hw12.step3Ok);
  CHECK(hw12.allOk);
}
