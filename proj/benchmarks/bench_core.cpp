// Microbenchmarks for the hot paths: exact field arithmetic, digit streams,
// cylinder registers, word synthesis, Moran enumeration, and measure sums.

#include <benchmark/benchmark.h>

#include <vector>

#include "thetacf/construction.hpp"
#include "thetacf/dimension.hpp"
#include "thetacf/expansion.hpp"
#include "thetacf/measure.hpp"
#include "thetacf/rng.hpp"

using namespace thetacf;

namespace {

DigitWord randomWord(std::int64_t m, std::size_t depth, std::uint64_t seed) {
  Rng rng(seed);
  DigitWord w;
  w.m = m;
  w.digits.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i)
    w.digits.push_back(rng.uniformInt(m, m + 8));
  return w;
}

ConstructionParams goldenParams() {
  ConstructionParams p;
  p.m = 2;
  p.M = 10;
  p.alpha = parseRational("4");
  p.sparse = makeSparseSpec(parseRational("3/4"));
  p.n0 = 2;
  return p;
}

void BM_FieldMultiply(benchmark::State& state) {
  QuadraticNumber a(mpz_class(12345), mpz_class(-678), mpz_class(901), 2);
  QuadraticNumber b(mpz_class(-444), mpz_class(555), mpz_class(77), 2);
  for (auto _ : state) {
    QuadraticNumber c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_FieldMultiply);

void BM_FieldInverse(benchmark::State& state) {
  QuadraticNumber a(mpz_class(12345), mpz_class(-678), mpz_class(901), 2);
  for (auto _ : state) {
    QuadraticNumber c = a.inverse();
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_FieldInverse);

void BM_FloorExact(benchmark::State& state) {
  QuadraticNumber a(mpz_class(99991), mpz_class(31337), mpz_class(217), 2);
  for (auto _ : state) {
    mpz_class f = a.floorExact();
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_FloorExact);

void BM_DigitStream(benchmark::State& state) {
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  QuadraticNumber x =
      QuadraticNumber::sqrtM(2) - QuadraticNumber::integer(1, 2);
  for (auto _ : state) {
    DigitWord w = digitStream(x, depth);
    benchmark::DoNotOptimize(w);
  }
  state.SetItemsProcessed(state.iterations() * depth);
}
BENCHMARK(BM_DigitStream)->Arg(16)->Arg(64)->Arg(256);

void BM_CylinderFromDigits(benchmark::State& state) {
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  DigitWord w = randomWord(2, depth, 11);
  FieldSpec f(2);
  for (auto _ : state) {
    Cylinder c = Cylinder::fromDigits(f, w.digits);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * depth);
}
BENCHMARK(BM_CylinderFromDigits)->Arg(32)->Arg(128);

void BM_VerifyMetric(benchmark::State& state) {
  DigitWord w = randomWord(2, 12, 23);
  for (auto _ : state) {
    MetricReport r = verifyMetric(w);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_VerifyMetric);

void BM_Synthesize(benchmark::State& state) {
  ConstructionParams p = goldenParams();
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    ConstructedWord cw = synthesize(p, depth);
    benchmark::DoNotOptimize(cw);
  }
}
BENCHMARK(BM_Synthesize)->Arg(116)->Arg(631);

void BM_RatioSeries(benchmark::State& state) {
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  DigitWord w = randomWord(2, depth, 7);
  std::vector<std::size_t> cps = autoCheckpoints(depth);
  for (auto _ : state) {
    std::vector<RatioSample> s = ratioSeries(w, cps);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * depth);
}
BENCHMARK(BM_RatioSeries)->Arg(10000)->Arg(100000);

void BM_SparseIndex(benchmark::State& state) {
  SparseSpec spec = makeSparseSpec(parseRational("3/4"));
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    mpz_class n = sparseIndex(k, spec);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_SparseIndex)->Arg(10)->Arg(100)->Arg(400);

void BM_MoranRoot(benchmark::State& state) {
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    MoranRoot r = moranRoot(2, 10, depth, 1e-9, LengthMode::Exact);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_MoranRoot)->Arg(3)->Arg(5);

void BM_InvarianceDefect(benchmark::State& state) {
  const std::int64_t cutoff = state.range(0);
  for (auto _ : state) {
    InvarianceReport r = invarianceDefect(2, 0.11, 0.43, cutoff);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * cutoff);
}
BENCHMARK(BM_InvarianceDefect)->Arg(1000)->Arg(100000);

void BM_SampleGamma(benchmark::State& state) {
  const std::size_t count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    std::vector<double> xs = sampleGamma(2, 7, count);
    benchmark::DoNotOptimize(xs);
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_SampleGamma)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
