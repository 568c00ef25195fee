#include "thetacf/construction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "thetacf/rng.hpp"

namespace thetacf {

namespace {

double lnProd(double n) { return std::log(n) * std::log(std::log(n)); }

mpz_class finalRegister(const std::vector<std::int64_t>& digits,
                        std::int64_t m) {
  mpz_class prev = 0, cur = 1;
  for (std::int64_t d : digits) {
    mpz_class next = d * cur + m * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

SparseSpec makeSparseSpec(const Rational& gamma) {
  if (!(gamma.num > 0) || !(gamma.num < gamma.den))
    throw std::domain_error("sparse exponent must satisfy 0 < gamma < 1");
  SparseSpec spec;
  spec.gamma = gamma;
  for (std::size_t k = 1; k <= 1000000; ++k) {
    if (sparseIndex(k, spec) >= 3) {
      spec.kMin = k;
      return spec;
    }
  }
  throw std::domain_error("no index with n_k >= 3 found below 10^6");
}

mpz_class sparseIndex(std::size_t k, const SparseSpec& spec) {
  if (k < 1) throw std::domain_error("sparse index starts at k = 1");
  double kg = std::pow(static_cast<double>(k), spec.gamma.toDouble());
  mpfr_prec_t start = static_cast<mpfr_prec_t>(kg * 1.4427) + 64;
  return rigorousFloor(
      [&](mpfr_prec_t prec) {
        RealInterval base =
            RealInterval::fromInt(static_cast<long>(k), prec);
        RealInterval expo = RealInterval::fromRational(
            spec.gamma.num, spec.gamma.den, prec);
        return base.pow(expo).exp();
      },
      start);
}

std::vector<DiagnosticsRow> sequenceDiagnostics(
    const std::vector<std::size_t>& ks, const SparseSpec& spec,
    bool logDomain) {
  std::vector<DiagnosticsRow> rows;
  rows.reserve(ks.size());
  double g = spec.gamma.toDouble();
  for (std::size_t k : ks) {
    if (k < 1) throw std::domain_error("diagnostics index starts at k = 1");
    DiagnosticsRow row;
    row.k = k;
    row.logDomain = logDomain;
    if (!logDomain) {
      mpz_class nK = sparseIndex(k, spec);
      mpz_class nK1 = sparseIndex(k + 1, spec);
      if (nK < 3)
        throw std::domain_error("log log undefined: n_k < 3 at k = " +
                                std::to_string(k));
      double d0 = nK.get_d(), d1 = nK1.get_d();
      row.gap = d1 - d0;
      row.relGap = (d1 - d0) / d0;
      row.incrC = std::log(d1) - std::log(d0);
      row.incrD = lnProd(d1) - lnProd(d0);
    } else {
      // Surrogate log n_k = k^gamma (un-floored); attach the floor slack.
      double a0 = std::pow(static_cast<double>(k), g);
      double a1 = std::pow(static_cast<double>(k + 1), g);
      row.relGap = std::expm1(a1 - a0);
      row.incrC = a1 - a0;
      row.incrD = a1 * std::log(a1) - a0 * std::log(a0);
      row.floorErrBound = -std::log1p(-std::exp(-a0));
    }
    rows.push_back(row);
  }
  return rows;
}

void validateParams(const ConstructionParams& params) {
  if (!isValidFieldModulus(params.m))
    throw std::domain_error("field modulus must be a non-square integer >= 2");
  if (params.M <= 2 * params.m + 1)
    throw std::domain_error("digit ceiling must satisfy M > 2m + 1");
  if (!params.alpha.positive())
    throw std::domain_error("target alpha must be positive");
  if (!(params.sparse.gamma.num > 0) ||
      !(params.sparse.gamma.num < params.sparse.gamma.den))
    throw std::domain_error("sparse exponent must satisfy 0 < gamma < 1");
  if (params.n0 < params.sparse.kMin)
    throw std::domain_error("insertion start index below the sparse kMin");
  const BaseWordSpec& base = params.base;
  auto checkDigit = [&](std::int64_t d) {
    if (d < params.m || d > params.M)
      throw std::domain_error("base digit " + std::to_string(d) +
                              " outside [m, M]");
  };
  switch (base.policy) {
    case BasePolicy::Constant:
      if (base.constantDigit != 0) checkDigit(base.constantDigit);
      break;
    case BasePolicy::Periodic:
    case BasePolicy::Explicit:
      if (base.pattern.empty())
        throw std::domain_error("base pattern must be nonempty");
      for (std::int64_t d : base.pattern) checkDigit(d);
      break;
    case BasePolicy::Random:
      break;
  }
}

ConditionReport findN0(const ConstructionParams& params,
                       std::size_t scanLimit) {
  validateParams(params);
  const SparseSpec& spec = params.sparse;
  if (scanLimit <= spec.kMin)
    throw std::domain_error("scan limit must exceed the sparse kMin");

  double alphaD = params.alpha.toDouble();
  double threshA = static_cast<double>(params.M + 1);
  double threshB = alphaD / 2.0;

  ConditionReport report;
  mpz_class nK = sparseIndex(spec.kMin, spec);
  for (std::size_t k = spec.kMin; k + 1 <= scanLimit; ++k) {
    mpz_class nK1 = sparseIndex(k + 1, spec);
    ConditionRecord rec;
    rec.k = k;
    rec.nK = nK;
    rec.nK1 = nK1;
    double n0d = nK.get_d(), n1d = nK1.get_d();
    rec.condAValue =
        alphaD * static_cast<double>(params.m) * (n0d - 1.0) / lnProd(n0d);
    rec.condBValue = lnProd(n1d) - lnProd(n0d);
    rec.condCGap = n1d - n0d;
    rec.condCBound = n0d / std::pow(static_cast<double>(k), 1.0 / 8.0);
    rec.okA = rec.condAValue > threshA;
    rec.okB = rec.condBValue < threshB;
    rec.okC = rec.condCGap < rec.condCBound;
    rec.strictIncrease = nK1 > nK;
    report.records.push_back(std::move(rec));
    nK = nK1;
  }

  bool suffixABC = true, suffixFull = true;
  for (auto it = report.records.rbegin(); it != report.records.rend(); ++it) {
    suffixABC = suffixABC && it->okA && it->okB && it->okC;
    suffixFull = suffixFull && suffixABC && it->strictIncrease;
    if (suffixABC) report.n0Conditions = it->k;
    if (suffixFull) report.n0Construction = it->k;
  }

  const ConditionRecord& edge = report.records.back();
  report.edgeIncrement = edge.condBValue;
  double ke = static_cast<double>(edge.k);
  double g = spec.gamma.toDouble();
  report.edgeEnvelope =
      g * std::pow(ke, g - 1.0) * (g * std::log(ke) + 1.0);
  return report;
}

std::vector<std::pair<std::size_t, std::size_t>> insertionPositions(
    const ConstructionParams& params, std::size_t depth) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  mpz_class prev = -1;
  for (std::size_t k = params.n0;; ++k) {
    mpz_class n = sparseIndex(k, params.sparse);
    if (n > static_cast<unsigned long>(depth)) break;
    if (n == prev)
      throw std::domain_error(
          "sparse positions collide at k = " + std::to_string(k) +
          " (n_k = " + n.get_str() +
          "); pick a larger insertion start index");
    out.emplace_back(static_cast<std::size_t>(n.get_ui()), k);
    prev = n;
  }
  return out;
}

namespace {

class BaseSource {
 public:
  BaseSource(const BaseWordSpec& spec, std::int64_t m, std::int64_t M)
      : policy_(spec.policy),
        m_(m),
        M_(M),
        constant_(spec.constantDigit == 0 ? m : spec.constantDigit),
        pattern_(spec.pattern),
        rng_(spec.seed) {}

  std::int64_t next() {
    switch (policy_) {
      case BasePolicy::Constant:
        return constant_;
      case BasePolicy::Periodic: {
        std::int64_t v = pattern_[idx_ % pattern_.size()];
        ++idx_;
        return v;
      }
      case BasePolicy::Random:
        return rng_.uniformInt(m_, M_);
      case BasePolicy::Explicit:
        if (idx_ >= pattern_.size())
          throw std::domain_error("base word too short for requested depth");
        return pattern_[idx_++];
    }
    throw std::logic_error("unknown base policy");
  }

 private:
  BasePolicy policy_;
  std::int64_t m_, M_;
  std::int64_t constant_;
  std::vector<std::int64_t> pattern_;
  Rng rng_;
  std::size_t idx_ = 0;
};

std::int64_t insertedDigitValue(const Rational& alpha, const mpz_class& A,
                                std::size_t n, std::int64_t m) {
  mpz_class d = rigorousFloor(
      [&](mpfr_prec_t prec) {
        RealInterval nn = RealInterval::fromInt(static_cast<long>(n), prec);
        RealInterval ln = nn.log();
        RealInterval lnln = ln.log();
        RealInterval num = RealInterval::fromMpz(alpha.num * A, prec);
        RealInterval den =
            ln.mul(lnln).mul(RealInterval::fromMpz(alpha.den, prec));
        return num.div(den);
      },
      96);
  if (d < m)
    throw std::domain_error("inserted digit " + d.get_str() +
                            " at position " + std::to_string(n) +
                            " falls below the alphabet minimum");
  if (!mpz_fits_slong_p(d.get_mpz_t()))
    throw std::overflow_error("inserted digit exceeds the 64-bit range");
  return static_cast<std::int64_t>(d.get_si());
}

ConstructedWord buildWord(const ConstructionParams& params, std::size_t depth,
                          bool requireInsertion) {
  validateParams(params);
  auto positions = insertionPositions(params, depth);
  if (requireInsertion && positions.empty())
    throw std::domain_error(
        "depth " + std::to_string(depth) +
        " is below the first insertion position n_{k0} = " +
        sparseIndex(params.n0, params.sparse).get_str());

  BaseSource src(params.base, params.m, params.M);
  ConstructedWord out;
  out.params = params;
  out.word.m = params.m;
  out.word.digits.reserve(depth);

  auto it = positions.begin();
  mpz_class A = 0;
  for (std::size_t n = 1; n <= depth; ++n) {
    if (it != positions.end() && it->first == n) {
      if (n < 3)
        throw std::domain_error("insertion position below 3: log log undefined");
      std::int64_t d = insertedDigitValue(params.alpha, A, n, params.m);
      out.insertions.push_back(InsertionRecord{it->second, n, d, A});
      out.word.digits.push_back(d);
      out.word.insertedPositions.push_back(n);
      ++it;
    } else {
      std::int64_t d = src.next();
      if (d < params.m || d > params.M)
        throw std::domain_error("base digit outside [m, M]");
      out.word.digits.push_back(d);
    }
    A += out.word.digits.back();
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> generateBaseDigits(const BaseWordSpec& spec,
                                             std::int64_t m, std::int64_t M,
                                             std::size_t count) {
  BaseSource src(spec, m, M);
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t d = src.next();
    if (d < m || d > M)
      throw std::domain_error("base digit " + std::to_string(d) +
                              " outside [m, M]");
    out.push_back(d);
  }
  return out;
}

ConstructedWord synthesize(const ConstructionParams& params,
                           std::size_t depth) {
  return buildWord(params, depth, true);
}

ConstructedWord insertApply(const std::vector<std::int64_t>& baseWord,
                            const ConstructionParams& params,
                            std::size_t depth) {
  ConstructionParams p = params;
  p.base.policy = BasePolicy::Explicit;
  p.base.pattern = baseWord;
  return buildWord(p, depth, false);
}

DigitWord seedDelete(const DigitWord& word) {
  DigitWord out;
  out.m = word.m;
  out.terminated = word.terminated;
  std::size_t maskIdx = 0;
  for (std::size_t n = 1; n <= word.digits.size(); ++n) {
    if (maskIdx < word.insertedPositions.size() &&
        word.insertedPositions[maskIdx] == n) {
      ++maskIdx;
      continue;
    }
    out.digits.push_back(word.digits[n - 1]);
  }
  return out;
}

RatioSample makeRatioSample(std::size_t n, const mpz_class& sum,
                            std::int64_t largest) {
  RatioSample s;
  s.n = n;
  s.sum = sum;
  s.largest = largest;
  if (n < 3 || sum <= largest) return s;  // undefined
  mpfr_prec_t prec = 256;
  RealInterval nn = RealInterval::fromInt(static_cast<long>(n), prec);
  RealInterval ln = nn.log();
  RealInterval lnln = ln.log();
  RealInterval num = RealInterval::fromMpz(mpz_class(static_cast<long>(largest)), prec)
                         .mul(ln.mul(lnln));
  RealInterval res = num.div(RealInterval::fromMpz(sum - largest, prec));
  s.ratio = res.midDouble();
  s.errBound = res.widthDouble();
  s.defined = true;
  return s;
}

std::vector<RatioSample> ratioSeries(
    const DigitWord& word, const std::vector<std::size_t>& checkpoints) {
  validateWord(word);
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || checkpoints[i] > word.digits.size())
      throw std::out_of_range("checkpoint outside the word");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
      throw std::invalid_argument("checkpoints must be strictly increasing");
  }
  std::vector<RatioSample> out;
  out.reserve(checkpoints.size());
  mpz_class sum = 0;
  std::int64_t largest = 0;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= word.digits.size() && next < checkpoints.size();
       ++n) {
    sum += word.digits[n - 1];
    largest = std::max(largest, word.digits[n - 1]);
    if (n == checkpoints[next]) {
      out.push_back(makeRatioSample(n, sum, largest));
      ++next;
    }
  }
  return out;
}

std::vector<std::size_t> autoCheckpoints(std::size_t depth) {
  std::vector<std::size_t> out;
  if (depth < 3) return out;
  out.push_back(3);
  out.push_back(5);
  for (std::size_t decade = 10; decade <= depth; decade *= 10) {
    for (std::size_t mult : {1, 2, 5}) out.push_back(decade * mult);
    if (decade > depth / 10) break;  // next decade would overflow past depth
  }
  out.push_back(depth);
  out.erase(std::remove_if(out.begin(), out.end(),
                           [depth](std::size_t v) { return v > depth; }),
            out.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EnvelopeBlock ratioEnvelope(const ConstructedWord& cw, std::size_t k) {
  const InsertionRecord* rec = nullptr;
  for (const auto& r : cw.insertions)
    if (r.k == k) rec = &r;
  if (rec == nullptr)
    throw std::out_of_range("no insertion with index k = " + std::to_string(k));

  std::size_t depth = cw.word.digits.size();
  mpz_class nK1 = sparseIndex(k + 1, cw.params.sparse);
  EnvelopeBlock block;
  block.k = k;
  block.blockStart = rec->position;
  if (nK1 - 1 > static_cast<unsigned long>(depth))
    block.blockEnd = depth;
  else
    block.blockEnd = static_cast<std::size_t>(mpz_class(nK1 - 1).get_ui());
  block.aK = rec->accumulatedSum;
  block.bMax = 0;
  for (std::size_t n = block.blockStart + 1; n <= block.blockEnd; ++n)
    block.bMax += cw.word.digits[n - 1];

  double alphaD = cw.params.alpha.toDouble();
  double lpK = lnProd(static_cast<double>(block.blockStart));
  double lpK1 = lnProd(nK1.get_d());
  double aD = block.aK.get_d();
  double bD = block.bMax.get_d();
  block.low = (alphaD - lpK / aD) / (1.0 + bD / aD);
  block.high = alphaD * lpK1 / lpK + lpK1 / aD;
  block.width = block.high - block.low;
  return block;
}

EnvelopeCheck checkEnvelope(const ConstructedWord& cw, std::size_t k) {
  EnvelopeCheck check;
  check.block = ratioEnvelope(cw, k);
  mpz_class sum = 0;
  std::int64_t largest = 0;
  for (std::size_t n = 1; n <= check.block.blockEnd; ++n) {
    sum += cw.word.digits[n - 1];
    largest = std::max(largest, cw.word.digits[n - 1]);
    if (n >= check.block.blockStart) {
      RatioSample s = makeRatioSample(n, sum, largest);
      ++check.samples;
      if (!s.defined || s.ratio < check.block.low ||
          s.ratio > check.block.high)
        check.violations.push_back(n);
    }
  }
  check.allInside = check.violations.empty();
  return check;
}

MonotonicityReport checkMonotonicity(const ConstructedWord& cw) {
  MonotonicityReport rep;
  rep.allAtLeastM = true;
  rep.nonDecreasing = true;
  const InsertionRecord* prev = nullptr;
  for (const auto& rec : cw.insertions) {
    if (rec.digit < cw.params.M) {
      rep.allAtLeastM = false;
      rep.failures.push_back("inserted digit " + std::to_string(rec.digit) +
                             " at position " + std::to_string(rec.position) +
                             " is below M = " + std::to_string(cw.params.M));
    }
    if (prev != nullptr && rec.digit < prev->digit) {
      rep.nonDecreasing = false;
      rep.failures.push_back(
          "inserted digit decreases from " + std::to_string(prev->digit) +
          " (k=" + std::to_string(prev->k) + ") to " +
          std::to_string(rec.digit) + " (k=" + std::to_string(rec.k) + ")");
    }
    prev = &rec;
  }
  return rep;
}

HolderWitnessReport holderWitnessBounds(const ConstructedWord& cw) {
  HolderWitnessReport rep;
  rep.step2Ok = true;
  for (const auto& rec : cw.insertions) {
    HolderWitnessReport::Step2Row row;
    row.k = rec.k;
    row.digit = rec.digit;
    mpz_ui_pow_ui(row.bound.get_mpz_t(), 2,
                  static_cast<unsigned long>(2 * rec.k + 5));
    row.ok = row.bound >= rec.digit;
    if (!row.ok) rep.step2Ok = false;
    rep.step2.push_back(std::move(row));
  }

  DigitWord seed = seedDelete(cw.word);
  rep.deletions = cw.insertions.size();
  rep.regWord = finalRegister(cw.word.digits, cw.params.m);
  rep.regSeed = finalRegister(seed.digits, cw.params.m);
  unsigned long t = static_cast<unsigned long>(rep.deletions);
  unsigned long c = static_cast<unsigned long>(2 * cw.params.n0 + 5);
  rep.factor = 1;
  mpz_mul_2exp(rep.factor.get_mpz_t(), rep.factor.get_mpz_t(), t * t + c * t);
  rep.step3Ok = rep.regWord <= rep.regSeed * rep.factor;
  rep.allOk = rep.step2Ok && rep.step3Ok;
  return rep;
}

}  // namespace thetacf
