#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetacf/expansion.hpp"
#include "thetacf/real.hpp"

namespace thetacf {

// The sparse position sequence n_k = floor(exp(k^gamma)), 0 < gamma < 1.
// Note: for small gamma the sequence repeats values at small k (e.g.
// gamma = 1/4 starts 2, 3, 3, 4, 4, 4, ...); strict increase only sets in
// eventually, which is why condition scans track it as a separate flag.
struct SparseSpec {
  Rational gamma;
  std::size_t kMin = 1;  // first k with n_k >= 3 (so log log n_k > 0)
};

SparseSpec makeSparseSpec(const Rational& gamma);

// Exact floor(exp(k^gamma)), k >= 1, by interval evaluation at escalating
// precision.  Throws AmbiguityError if the value is provably within 2^-128
// of an integer and still undecided (never silently rounds).
mpz_class sparseIndex(std::size_t k, const SparseSpec& spec);

// Per-k growth diagnostics of the sparse sequence.  In exact mode n_k and
// n_{k+1} are computed exactly; in log-domain mode the un-floored surrogate
// exp(k^gamma) stands in (log n ~ k^gamma), with floorErrBound bounding
// |log n_k - k^gamma| caused by the floor.
struct DiagnosticsRow {
  std::size_t k = 0;
  double gap = 0.0;            // n_{k+1} - n_k (exact mode only, else 0)
  double relGap = 0.0;         // (n_{k+1} - n_k) / n_k
  double incrC = 0.0;          // log n_{k+1} - log n_k
  double incrD = 0.0;          // log n_{k+1} log log n_{k+1} - log n_k log log n_k
  double floorErrBound = 0.0;  // log-domain only; 0 in exact mode
  bool logDomain = false;
};

std::vector<DiagnosticsRow> sequenceDiagnostics(const std::vector<std::size_t>& ks,
                                                const SparseSpec& spec,
                                                bool logDomain);

enum class BasePolicy { Constant, Periodic, Random, Explicit };

struct BaseWordSpec {
  BasePolicy policy = BasePolicy::Constant;
  std::int64_t constantDigit = 0;         // Constant; 0 means "use m"
  std::vector<std::int64_t> pattern;      // Periodic / Explicit
  std::uint64_t seed = 0;                 // Random
};

// The first `count` digits the base policy produces, all validated to lie in
// [m, M].  Explicit patterns shorter than `count` are an error.
std::vector<std::int64_t> generateBaseDigits(const BaseWordSpec& spec,
                                             std::int64_t m, std::int64_t M,
                                             std::size_t count);

struct ConstructionParams {
  std::int64_t m = 2;
  std::int64_t M = 10;
  Rational alpha;
  SparseSpec sparse;
  std::size_t n0 = 0;        // first insertion index
  bool n0Verified = false;   // true when `n0` came out of findN0
  BaseWordSpec base;
};

// Throws std::domain_error on invalid parameters (m not admissible,
// M <= 2m+1, alpha <= 0, n0 below the sparse spec's kMin, base digits
// outside [m, M]).
void validateParams(const ConstructionParams& params);

struct ConditionRecord {
  std::size_t k = 0;
  mpz_class nK;
  mpz_class nK1;
  double condAValue = 0.0;  // alpha m (n_k - 1) / (log n_k log log n_k), vs > M+1
  double condBValue = 0.0;  // log-sum increment, vs < alpha/2
  double condCGap = 0.0;    // n_{k+1} - n_k
  double condCBound = 0.0;  // n_k / k^{1/8}
  bool okA = false;
  bool okB = false;
  bool okC = false;
  bool strictIncrease = false;  // n_{k+1} > n_k
};

struct ConditionReport {
  std::vector<ConditionRecord> records;  // k = kMin .. scanLimit-1
  // Smallest k* such that (A)(B)(C) hold at every scanned k >= k*.
  std::optional<std::size_t> n0Conditions;
  // Same, additionally requiring strict increase of n_k (what the digit
  // insertion actually needs: repeated positions cannot both be inserted).
  std::optional<std::size_t> n0Construction;
  // Condition (B)'s increment at the scan edge, plus the analytic envelope
  // gamma k^{gamma-1} (gamma log k + 1) it is eventually dominated by.
  double edgeIncrement = 0.0;
  double edgeEnvelope = 0.0;
};

// Scans k in [kMin, scanLimit) and reports condition values, flags, and the
// two N0 candidates.  Throws if scanLimit <= kMin.
ConditionReport findN0(const ConstructionParams& params, std::size_t scanLimit);

struct InsertionRecord {
  std::size_t k = 0;         // sparse index
  std::size_t position = 0;  // n_k (1-based word position)
  std::int64_t digit = 0;    // floor(alpha A / (log n_k log log n_k))
  mpz_class accumulatedSum;  // A = sum of all digits before the position
};

struct ConstructedWord {
  DigitWord word;
  std::vector<InsertionRecord> insertions;
  ConstructionParams params;
};

// Builds the word of the given depth: positions n_k (k >= n0, n_k <= depth)
// receive the inserted digit floor(alpha A / (log n_k log log n_k)); every
// other position takes the next base digit.  Requires depth >= n_{n0} (at
// least one insertion) and distinct insertion positions in range.
ConstructedWord synthesize(const ConstructionParams& params, std::size_t depth);

// Same engine driven by an explicit base word (the insertion map applied to
// `baseWord`): consumes base digits in order, inserting at sparse positions.
// depth < n_{n0} is allowed here and yields the base word unchanged.
// Throws if the base word runs out before reaching `depth`.
ConstructedWord insertApply(const std::vector<std::int64_t>& baseWord,
                            const ConstructionParams& params,
                            std::size_t depth);

// The deletion (seed) map: removes the digits at the word's inserted
// positions.  Words with an empty insertion mask pass through unchanged.
DigitWord seedDelete(const DigitWord& word);

// Insertion positions n_k <= depth for k >= params.n0, as (position, k)
// pairs in increasing k.  Throws on position collisions (n_{k+1} == n_k).
std::vector<std::pair<std::size_t, std::size_t>> insertionPositions(
    const ConstructionParams& params, std::size_t depth);

// The running ratio R_n = L_n log n log log n / (S_n - L_n).
struct RatioSample {
  std::size_t n = 0;
  mpz_class sum;              // S_n
  std::int64_t largest = 0;   // L_n
  double ratio = 0.0;         // R_n (midpoint of the interval evaluation)
  double errBound = 0.0;      // evaluation interval width
  bool defined = false;       // n >= 3 and S_n > L_n
};

// Evaluates R at one point from exact S and L (256-bit interval log).
RatioSample makeRatioSample(std::size_t n, const mpz_class& sum,
                            std::int64_t largest);

// R at each checkpoint (sorted, distinct, within depth) in one pass.
std::vector<RatioSample> ratioSeries(const DigitWord& word,
                                     const std::vector<std::size_t>& checkpoints);

// Default checkpoint ladder: 3, then 1/2/5 times powers of ten, capped and
// terminated by `depth` itself.
std::vector<std::size_t> autoCheckpoints(std::size_t depth);

// The per-block ratio sandwich for a constructed word: on block
// [n_k, min(n_{k+1}-1, depth)],
//   low  = (alpha - log n_k log log n_k / A_k) / (1 + Bmax / A_k)
//   high = alpha * lp(n_{k+1})/lp(n_k) + lp(n_{k+1})/A_k,  lp(n) = log n log log n
// where Bmax is the base-digit mass the block adds after the insertion.
struct EnvelopeBlock {
  std::size_t k = 0;
  std::size_t blockStart = 0;
  std::size_t blockEnd = 0;
  mpz_class aK;
  mpz_class bMax;
  double low = 0.0;
  double high = 0.0;
  double width = 0.0;
};

EnvelopeBlock ratioEnvelope(const ConstructedWord& cw, std::size_t k);

struct EnvelopeCheck {
  EnvelopeBlock block;
  std::size_t samples = 0;
  bool allInside = false;
  std::vector<std::size_t> violations;  // offending n values
};

// Verifies low <= R_n <= high for every n in the block of insertion k.
EnvelopeCheck checkEnvelope(const ConstructedWord& cw, std::size_t k);

struct MonotonicityReport {
  bool allAtLeastM = false;   // every inserted digit >= M
  bool nonDecreasing = false; // inserted digits nondecreasing in k
  std::vector<std::string> failures;
  bool allOk() const { return allAtLeastM && nonDecreasing; }
};

MonotonicityReport checkMonotonicity(const ConstructedWord& cw);

// The two Hoelder ingredients that are exactly checkable on a constructed
// word: per-insertion digit cap l_{n_k} <= 2^{2k+5}, and the denominator
// product bound Q_n(word) <= Q_{n-t}(deleted word) * theta^t * 2^{t^2+Ct}
// with C = 2 n0 + 5 and t the number of insertions.  In integer registers
// the latter is exactly R_word <= R_deleted * 2^{t^2+Ct}.
struct HolderWitnessReport {
  struct Step2Row {
    std::size_t k = 0;
    std::int64_t digit = 0;
    mpz_class bound;  // 2^{2k+5}
    bool ok = false;
  };
  std::vector<Step2Row> step2;
  bool step2Ok = false;
  std::size_t deletions = 0;  // t
  mpz_class regWord;          // final register of the full word
  mpz_class regSeed;          // final register of the deleted word
  mpz_class factor;           // 2^{t^2 + C t}
  bool step3Ok = false;
  bool allOk = false;
};

HolderWitnessReport holderWitnessBounds(const ConstructedWord& cw);

}  // namespace thetacf
