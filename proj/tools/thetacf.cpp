// thetacf: command-line surface over the theta-expansion library.
//
// Every run prints one machine-readable report: JSON with a top-level
// {config, results, checks} object, or CSV (config echoed in '#' comment
// lines, one or more named tables; see docs/csv_schema.md).  Exit status is
// 0 on success, 1 when any boolean in `checks` is false, 2 on usage errors.
// The echoed config omits --jobs and --output, so reports are byte-identical
// across parallelism settings and destinations.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thetacf/construction.hpp"
#include "thetacf/dimension.hpp"
#include "thetacf/expansion.hpp"
#include "thetacf/measure.hpp"
#include "thetacf/parallel.hpp"
#include "thetacf/rng.hpp"

using nlohmann::ordered_json;
using namespace thetacf;

namespace {

constexpr const char* kToolVersion = "thetacf 0.1.0";

// ---------------------------------------------------------------------------
// formatting
// ---------------------------------------------------------------------------

std::string fmtDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmtBool(bool b) { return b ? "true" : "false"; }

ordered_json fieldJson(const QuadraticNumber& x, int digits = 12) {
  ordered_json j;
  j["p"] = x.p().get_str();
  j["q"] = x.q().get_str();
  j["r"] = x.r().get_str();
  j["m"] = x.m();
  j["decimal"] = x.toDecimal(digits);
  j["decimalDigits"] = digits;
  return j;
}

// ---------------------------------------------------------------------------
// report plumbing
// ---------------------------------------------------------------------------

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  ordered_json config;
  ordered_json results;
  ordered_json checks;
  std::vector<CsvTable> tables;
};

void collectBools(const ordered_json& j, bool& anyFalse) {
  if (j.is_boolean()) {
    if (!j.get<bool>()) anyFalse = true;
  } else if (j.is_object() || j.is_array()) {
    for (const auto& item : j) collectBools(item, anyFalse);
  }
}

int emitReport(const Report& rep, const std::string& format,
               const std::string& output) {
  std::string text;
  if (format == "json") {
    ordered_json doc;
    doc["config"] = rep.config;
    doc["results"] = rep.results;
    doc["checks"] = rep.checks;
    text = doc.dump(2);
    text.push_back('\n');
  } else {
    std::ostringstream os;
    os << "# thetacf-csv 1\n";
    os << "# config " << rep.config.dump() << "\n";
    os << "# checks " << rep.checks.dump() << "\n";
    for (const auto& t : rep.tables) {
      os << "# table " << t.name << "\n";
      for (std::size_t i = 0; i < t.header.size(); ++i)
        os << (i ? "," : "") << t.header[i];
      os << "\n";
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
          os << (i ? "," : "") << row[i];
        os << "\n";
      }
    }
    text = os.str();
  }

  if (output == "-" || output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + output);
    f << text;
  }
  bool anyFalse = false;
  collectBools(rep.checks, anyFalse);
  return anyFalse ? 1 : 0;
}

// ---------------------------------------------------------------------------
// input parsing helpers
// ---------------------------------------------------------------------------

// Tiny expression grammar over integers, decimal rationals, and sqrt(m):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('+'|'-')* primary
//   primary:= NUMBER | 'sqrt' '(' INTEGER ')' | '(' expr ')'
// sqrt accepts the field radicand m or any perfect square.
class FieldExprParser {
 public:
  FieldExprParser(const std::string& text, std::int64_t m)
      : text_(text), m_(m) {}

  QuadraticNumber parse() {
    QuadraticNumber v = expr();
    skipSpace();
    if (pos_ != text_.size())
      throw std::invalid_argument("unexpected input at '" +
                                  text_.substr(pos_) + "'");
    return v;
  }

 private:
  QuadraticNumber expr() {
    QuadraticNumber v = term();
    while (true) {
      skipSpace();
      if (consume('+'))
        v = v + term();
      else if (consume('-'))
        v = v - term();
      else
        return v;
    }
  }

  QuadraticNumber term() {
    QuadraticNumber v = factor();
    while (true) {
      skipSpace();
      if (consume('*')) {
        v = v * factor();
      } else if (consume('/')) {
        QuadraticNumber d = factor();
        if (d.isZero()) throw std::invalid_argument("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }

  QuadraticNumber factor() {
    skipSpace();
    if (consume('-')) return -factor();
    if (consume('+')) return factor();
    return primary();
  }

  QuadraticNumber primary() {
    skipSpace();
    if (pos_ < text_.size() &&
        (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
         text_[pos_] == '.')) {
      Rational r = parseRational(number());
      return QuadraticNumber::rational(r.num, r.den, m_);
    }
    if (text_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      skipSpace();
      expect('(');
      skipSpace();
      mpz_class arg(number());
      skipSpace();
      expect(')');
      if (arg == m_) return QuadraticNumber::sqrtM(m_);
      if (mpz_perfect_square_p(arg.get_mpz_t())) {
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), arg.get_mpz_t());
        return QuadraticNumber::integer(root, m_);
      }
      throw std::invalid_argument(
          "sqrt argument must be the field radicand m or a perfect square");
    }
    if (consume('(')) {
      QuadraticNumber v = expr();
      skipSpace();
      expect(')');
      return v;
    }
    throw std::invalid_argument("cannot parse expression at '" +
                                text_.substr(pos_) + "'");
  }

  std::string number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) throw std::invalid_argument("expected a number");
    return text_.substr(start, pos_ - start);
  }

  void skipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw std::invalid_argument(std::string("expected '") + c + "'");
  }

  std::string text_;
  std::int64_t m_;
  std::size_t pos_ = 0;
};

QuadraticNumber parseFieldExpr(const std::string& text, std::int64_t m) {
  return FieldExprParser(text, m).parse();
}

std::vector<std::int64_t> parseInt64List(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: '" + s + "'");
  return out;
}

BaseWordSpec parseBaseSpec(const std::string& s) {
  BaseWordSpec spec;
  std::string kind = s, arg;
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    kind = s.substr(0, colon);
    arg = s.substr(colon + 1);
  }
  if (kind == "const") {
    spec.policy = BasePolicy::Constant;
    spec.constantDigit = arg.empty() ? 0 : std::stoll(arg);
  } else if (kind == "periodic") {
    spec.policy = BasePolicy::Periodic;
    spec.pattern = parseInt64List(arg);
  } else if (kind == "random") {
    spec.policy = BasePolicy::Random;
    spec.seed = arg.empty() ? 0 : std::stoull(arg);
  } else if (kind == "explicit") {
    spec.policy = BasePolicy::Explicit;
    spec.pattern = parseInt64List(arg);
  } else {
    throw std::invalid_argument(
        "base spec must be const[:d] | periodic:a,b,... | random:seed | "
        "explicit:a,b,...");
  }
  return spec;
}

std::vector<std::size_t> parseCheckpoints(const std::string& s,
                                          std::size_t depth) {
  if (s == "auto") return autoCheckpoints(depth);
  std::vector<std::size_t> out;
  for (std::int64_t v : parseInt64List(s)) {
    if (v < 1) throw std::invalid_argument("checkpoints must be >= 1");
    out.push_back(static_cast<std::size_t>(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct Common {
  std::string format = "json";
  std::string output = "-";
  unsigned jobs = 1;
};

void addCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output", c.output, "Output path ('-' = stdout)")
      ->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads for parallel stages")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
}

// Options shared by the construction-driven commands.
struct ConstructOpts {
  std::int64_t m = 2;
  std::int64_t M = 10;
  std::string alpha = "1";
  std::string gamma = "3/4";
  std::size_t depth = 0;
  std::string base = "const";
  std::size_t n0 = 0;  // 0 = scan for it
  std::size_t scan = 2000;
};

void addConstructOpts(CLI::App* cmd, ConstructOpts& o, bool needDepth) {
  cmd->add_option("--m", o.m, "Field radicand m (non-square, >= 2)")
      ->capture_default_str();
  cmd->add_option("--M", o.M, "Digit ceiling M (> 2m+1)")
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Target ratio alpha (rational)")
      ->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "Sparse exponent gamma in (0,1)")
      ->capture_default_str();
  auto* d = cmd->add_option("--depth", o.depth, "Word length to build");
  if (needDepth) d->required();
  cmd->add_option("--base", o.base,
                  "Base digits: const[:d] | periodic:list | random:seed | "
                  "explicit:list")
      ->capture_default_str();
  cmd->add_option("--n0", o.n0,
                  "Insertion start index (0 = determine by scanning)")
      ->capture_default_str();
  cmd->add_option("--scan", o.scan, "Scan limit for the start index")
      ->capture_default_str();
}

ordered_json constructConfig(const char* command, const ConstructOpts& o,
                             const Common& c) {
  ordered_json cfg;
  cfg["tool"] = kToolVersion;
  cfg["command"] = command;
  cfg["m"] = o.m;
  cfg["M"] = o.M;
  cfg["alpha"] = o.alpha;
  cfg["gamma"] = o.gamma;
  cfg["depth"] = o.depth;
  cfg["base"] = o.base;
  cfg["n0"] = o.n0;
  cfg["scan"] = o.scan;
  cfg["format"] = c.format;
  return cfg;
}

// Resolve construction parameters; scans for the start index when n0 == 0.
ConstructionParams resolveParams(const ConstructOpts& o, std::string& source) {
  ConstructionParams p;
  p.m = o.m;
  p.M = o.M;
  p.alpha = parseRational(o.alpha);
  p.sparse = makeSparseSpec(parseRational(o.gamma));
  p.base = parseBaseSpec(o.base);
  if (o.n0 == 0) {
    p.n0 = p.sparse.kMin;
    ConditionReport rep = findN0(p, o.scan);
    if (!rep.n0Construction)
      throw std::domain_error(
          "no admissible insertion start index within the scan limit " +
          std::to_string(o.scan) + "; raise --scan or pass --n0");
    p.n0 = *rep.n0Construction;
    p.n0Verified = true;
    source = "scan";
  } else {
    p.n0 = o.n0;
    p.n0Verified = false;
    source = "explicit";
  }
  return p;
}

ordered_json insertionJson(const InsertionRecord& r) {
  ordered_json j;
  j["k"] = r.k;
  j["position"] = r.position;
  j["digit"] = r.digit;
  j["accumulatedSum"] = r.accumulatedSum.get_str();
  return j;
}

ordered_json sampleJson(const RatioSample& s) {
  ordered_json j;
  j["n"] = s.n;
  j["sum"] = s.sum.get_str();
  j["largest"] = s.largest;
  j["ratio"] = s.ratio;
  j["errBound"] = s.errBound;
  j["defined"] = s.defined;
  return j;
}

// ---------------------------------------------------------------------------
// subcommand handlers
// ---------------------------------------------------------------------------

int runExpand(std::int64_t m, const std::string& xExpr, std::size_t n,
              const Common& c) {
  QuadraticNumber x = parseFieldExpr(xExpr, m);
  DigitWord w = digitStream(x, n);

  Report rep;
  rep.config = {{"tool", kToolVersion}, {"command", "expand"},
                {"m", m},              {"x", xExpr},
                {"n", n},              {"format", c.format}};
  rep.results["value"] = fieldJson(x);
  rep.results["digits"] = w.digits;
  rep.results["terminated"] = w.terminated;
  rep.results["count"] = w.digits.size();
  rep.checks = ordered_json::object();

  CsvTable t{"digits", {"index", "digit"}, {}};
  for (std::size_t i = 0; i < w.digits.size(); ++i)
    t.rows.push_back({std::to_string(i + 1), std::to_string(w.digits[i])});
  rep.tables.push_back(std::move(t));
  return emitReport(rep, c.format, c.output);
}

int runOrbit(std::int64_t m, const std::string& xExpr, std::size_t n,
             const Common& c) {
  QuadraticNumber x = parseFieldExpr(xExpr, m);
  std::vector<QuadraticNumber> points = orbitExact(x, n);
  DigitWord w = digitStream(x, n);

  Report rep;
  rep.config = {{"tool", kToolVersion}, {"command", "orbit"},
                {"m", m},              {"x", xExpr},
                {"n", n},              {"format", c.format}};
  ordered_json rows = ordered_json::array();
  CsvTable t{"orbit", {"k", "digit", "p", "q", "r", "decimal"}, {}};
  for (std::size_t k = 0; k < points.size(); ++k) {
    ordered_json row;
    row["k"] = k;
    row["point"] = fieldJson(points[k]);
    if (k < w.digits.size())
      row["digit"] = w.digits[k];
    else
      row["digit"] = nullptr;
    rows.push_back(std::move(row));
    t.rows.push_back({std::to_string(k),
                      k < w.digits.size() ? std::to_string(w.digits[k]) : "",
                      points[k].p().get_str(), points[k].q().get_str(),
                      points[k].r().get_str(), points[k].toDecimal(12)});
  }
  rep.results["points"] = std::move(rows);
  rep.results["terminated"] = w.terminated;
  rep.checks = ordered_json::object();
  rep.tables.push_back(std::move(t));
  return emitReport(rep, c.format, c.output);
}

int runJarnik(std::int64_t m, const std::string& mList, const Common& c) {
  std::vector<std::int64_t> Ms = parseInt64List(mList);

  Report rep;
  rep.config = {{"tool", kToolVersion},
                {"command", "jarnik"},
                {"m", m},
                {"M", mList},
                {"format", c.format}};
  ordered_json rows = ordered_json::array();
  CsvTable t{"bounds", {"m", "M", "lower", "upper"}, {}};
  bool inUnit = true, ordered = true, monotone = true;
  double prevLo = -1.0, prevUp = -1.0;
  for (std::int64_t M : Ms) {
    JarnikBounds b = jarnikBounds(m, M);
    ordered_json row;
    row["M"] = M;
    row["lower"] = b.lower;
    row["upper"] = b.upper;
    rows.push_back(std::move(row));
    t.rows.push_back({std::to_string(m), std::to_string(M),
                      fmtDouble(b.lower), fmtDouble(b.upper)});
    inUnit = inUnit && b.lower > 0.0 && b.upper < 1.0;
    ordered = ordered && b.lower < b.upper;
    if (prevLo >= 0.0)
      monotone = monotone && b.lower > prevLo && b.upper > prevUp;
    prevLo = b.lower;
    prevUp = b.upper;
  }
  rep.results["bounds"] = std::move(rows);
  rep.checks["bounds_in_unit_interval"] = inUnit;
  rep.checks["lower_below_upper"] = ordered;
  if (Ms.size() > 1) rep.checks["monotone_in_M"] = monotone;
  rep.tables.push_back(std::move(t));
  return emitReport(rep, c.format, c.output);
}

ordered_json moranRootJson(const MoranRoot& r) {
  ordered_json j;
  j["mode"] = lengthModeName(r.mode);
  j["root"] = r.root;
  j["intervalLo"] = r.intervalLo;
  j["intervalHi"] = r.intervalHi;
  j["residualLo"] = r.residualLo;
  j["residualHi"] = r.residualHi;
  j["iterations"] = r.iterations;
  j["cylinderCount"] = r.cylinderCount;
  return j;
}

int runDimension(std::int64_t m, std::int64_t M, std::size_t depth, double tol,
                 std::size_t budget, const Common& c) {
  JarnikBounds jb = jarnikBounds(m, M);
  DimensionBracket br = moranBracket(m, M, depth, tol, c.jobs, budget);
  MoranRoot exact =
      moranRoot(m, M, depth, tol, LengthMode::Exact, c.jobs, budget);

  Report rep;
  rep.config = {{"tool", kToolVersion}, {"command", "dimension"},
                {"m", m},              {"M", M},
                {"depth", depth},      {"tol", tol},
                {"budget", budget},    {"format", c.format}};
  rep.results["jarnik"] = {{"lower", jb.lower}, {"upper", jb.upper}};
  rep.results["bracket"] = {{"sLow", br.sLow},
                            {"sHigh", br.sHigh},
                            {"width", br.width()},
                            {"depth", br.depth},
                            {"cylinderCount", br.cylinderCount}};
  rep.results["solves"] = ordered_json::array(
      {moranRootJson(br.lowerSolve), moranRootJson(br.upperSolve),
       moranRootJson(exact)});

  auto signChange = [](const MoranRoot& r) {
    return r.residualLo > 0.0 && r.residualHi < 0.0;
  };
  rep.checks["bracket_ordered"] = br.sLow <= br.sHigh;
  rep.checks["residual_sign_change_lower"] = signChange(br.lowerSolve);
  rep.checks["residual_sign_change_upper"] = signChange(br.upperSolve);
  rep.checks["residual_sign_change_exact"] = signChange(exact);
  rep.checks["exact_root_inside_bracket"] =
      br.sLow <= exact.root && exact.root <= br.sHigh;
  rep.checks["bracket_intersects_jarnik"] =
      br.sLow <= jb.upper && jb.lower <= br.sHigh;

  CsvTable t{"solves",
             {"mode", "root", "intervalLo", "intervalHi", "residualLo",
              "residualHi", "iterations", "cylinderCount"},
             {}};
  for (const MoranRoot* r : {&br.lowerSolve, &br.upperSolve, &exact})
    t.rows.push_back({lengthModeName(r->mode), fmtDouble(r->root),
                      fmtDouble(r->intervalLo), fmtDouble(r->intervalHi),
                      fmtDouble(r->residualLo), fmtDouble(r->residualHi),
                      std::to_string(r->iterations),
                      std::to_string(r->cylinderCount)});
  rep.tables.push_back(std::move(t));
  CsvTable tb{"bracket",
              {"depth", "sLow", "sHigh", "width", "jarnikLower", "jarnikUpper"},
              {{std::to_string(depth), fmtDouble(br.sLow), fmtDouble(br.sHigh),
                fmtDouble(br.width()), fmtDouble(jb.lower),
                fmtDouble(jb.upper)}}};
  rep.tables.push_back(std::move(tb));
  return emitReport(rep, c.format, c.output);
}

int runConditions(const ConstructOpts& o, const Common& c) {
  ConstructionParams p;
  p.m = o.m;
  p.M = o.M;
  p.alpha = parseRational(o.alpha);
  p.sparse = makeSparseSpec(parseRational(o.gamma));
  p.base = parseBaseSpec(o.base);
  p.n0 = p.sparse.kMin;
  ConditionReport cr = findN0(p, o.scan);

  Report rep;
  rep.config = constructConfig("conditions", o, c);
  ordered_json rows = ordered_json::array();
  CsvTable t{"records",
             {"k", "nK", "nK1", "condA", "condB", "condCGap", "condCBound",
              "okA", "okB", "okC", "strictIncrease"},
             {}};
  for (const auto& r : cr.records) {
    ordered_json row;
    row["k"] = r.k;
    row["nK"] = r.nK.get_str();
    row["nK1"] = r.nK1.get_str();
    row["condA"] = r.condAValue;
    row["condB"] = r.condBValue;
    row["condCGap"] = r.condCGap;
    row["condCBound"] = r.condCBound;
    row["okA"] = r.okA;
    row["okB"] = r.okB;
    row["okC"] = r.okC;
    row["strictIncrease"] = r.strictIncrease;
    rows.push_back(std::move(row));
    t.rows.push_back({std::to_string(r.k), r.nK.get_str(), r.nK1.get_str(),
                      fmtDouble(r.condAValue), fmtDouble(r.condBValue),
                      fmtDouble(r.condCGap), fmtDouble(r.condCBound),
                      fmtBool(r.okA), fmtBool(r.okB), fmtBool(r.okC),
                      fmtBool(r.strictIncrease)});
  }
  rep.results["kMin"] = p.sparse.kMin;
  rep.results["records"] = std::move(rows);
  rep.results["n0Conditions"] =
      cr.n0Conditions ? ordered_json(*cr.n0Conditions) : ordered_json(nullptr);
  rep.results["n0Construction"] = cr.n0Construction
                                      ? ordered_json(*cr.n0Construction)
                                      : ordered_json(nullptr);
  rep.results["edgeIncrement"] = cr.edgeIncrement;
  rep.results["edgeEnvelope"] = cr.edgeEnvelope;
  rep.checks = ordered_json::object();  // a scan reports, it does not verify
  rep.tables.push_back(std::move(t));
  return emitReport(rep, c.format, c.output);
}

int runConstruct(const ConstructOpts& o, const std::string& checkpoints,
                 const Common& c) {
  std::string n0Source;
  ConstructionParams p = resolveParams(o, n0Source);
  ConstructedWord cw = synthesize(p, o.depth);
  std::vector<std::size_t> cps = parseCheckpoints(checkpoints, o.depth);
  std::vector<RatioSample> series = ratioSeries(cw.word, cps);

  // Per-insertion envelope blocks, for both columns and the containment check.
  std::vector<EnvelopeBlock> blocks;
  bool allInside = true;
  MonotonicityReport mono = checkMonotonicity(cw);
  for (const auto& ins : cw.insertions) {
    EnvelopeCheck ec = checkEnvelope(cw, ins.k);
    allInside = allInside && ec.allInside;
    blocks.push_back(ec.block);
  }
  auto blockFor = [&](std::size_t n) -> const EnvelopeBlock* {
    for (const auto& b : blocks)
      if (b.blockStart <= n && n <= b.blockEnd) return &b;
    return nullptr;
  };

  Report rep;
  rep.config = constructConfig("construct", o, c);
  rep.config["checkpoints"] = checkpoints;
  rep.results["n0"] = p.n0;
  rep.results["n0Source"] = n0Source;
  ordered_json ins = ordered_json::array();
  CsvTable ti{"insertions", {"k", "position", "digit", "accumulatedSum"}, {}};
  for (const auto& r : cw.insertions) {
    ins.push_back(insertionJson(r));
    ti.rows.push_back({std::to_string(r.k), std::to_string(r.position),
                       std::to_string(r.digit), r.accumulatedSum.get_str()});
  }
  rep.results["insertions"] = std::move(ins);

  ordered_json ser = ordered_json::array();
  CsvTable ts{"series",
              {"n", "sum", "largest", "ratio", "errBound", "defined", "blockK",
               "envLow", "envHigh", "inside"},
              {}};
  for (const auto& s : series) {
    ordered_json row = sampleJson(s);
    const EnvelopeBlock* b = blockFor(s.n);
    if (b != nullptr) {
      row["blockK"] = b->k;
      row["envLow"] = b->low;
      row["envHigh"] = b->high;
      row["inside"] = s.defined && b->low <= s.ratio && s.ratio <= b->high;
      ts.rows.push_back(
          {std::to_string(s.n), s.sum.get_str(), std::to_string(s.largest),
           fmtDouble(s.ratio), fmtDouble(s.errBound), fmtBool(s.defined),
           std::to_string(b->k), fmtDouble(b->low), fmtDouble(b->high),
           fmtBool(row["inside"].get<bool>())});
    } else {
      ts.rows.push_back({std::to_string(s.n), s.sum.get_str(),
                         std::to_string(s.largest), fmtDouble(s.ratio),
                         fmtDouble(s.errBound), fmtBool(s.defined), "", "",
                         "", ""});
    }
    ser.push_back(std::move(row));
  }
  rep.results["series"] = std::move(ser);

  rep.checks["envelope_all_inside"] = allInside;
  rep.checks["inserted_digits_at_least_M"] = mono.allAtLeastM;
  rep.checks["inserted_digits_non_decreasing"] = mono.nonDecreasing;
  rep.tables.push_back(std::move(ti));
  rep.tables.push_back(std::move(ts));
  return emitReport(rep, c.format, c.output);
}

int runRatio(std::int64_t m, std::int64_t M, const std::string& word,
             const std::string& base, std::size_t depth,
             const std::string& checkpoints, const Common& c) {
  DigitWord w;
  w.m = m;
  if (!word.empty()) {
    w.digits = parseInt64List(word);
  } else {
    if (depth == 0)
      throw std::invalid_argument("--depth is required with --base");
    w.digits = generateBaseDigits(parseBaseSpec(base), m, M, depth);
  }
  validateWord(w);
  std::vector<std::size_t> cps = parseCheckpoints(checkpoints, w.digits.size());
  std::vector<RatioSample> series = ratioSeries(w, cps);

  Report rep;
  rep.config = {{"tool", kToolVersion}, {"command", "ratio"},
                {"m", m},              {"M", M},
                {"word", word},        {"base", base},
                {"depth", depth},      {"checkpoints", checkpoints},
                {"format", c.format}};
  rep.results["length"] = w.digits.size();
  ordered_json ser = ordered_json::array();
  CsvTable t{"series", {"n", "sum", "largest", "ratio", "errBound", "defined"},
             {}};
  for (const auto& s : series) {
    ser.push_back(sampleJson(s));
    t.rows.push_back({std::to_string(s.n), s.sum.get_str(),
                      std::to_string(s.largest), fmtDouble(s.ratio),
                      fmtDouble(s.errBound), fmtBool(s.defined)});
  }
  rep.results["series"] = std::move(ser);
  rep.checks = ordered_json::object();
  rep.tables.push_back(std::move(t));
  return emitReport(rep, c.format, c.output);
}

ordered_json metricChecks(const MetricReport& r) {
  bool growth = true, lenUp = true, lenLo = true, qRatio = true, det = true,
       sens = true;
  for (const auto& row : r.rows) {
    growth = growth && row.growthOk;
    lenUp = lenUp && row.lengthUpperOk;
    lenLo = lenLo && row.lengthLowerOk;
    qRatio = qRatio && row.qRatioOk;
    det = det && row.determinantOk;
  }
  for (const auto& s : r.sensitivity) sens = sens && s.ok;
  ordered_json j;
  j["growth"] = growth;
  j["length_upper"] = lenUp;
  j["length_lower"] = lenLo;
  j["q_ratio"] = qRatio;
  j["determinant"] = det;
  j["sensitivity"] = sens;
  j["all"] = r.allOk;
  return j;
}

int runVerifyMetric(std::int64_t m, std::int64_t M, const std::string& word,
                    std::size_t count, std::size_t depth, std::uint64_t seed,
                    const Common& c) {
  Report rep;
  rep.config = {{"tool", kToolVersion}, {"command", "verify-metric"},
                {"m", m},              {"M", M},
                {"word", word},        {"count", count},
                {"depth", depth},      {"seed", seed},
                {"format", c.format}};

  if (!word.empty()) {
    DigitWord w;
    w.m = m;
    w.digits = parseInt64List(word);
    MetricReport r = verifyMetric(w);
    ordered_json rows = ordered_json::array();
    CsvTable t{"rows",
               {"n", "q", "length", "growthOk", "lengthUpperOk",
                "lengthLowerOk", "qRatioOk", "determinantOk"},
               {}};
    for (const auto& row : r.rows) {
      ordered_json jr;
      jr["n"] = row.n;
      jr["q"] = row.q;
      jr["length"] = row.length;
      jr["growthOk"] = row.growthOk;
      jr["lengthUpperOk"] = row.lengthUpperOk;
      jr["lengthLowerOk"] = row.lengthLowerOk;
      jr["qRatioOk"] = row.qRatioOk;
      jr["determinantOk"] = row.determinantOk;
      rows.push_back(std::move(jr));
      t.rows.push_back({std::to_string(row.n), fmtDouble(row.q),
                        fmtDouble(row.length), fmtBool(row.growthOk),
                        fmtBool(row.lengthUpperOk), fmtBool(row.lengthLowerOk),
                        fmtBool(row.qRatioOk), fmtBool(row.determinantOk)});
    }
    ordered_json sens = ordered_json::array();
    CsvTable t2{"sensitivity", {"k", "digit", "ratio", "lower", "upper", "ok"},
                {}};
    for (const auto& s : r.sensitivity) {
      ordered_json js;
      js["k"] = s.k;
      js["digit"] = s.digit;
      js["ratio"] = s.ratio;
      js["lower"] = s.lowerBound;
      js["upper"] = s.upperBound;
      js["ok"] = s.ok;
      sens.push_back(std::move(js));
      t2.rows.push_back({std::to_string(s.k), std::to_string(s.digit),
                         fmtDouble(s.ratio), fmtDouble(s.lowerBound),
                         fmtDouble(s.upperBound), fmtBool(s.ok)});
    }
    rep.results["rows"] = std::move(rows);
    rep.results["sensitivity"] = std::move(sens);
    rep.results["failures"] = r.failures;
    rep.checks = metricChecks(r);
    rep.tables.push_back(std::move(t));
    rep.tables.push_back(std::move(t2));
  } else {
    if (count == 0)
      throw std::invalid_argument("pass --word or a random suite via --count");
    std::size_t failedWords = 0;
    std::vector<std::string> failures;
    bool all = true;
    for (std::size_t i = 0; i < count; ++i) {
      Rng rng = Rng::forTask(seed, i);
      DigitWord w;
      w.m = m;
      for (std::size_t d = 0; d < depth; ++d)
        w.digits.push_back(rng.uniformInt(m, M));
      MetricReport r = verifyMetric(w);
      if (!r.allOk) {
        ++failedWords;
        all = false;
        if (failures.size() < 20)
          for (const auto& f : r.failures)
            failures.push_back("word " + std::to_string(i) + ": " + f);
      }
    }
    rep.results["words"] = count;
    rep.results["failedWords"] = failedWords;
    rep.results["failures"] = failures;
    rep.checks["all"] = all;
    CsvTable t{"summary",
               {"words", "depth", "failedWords", "all"},
               {{std::to_string(count), std::to_string(depth),
                 std::to_string(failedWords), fmtBool(all)}}};
    rep.tables.push_back(std::move(t));
  }
  return emitReport(rep, c.format, c.output);
}

int runVerifyMonotone(const ConstructOpts& o, const Common& c) {
  std::string n0Source;
  ConstructionParams p = resolveParams(o, n0Source);
  ConstructedWord cw = synthesize(p, o.depth);
  MonotonicityReport mono = checkMonotonicity(cw);

  Report rep;
  rep.config = constructConfig("verify-monotone", o, c);
  rep.results["n0"] = p.n0;
  rep.results["n0Source"] = n0Source;
  ordered_json ins = ordered_json::array();
  CsvTable t{"insertions", {"k", "position", "digit", "accumulatedSum"}, {}};
  for (const auto& r : cw.insertions) {
    ins.push_back(insertionJson(r));
    t.rows.push_back({std::to_string(r.k), std::to_string(r.position),
                      std::to_string(r.digit), r.accumulatedSum.get_str()});
  }
  rep.results["insertions"] = std::move(ins);
  rep.results["failures"] = mono.failures;
  rep.checks["inserted_digits_at_least_M"] = mono.allAtLeastM;
  rep.checks["inserted_digits_non_decreasing"] = mono.nonDecreasing;
  rep.tables.push_back(std::move(t));
  return emitReport(rep, c.format, c.output);
}

int runVerifyHolder(const ConstructOpts& o, std::size_t pairs,
                    std::size_t truncation, std::uint64_t probeSeed,
                    const std::string& scheme, double minExponent,
                    const Common& c) {
  std::string n0Source;
  ConstructionParams p = resolveParams(o, n0Source);
  ConstructedWord cw = synthesize(p, o.depth);
  HolderWitnessReport hw = holderWitnessBounds(cw);

  Report rep;
  rep.config = constructConfig("verify-holder", o, c);
  rep.config["pairs"] = pairs;
  rep.config["truncation"] = truncation;
  rep.config["probeSeed"] = probeSeed;
  rep.config["scheme"] = scheme;
  rep.config["minExponent"] = minExponent;

  rep.results["n0"] = p.n0;
  rep.results["n0Source"] = n0Source;
  ordered_json s2 = ordered_json::array();
  CsvTable t{"step2", {"k", "digit", "bound", "ok"}, {}};
  for (const auto& row : hw.step2) {
    ordered_json jr;
    jr["k"] = row.k;
    jr["digit"] = row.digit;
    jr["bound"] = row.bound.get_str();
    jr["ok"] = row.ok;
    s2.push_back(std::move(jr));
    t.rows.push_back({std::to_string(row.k), std::to_string(row.digit),
                      row.bound.get_str(), fmtBool(row.ok)});
  }
  rep.results["step2"] = std::move(s2);
  rep.results["step3"] = {{"deletions", hw.deletions},
                          {"regWord", hw.regWord.get_str()},
                          {"regSeed", hw.regSeed.get_str()},
                          {"factorLog2", hw.deletions * hw.deletions +
                                             (2 * p.n0 + 5) * hw.deletions},
                          {"ok", hw.step3Ok}};
  rep.checks["step2"] = hw.step2Ok;
  rep.checks["step3"] = hw.step3Ok;
  rep.tables.push_back(std::move(t));

  if (pairs > 0) {
    PairScheme ps = scheme == "random" ? PairScheme::RandomBase
                                       : PairScheme::EarlyDigit;
    std::size_t trunc = truncation == 0 ? o.depth : truncation;
    HolderEstimate est =
        holderExponentEstimate(p, trunc, pairs, probeSeed, ps);
    rep.results["estimate"] = {{"scheme", pairSchemeName(est.scheme)},
                               {"requestedPairs", est.requestedPairs},
                               {"usedPairs", est.usedPairs},
                               {"skippedPairs", est.skippedPairs},
                               {"truncationDepth", est.truncationDepth},
                               {"minExponent", est.minExponent},
                               {"medianExponent", est.medianExponent},
                               {"maxExponent", est.maxExponent}};
    if (minExponent >= 0.0)
      rep.checks["min_exponent_ok"] = est.minExponent >= minExponent;
    CsvTable te{"estimate",
                {"scheme", "usedPairs", "skippedPairs", "truncationDepth",
                 "minExponent", "medianExponent", "maxExponent"},
                {{pairSchemeName(est.scheme), std::to_string(est.usedPairs),
                  std::to_string(est.skippedPairs),
                  std::to_string(est.truncationDepth),
                  fmtDouble(est.minExponent), fmtDouble(est.medianExponent),
                  fmtDouble(est.maxExponent)}}};
    rep.tables.push_back(std::move(te));
  }
  return emitReport(rep, c.format, c.output);
}

int runMeasure(std::int64_t m, double a, double b, std::int64_t cutoff,
               std::size_t intervals, std::uint64_t seed, std::int64_t lawMax,
               double normTol, double teleTol, double addTol, double defectTol,
               const Common& c) {
  GaussMeasure gm(m);
  if (b < 0.0) b = gm.theta();
  if (lawMax < m) lawMax = m + 9;

  Report rep;
  rep.config = {{"tool", kToolVersion},
                {"command", "measure"},
                {"m", m},
                {"a", a},
                {"b", b},
                {"cutoff", cutoff},
                {"intervals", intervals},
                {"seed", seed},
                {"lawMax", lawMax},
                {"normTol", normTol},
                {"teleTol", teleTol},
                {"addTol", addTol},
                {"defectTol", defectTol},
                {"format", c.format}};

  // Normalization.
  double total = gm.intervalMeasure(0.0, gm.theta());
  rep.results["normalization"] = {{"value", total},
                                  {"defect", std::fabs(total - 1.0)}};
  bool normOk = std::fabs(total - 1.0) <= normTol;

  // Digit law table + telescoping against the closed-form partial sum.
  ordered_json law = ordered_json::array();
  CsvTable tl{"digit_law", {"j", "probability"}, {}};
  for (std::int64_t j = m; j <= lawMax; ++j) {
    double pj = gm.digitLaw(j);
    law.push_back({{"j", j}, {"probability", pj}});
    tl.rows.push_back({std::to_string(j), fmtDouble(pj)});
  }
  rep.results["digitLaw"] = std::move(law);
  std::int64_t J = cutoff;
  double naive = deterministicBlockSum(
      static_cast<std::size_t>(J - m + 1),
      [&](std::size_t i) {
        return gm.digitLaw(m + static_cast<std::int64_t>(i));
      },
      c.jobs);
  double partial = gm.digitLawPartialSum(J);
  double tail = gm.digitLawTail(J);
  rep.results["telescoping"] = {{"J", J},
                                {"naiveSum", naive},
                                {"partialSum", partial},
                                {"tail", tail},
                                {"defect", std::fabs(naive - partial)},
                                {"partialPlusTail", partial + tail}};
  bool teleOk = std::fabs(naive - partial) <= teleTol &&
                std::fabs(partial + tail - 1.0) <= teleTol;

  // Invariance on the explicit interval plus optional random intervals.
  struct Case {
    double a, b;
  };
  std::vector<Case> cases{{a, b}};
  for (std::size_t i = 0; i < intervals; ++i) {
    Rng rng = Rng::forTask(seed, i);
    double u1 = rng.uniform01(), u2 = rng.uniform01();
    while (u1 == u2) u2 = rng.uniform01();
    cases.push_back({gm.theta() * std::min(u1, u2),
                     gm.theta() * std::max(u1, u2)});
  }
  ordered_json inv = ordered_json::array();
  CsvTable ti{"invariance",
              {"a", "b", "cutoff", "measure", "branchSum", "tailExact",
               "tailBound", "truncationRemainder", "residual"},
              {}};
  bool defectOk = true, tailOk = true, addOk = true;
  for (const auto& cs : cases) {
    InvarianceReport r = invarianceDefect(m, cs.a, cs.b, cutoff, c.jobs);
    ordered_json jr;
    jr["a"] = r.a;
    jr["b"] = r.b;
    jr["measure"] = r.measure;
    jr["branchSum"] = r.branchSum;
    jr["tailExact"] = r.tailExact;
    jr["tailBound"] = r.tailBound;
    jr["truncationRemainder"] = r.truncationRemainder;
    jr["residual"] = r.residual;
    inv.push_back(std::move(jr));
    ti.rows.push_back({fmtDouble(r.a), fmtDouble(r.b), std::to_string(cutoff),
                       fmtDouble(r.measure), fmtDouble(r.branchSum),
                       fmtDouble(r.tailExact), fmtDouble(r.tailBound),
                       fmtDouble(r.truncationRemainder),
                       fmtDouble(r.residual)});
    defectOk = defectOk && r.residual < defectTol;
    tailOk = tailOk && r.tailWithinBound;
    double mid = 0.5 * (cs.a + cs.b);
    double addDefect = std::fabs(gm.intervalMeasure(cs.a, cs.b) -
                                 gm.intervalMeasure(cs.a, mid) -
                                 gm.intervalMeasure(mid, cs.b));
    addOk = addOk && addDefect <= addTol;
  }
  rep.results["invariance"] = std::move(inv);

  rep.checks["normalization_ok"] = normOk;
  rep.checks["telescoping_ok"] = teleOk;
  rep.checks["additivity_ok"] = addOk;
  rep.checks["invariance_defect_ok"] = defectOk;
  rep.checks["tail_within_bound"] = tailOk;
  rep.tables.push_back(std::move(tl));
  rep.tables.push_back(std::move(ti));
  return emitReport(rep, c.format, c.output);
}

int runSample(std::int64_t m, std::uint64_t seed, std::size_t count,
              std::int64_t digitSpan, bool emitValues, std::size_t orbitLen,
              const std::string& checkpoints, const Common& c) {
  GaussMeasure gm(m);

  Report rep;
  rep.config = {{"tool", kToolVersion}, {"command", "sample"},
                {"m", m},              {"seed", seed},
                {"count", count},      {"digitSpan", digitSpan},
                {"emitValues", emitValues},
                {"orbit", orbitLen},   {"checkpoints", checkpoints},
                {"format", c.format}};

  std::vector<double> xs = sampleGamma(m, seed, count, c.jobs);
  double mean = deterministicBlockSum(
                    count, [&](std::size_t i) { return xs[i]; }, c.jobs) /
                static_cast<double>(count);
  double mn = xs[0], mx = xs[0];
  for (double x : xs) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  rep.results["summary"] = {{"count", count},
                            {"mean", mean},
                            {"min", mn},
                            {"max", mx}};
  CsvTable tsum{"summary",
                {"count", "mean", "min", "max"},
                {{std::to_string(count), fmtDouble(mean), fmtDouble(mn),
                  fmtDouble(mx)}}};
  rep.tables.push_back(std::move(tsum));

  // First-digit frequencies against the digit law.
  ordered_json freq = ordered_json::array();
  CsvTable tf{"digit_freq",
              {"j", "observed", "frequency", "expected", "sigmaDeviation"},
              {}};
  bool threeSigma = true;
  for (std::int64_t j = m; j < m + digitSpan; ++j) {
    std::size_t hits = 0;
    for (double x : xs) hits += gm.firstDigit(x) == j ? 1 : 0;
    double p = gm.digitLaw(j);
    double f = static_cast<double>(hits) / static_cast<double>(count);
    double sigma =
        std::sqrt(p * (1.0 - p) / static_cast<double>(count));
    double dev = (f - p) / sigma;
    freq.push_back({{"j", j},
                    {"observed", hits},
                    {"frequency", f},
                    {"expected", p},
                    {"sigmaDeviation", dev}});
    tf.rows.push_back({std::to_string(j), std::to_string(hits), fmtDouble(f),
                       fmtDouble(p), fmtDouble(dev)});
    threeSigma = threeSigma && std::fabs(dev) <= 3.0;
  }
  rep.results["digitFrequencies"] = std::move(freq);
  rep.tables.push_back(std::move(tf));
  if (count >= 1000) rep.checks["three_sigma_ok"] = threeSigma;

  if (emitValues) {
    if (count > 10000)
      throw std::invalid_argument(
          "--emit-values is capped at 10000 samples; lower --count");
    rep.results["values"] = xs;
    CsvTable tv{"values", {"index", "x"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i)
      tv.rows.push_back({std::to_string(i), fmtDouble(xs[i])});
    rep.tables.push_back(std::move(tv));
  }

  if (orbitLen > 0) {
    std::vector<std::size_t> cps = parseCheckpoints(checkpoints, orbitLen);
    OrbitStats os = orbitStatsSampled(m, seed, orbitLen, cps);
    ordered_json ser = ordered_json::array();
    CsvTable to{"orbit_series",
                {"n", "sum", "largest", "ratio", "errBound", "defined"},
                {}};
    for (const auto& s : os.series) {
      ser.push_back(sampleJson(s));
      to.rows.push_back({std::to_string(s.n), s.sum.get_str(),
                         std::to_string(s.largest), fmtDouble(s.ratio),
                         fmtDouble(s.errBound), fmtBool(s.defined)});
    }
    rep.results["orbit"] = {{"length", os.word.digits.size()},
                            {"terminated", os.word.terminated},
                            {"precisionRestarts", os.precisionRestarts},
                            {"finalPrecision", os.finalPrecision},
                            {"series", std::move(ser)}};
    rep.tables.push_back(std::move(to));
  }
  return emitReport(rep, c.format, c.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"theta-expansion toolkit: exact digit dynamics, sparse "
               "constructions, dimension and measure diagnostics"};
  app.require_subcommand(1);

  // --- expand / orbit ---
  struct {
    std::int64_t m = 2;
    std::string x;
    std::size_t n = 20;
    Common c;
  } exp1, orb;
  CLI::App* cExpand = app.add_subcommand("expand", "Digits of an exact point");
  cExpand->add_option("--m", exp1.m, "Field radicand")->capture_default_str();
  cExpand->add_option("--x", exp1.x, "Point (expression over integers, "
                      "rationals, sqrt(m))")->required();
  cExpand->add_option("--n", exp1.n, "Digit count")->capture_default_str();
  addCommon(cExpand, exp1.c);

  CLI::App* cOrbit = app.add_subcommand("orbit", "Exact orbit under the digit map");
  cOrbit->add_option("--m", orb.m, "Field radicand")->capture_default_str();
  cOrbit->add_option("--x", orb.x, "Start point")->required();
  cOrbit->add_option("--n", orb.n, "Steps")->capture_default_str();
  addCommon(cOrbit, orb.c);

  // --- jarnik ---
  struct {
    std::int64_t m = 2;
    std::string M = "10";
    Common c;
  } jar;
  CLI::App* cJarnik = app.add_subcommand("jarnik", "Closed-form dimension sandwich");
  cJarnik->add_option("--m", jar.m, "Field radicand")->capture_default_str();
  cJarnik->add_option("--M", jar.M, "Digit ceiling or comma list")
      ->capture_default_str();
  addCommon(cJarnik, jar.c);

  // --- dimension ---
  struct {
    std::int64_t m = 2;
    std::int64_t M = 10;
    std::size_t depth = 4;
    double tol = 1e-9;
    std::size_t budget = 100000000;
    Common c;
  } dim;
  CLI::App* cDim = app.add_subcommand("dimension", "Moran-equation dimension bracket");
  cDim->add_option("--m", dim.m, "Field radicand")->capture_default_str();
  cDim->add_option("--M", dim.M, "Digit ceiling")->capture_default_str();
  cDim->add_option("--depth", dim.depth, "Cylinder depth")->capture_default_str();
  cDim->add_option("--tol", dim.tol, "Bisection tolerance")->capture_default_str();
  cDim->add_option("--budget", dim.budget, "Enumeration budget")
      ->capture_default_str();
  addCommon(cDim, dim.c);

  // --- conditions ---
  ConstructOpts conOpt;
  Common conC;
  CLI::App* cCond = app.add_subcommand("conditions", "Admissibility condition scan");
  addConstructOpts(cCond, conOpt, false);
  addCommon(cCond, conC);

  // --- construct ---
  ConstructOpts bldOpt;
  Common bldC;
  std::string bldCps = "auto";
  CLI::App* cBuild = app.add_subcommand("construct", "Synthesize a word and its ratio series");
  addConstructOpts(cBuild, bldOpt, true);
  cBuild->add_option("--checkpoints", bldCps, "'auto' or comma list")
      ->capture_default_str();
  addCommon(cBuild, bldC);

  // --- ratio ---
  struct {
    std::int64_t m = 2;
    std::int64_t M = 10;
    std::string word;
    std::string base = "random:1";
    std::size_t depth = 0;
    std::string cps = "auto";
    Common c;
  } rat;
  CLI::App* cRatio = app.add_subcommand("ratio", "Digit-ratio series of a word");
  cRatio->add_option("--m", rat.m, "Field radicand")->capture_default_str();
  cRatio->add_option("--M", rat.M, "Digit ceiling for generated bases")
      ->capture_default_str();
  cRatio->add_option("--word", rat.word, "Explicit digit list");
  cRatio->add_option("--base", rat.base, "Base policy when no --word")
      ->capture_default_str();
  cRatio->add_option("--depth", rat.depth, "Generated word length");
  cRatio->add_option("--checkpoints", rat.cps, "'auto' or comma list")
      ->capture_default_str();
  addCommon(cRatio, rat.c);

  // --- verify-metric ---
  struct {
    std::int64_t m = 2;
    std::int64_t M = 10;
    std::string word;
    std::size_t count = 0;
    std::size_t depth = 12;
    std::uint64_t seed = 1;
    Common c;
  } vm;
  CLI::App* cVm = app.add_subcommand("verify-metric", "Exact per-depth estimates on words");
  cVm->add_option("--m", vm.m, "Field radicand")->capture_default_str();
  cVm->add_option("--M", vm.M, "Digit ceiling for random words")
      ->capture_default_str();
  cVm->add_option("--word", vm.word, "Explicit digit list");
  cVm->add_option("--count", vm.count, "Random words to test");
  cVm->add_option("--depth", vm.depth, "Random word depth")->capture_default_str();
  cVm->add_option("--seed", vm.seed, "Random word seed")->capture_default_str();
  addCommon(cVm, vm.c);

  // --- verify-monotone ---
  ConstructOpts monOpt;
  Common monC;
  CLI::App* cMon = app.add_subcommand("verify-monotone", "Inserted-digit monotonicity");
  addConstructOpts(cMon, monOpt, true);
  addCommon(cMon, monC);

  // --- verify-holder ---
  ConstructOpts holOpt;
  Common holC;
  std::size_t holPairs = 200, holTrunc = 0;
  std::uint64_t holSeed = 2024;
  std::string holScheme = "early";
  double holMinExp = -1.0;
  CLI::App* cHol = app.add_subcommand("verify-holder", "Seed-map regularity witnesses");
  addConstructOpts(cHol, holOpt, true);
  cHol->add_option("--pairs", holPairs, "Empirical probe pairs (0 = skip)")
      ->capture_default_str();
  cHol->add_option("--truncation", holTrunc, "Probe depth (0 = use --depth)")
      ->capture_default_str();
  cHol->add_option("--probe-seed", holSeed, "Probe seed")->capture_default_str();
  cHol->add_option("--scheme", holScheme, "Pair scheme")
      ->check(CLI::IsMember({"early", "random"}))
      ->capture_default_str();
  cHol->add_option("--min-exponent", holMinExp,
                   "Fail if the empirical min exponent drops below this")
      ->capture_default_str();
  addCommon(cHol, holC);

  // --- measure ---
  struct {
    std::int64_t m = 2;
    double a = 0.0;
    double b = -1.0;
    std::int64_t cutoff = 100000;
    std::size_t intervals = 0;
    std::uint64_t seed = 1;
    std::int64_t lawMax = -1;
    double normTol = 1e-14;
    double teleTol = 1e-12;
    double addTol = 1e-12;
    double defectTol = 1e-8;
    Common c;
  } mea;
  CLI::App* cMea = app.add_subcommand("measure", "Invariant-measure diagnostics");
  cMea->add_option("--m", mea.m, "Field radicand")->capture_default_str();
  cMea->add_option("--a", mea.a, "Interval left end")->capture_default_str();
  cMea->add_option("--b", mea.b, "Interval right end (-1 = theta)")
      ->capture_default_str();
  cMea->add_option("--cutoff", mea.cutoff, "Branch cutoff")->capture_default_str();
  cMea->add_option("--intervals", mea.intervals, "Extra random intervals")
      ->capture_default_str();
  cMea->add_option("--seed", mea.seed, "Random interval seed")
      ->capture_default_str();
  cMea->add_option("--law-max", mea.lawMax, "Largest digit in the law table")
      ->capture_default_str();
  cMea->add_option("--norm-tol", mea.normTol, "Normalization tolerance")
      ->capture_default_str();
  cMea->add_option("--tele-tol", mea.teleTol, "Telescoping tolerance")
      ->capture_default_str();
  cMea->add_option("--add-tol", mea.addTol, "Additivity tolerance")
      ->capture_default_str();
  cMea->add_option("--defect-tol", mea.defectTol, "Invariance defect tolerance")
      ->capture_default_str();
  addCommon(cMea, mea.c);

  // --- sample ---
  struct {
    std::int64_t m = 2;
    std::uint64_t seed = 1;
    std::size_t count = 100000;
    std::int64_t digitSpan = 6;
    bool emitValues = false;
    std::size_t orbit = 0;
    std::string cps = "auto";
    Common c;
  } smp;
  CLI::App* cSmp = app.add_subcommand("sample", "Measure-distributed sampling and orbit statistics");
  cSmp->add_option("--m", smp.m, "Field radicand")->capture_default_str();
  cSmp->add_option("--seed", smp.seed, "Sampling seed")->capture_default_str();
  cSmp->add_option("--count", smp.count, "Sample count")->capture_default_str();
  cSmp->add_option("--digit-span", smp.digitSpan,
                   "Digits m..m+span-1 in the frequency table")
      ->capture_default_str();
  cSmp->add_flag("--emit-values", smp.emitValues,
                 "Include raw samples (count <= 10000)");
  cSmp->add_option("--orbit", smp.orbit,
                   "Also run an orbit of this length on a sampled point")
      ->capture_default_str();
  cSmp->add_option("--checkpoints", smp.cps, "Orbit checkpoints")
      ->capture_default_str();
  addCommon(cSmp, smp.c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(cExpand))
      return runExpand(exp1.m, exp1.x, exp1.n, exp1.c);
    if (app.got_subcommand(cOrbit)) return runOrbit(orb.m, orb.x, orb.n, orb.c);
    if (app.got_subcommand(cJarnik)) return runJarnik(jar.m, jar.M, jar.c);
    if (app.got_subcommand(cDim))
      return runDimension(dim.m, dim.M, dim.depth, dim.tol, dim.budget, dim.c);
    if (app.got_subcommand(cCond)) return runConditions(conOpt, conC);
    if (app.got_subcommand(cBuild)) return runConstruct(bldOpt, bldCps, bldC);
    if (app.got_subcommand(cRatio))
      return runRatio(rat.m, rat.M, rat.word, rat.base, rat.depth, rat.cps,
                      rat.c);
    if (app.got_subcommand(cVm))
      return runVerifyMetric(vm.m, vm.M, vm.word, vm.count, vm.depth, vm.seed,
                             vm.c);
    if (app.got_subcommand(cMon)) return runVerifyMonotone(monOpt, monC);
    if (app.got_subcommand(cHol))
      return runVerifyHolder(holOpt, holPairs, holTrunc, holSeed, holScheme,
                             holMinExp, holC);
    if (app.got_subcommand(cMea))
      return runMeasure(mea.m, mea.a, mea.b, mea.cutoff, mea.intervals,
                        mea.seed, mea.lawMax, mea.normTol, mea.teleTol,
                        mea.addTol, mea.defectTol, mea.c);
    if (app.got_subcommand(cSmp))
      return runSample(smp.m, smp.seed, smp.count, smp.digitSpan,
                       smp.emitValues, smp.orbit, smp.cps, smp.c);
  } catch (const AmbiguityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand selected\n";
  return 2;
}
