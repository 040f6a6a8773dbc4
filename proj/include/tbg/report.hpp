#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace tbg {

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr const char* kReportSchema = "tbgeom-report/1";

namespace tol {
inline constexpr double kIdentity = 1e-9;   // identities between independently computed quantities
inline constexpr double kExact = 1e-10;     // quantities that vanish or coincide by construction
inline constexpr double kWitness = 1e-6;    // threshold for "visibly nonzero"
}  // namespace tol

// Tracks the worst deviation between paired values. A pair (a, b) deviates by
// |a - b| on the scale 1 + max(|a|, |b|); the accumulator passes iff every
// deviation is within tol on its scale.
class DeviationAccumulator {
 public:
  explicit DeviationAccumulator(double tolerance = tol::kIdentity) : tol_(tolerance) {}

  void add(double a, double b, const std::vector<double>* point = nullptr) {
    const double dev = std::abs(a - b);
    const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
    record(dev, dev / scale, point);
  }
  // A quantity that should vanish.
  void add_zero(double r, const std::vector<double>* point = nullptr) { add(r, 0.0, point); }

  template <class Range>
  void add_all(const Range& a, const Range& b, const std::vector<double>* point = nullptr) {
    auto ia = std::begin(a);
    auto ib = std::begin(b);
    for (; ia != std::end(a); ++ia, ++ib) add(*ia, *ib, point);
  }
  template <class Range>
  void add_all_zero(const Range& a, const std::vector<double>* point = nullptr) {
    for (double v : a) add_zero(v, point);
  }

  void merge(const DeviationAccumulator& o) {
    if (o.count_ == 0) return;
    if (o.max_rel_ > max_rel_ || count_ == 0) worst_ = o.worst_;
    max_abs_ = std::max(max_abs_, o.max_abs_);
    max_rel_ = std::max(max_rel_, o.max_rel_);
    count_ += o.count_;
    nonfinite_ = nonfinite_ || o.nonfinite_;
  }

  double tolerance() const { return tol_; }
  double max_abs() const { return max_abs_; }
  double max_rel() const { return max_rel_; }
  long count() const { return count_; }
  bool pass() const { return !nonfinite_ && max_rel_ <= tol_; }
  const std::vector<double>& worst_point() const { return worst_; }

 private:
  void record(double dev, double rel, const std::vector<double>* point) {
    ++count_;
    if (!std::isfinite(dev)) {
      nonfinite_ = true;
      max_abs_ = max_rel_ = std::numeric_limits<double>::infinity();
      if (point) worst_ = *point;
      return;
    }
    if (rel > max_rel_ || count_ == 1) {
      if (point) worst_ = *point;
    }
    max_abs_ = std::max(max_abs_, dev);
    max_rel_ = std::max(max_rel_, rel);
  }

  double tol_;
  double max_abs_ = 0.0;
  double max_rel_ = 0.0;
  long count_ = 0;
  bool nonfinite_ = false;
  std::vector<double> worst_;
};

// Largest magnitude seen; used where a quantity must be visibly nonzero somewhere.
class WitnessAccumulator {
 public:
  explicit WitnessAccumulator(double threshold = tol::kWitness) : threshold_(threshold) {}
  void add(double v, const std::vector<double>* point = nullptr) {
    const double a = std::abs(v);
    if (a > max_ || count_ == 0) {
      max_ = std::max(max_, a);
      if (point) where_ = *point;
    }
    ++count_;
  }
  template <class Range>
  void add_all(const Range& r, const std::vector<double>* point = nullptr) {
    for (double v : r) add(v, point);
  }
  double max() const { return max_; }
  double threshold() const { return threshold_; }
  long count() const { return count_; }
  bool pass() const { return max_ > threshold_; }
  const std::vector<double>& where() const { return where_; }

 private:
  double threshold_;
  double max_ = 0.0;
  long count_ = 0;
  std::vector<double> where_;
};

struct CandidateResult {
  std::string label;
  bool printed = false;  // the form as published, as opposed to an alternative reading
  double max_abs = 0.0;
  double max_rel = 0.0;
  bool matches = false;
  bool operator==(const CandidateResult&) const = default;
};

// Several readings of one formula compared against the same oracle value.
class CandidateSet {
 public:
  struct Spec {
    std::string label;
    bool printed;
  };
  CandidateSet(std::vector<Spec> specs, double tolerance = tol::kIdentity) : specs_(std::move(specs)) {
    accs_.assign(specs_.size(), DeviationAccumulator(tolerance));
  }
  DeviationAccumulator& operator[](std::size_t k) { return accs_[k]; }
  const DeviationAccumulator& operator[](std::size_t k) const { return accs_[k]; }
  std::size_t size() const { return specs_.size(); }

  std::vector<CandidateResult> results() const {
    std::vector<CandidateResult> out;
    for (std::size_t k = 0; k < specs_.size(); ++k)
      out.push_back({specs_[k].label, specs_[k].printed, accs_[k].max_abs(), accs_[k].max_rel(), accs_[k].pass()});
    return out;
  }

 private:
  std::vector<Spec> specs_;
  std::vector<DeviationAccumulator> accs_;
};

enum class CheckKind { kIdentity, kWitness, kCandidates };

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::kIdentity: return "identity";
    case CheckKind::kWitness: return "witness";
    case CheckKind::kCandidates: return "candidates";
  }
  return "identity";
}

inline CheckKind check_kind_from_string(const std::string& s) {
  if (s == "witness") return CheckKind::kWitness;
  if (s == "candidates") return CheckKind::kCandidates;
  return CheckKind::kIdentity;
}

struct CheckRecord {
  std::string id;
  std::string equation;  // equation tag such as "eq4", or "" for engine-internal checks
  std::string suite;
  std::string description;
  CheckKind kind = CheckKind::kIdentity;
  long points = 0;
  double tolerance = tol::kIdentity;
  double max_abs = 0.0;
  double max_rel = 0.0;
  bool pass = false;
  std::string verdict;
  std::vector<CandidateResult> candidates;
  std::vector<double> worst_point;

  bool operator==(const CheckRecord&) const = default;
};

inline CheckRecord make_identity_check(std::string id, std::string equation, std::string suite, std::string description,
                                       long points, const DeviationAccumulator& acc) {
  CheckRecord r;
  r.id = std::move(id);
  r.equation = std::move(equation);
  r.suite = std::move(suite);
  r.description = std::move(description);
  r.kind = CheckKind::kIdentity;
  r.points = points;
  r.tolerance = acc.tolerance();
  r.max_abs = acc.max_abs();
  r.max_rel = acc.max_rel();
  r.pass = acc.pass();
  r.worst_point = acc.worst_point();
  return r;
}

inline CheckRecord make_witness_check(std::string id, std::string equation, std::string suite, std::string description,
                                      long points, const WitnessAccumulator& acc) {
  CheckRecord r;
  r.id = std::move(id);
  r.equation = std::move(equation);
  r.suite = std::move(suite);
  r.description = std::move(description);
  r.kind = CheckKind::kWitness;
  r.points = points;
  r.tolerance = acc.threshold();
  r.max_abs = acc.max();
  r.max_rel = acc.max();
  r.pass = acc.pass();
  r.worst_point = acc.where();
  return r;
}

// Exactly one matching candidate resolves the reading. When every candidate
// matches, the sample could not tell them apart (for example at delta = 0).
inline CheckRecord make_candidate_check(std::string id, std::string equation, std::string suite,
                                        std::string description, long points, const CandidateSet& set) {
  CheckRecord r;
  r.id = std::move(id);
  r.equation = std::move(equation);
  r.suite = std::move(suite);
  r.description = std::move(description);
  r.kind = CheckKind::kCandidates;
  r.points = points;
  r.tolerance = set.size() ? set[0].tolerance() : tol::kIdentity;
  r.candidates = set.results();
  std::vector<std::size_t> matching;
  for (std::size_t k = 0; k < r.candidates.size(); ++k)
    if (r.candidates[k].matches) matching.push_back(k);
  if (matching.empty()) {
    r.pass = false;
    r.verdict = "no candidate matches";
  } else if (matching.size() == r.candidates.size() && matching.size() > 1) {
    r.pass = true;
    r.verdict = "indistinguishable";
  } else if (matching.size() == 1) {
    r.pass = true;
    r.verdict = r.candidates[matching[0]].label;
  } else {
    r.pass = false;
    r.verdict = "ambiguous:";
    for (std::size_t k : matching) r.verdict += " " + r.candidates[k].label;
  }
  // Deviation of the best candidate summarizes the record.
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < r.candidates.size(); ++k)
    if (r.candidates[k].max_rel < best) {
      best = r.candidates[k].max_rel;
      best_k = k;
    }
  if (!r.candidates.empty()) {
    r.max_abs = r.candidates[best_k].max_abs;
    r.max_rel = r.candidates[best_k].max_rel;
    r.worst_point = set[best_k].worst_point();
  }
  return r;
}

// True when a resolved reading differs from the published form.
inline bool is_erratum(const CheckRecord& r) {
  if (r.kind != CheckKind::kCandidates || !r.pass) return false;
  for (const auto& c : r.candidates)
    if (c.label == r.verdict) return !c.printed;
  return false;
}

struct ReportSummary {
  long total = 0;
  long passed = 0;
  long failed = 0;
  bool operator==(const ReportSummary&) const = default;
};

struct ErratumRecord {
  std::string check;
  std::string equation;
  std::string resolved;
  bool operator==(const ErratumRecord&) const = default;
};

struct VerificationReport {
  std::string engine_version = kEngineVersion;
  std::string spec;
  unsigned long long seed = 42;
  int points = 100;
  std::string suite = "all";
  std::vector<double> deltas;
  std::string admission_mode = "warn";
  bool admitted = true;
  std::vector<CheckRecord> checks;
  std::vector<std::string> uncovered_equations;

  void add(CheckRecord r) { checks.push_back(std::move(r)); }

  ReportSummary summary() const {
    ReportSummary s;
    for (const auto& c : checks) {
      ++s.total;
      if (c.pass)
        ++s.passed;
      else
        ++s.failed;
    }
    return s;
  }
  bool all_pass() const { return summary().failed == 0; }

  std::vector<ErratumRecord> errata() const {
    std::vector<ErratumRecord> out;
    for (const auto& c : checks)
      if (is_erratum(c)) out.push_back({c.id, c.equation, c.verdict});
    return out;
  }

  const CheckRecord* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }

  // Deterministic order: by check id.
  void sort_checks() {
    std::stable_sort(checks.begin(), checks.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  }

  bool operator==(const VerificationReport&) const = default;
};

// =============================================================================
// Serialization
// =============================================================================

namespace detail {
inline nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // JSON has no infinity; read back as +inf
}
inline double read_number(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}
}  // namespace detail

inline nlohmann::json to_json(const CheckRecord& c) {
  nlohmann::json j;
  j["id"] = c.id;
  j["equation"] = c.equation;
  j["suite"] = c.suite;
  j["description"] = c.description;
  j["kind"] = to_string(c.kind);
  j["points"] = c.points;
  j["tolerance"] = detail::number(c.tolerance);
  j["max_abs"] = detail::number(c.max_abs);
  j["max_rel"] = detail::number(c.max_rel);
  j["pass"] = c.pass;
  j["verdict"] = c.verdict;
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& k : c.candidates) {
    nlohmann::json cj;
    cj["label"] = k.label;
    cj["printed"] = k.printed;
    cj["max_abs"] = detail::number(k.max_abs);
    cj["max_rel"] = detail::number(k.max_rel);
    cj["matches"] = k.matches;
    cands.push_back(cj);
  }
  j["candidates"] = cands;
  nlohmann::json wp = nlohmann::json::array();
  for (double v : c.worst_point) wp.push_back(detail::number(v));
  j["worst_point"] = wp;
  return j;
}

inline CheckRecord check_from_json(const nlohmann::json& j) {
  CheckRecord c;
  c.id = j.at("id").get<std::string>();
  c.equation = j.at("equation").get<std::string>();
  c.suite = j.at("suite").get<std::string>();
  c.description = j.at("description").get<std::string>();
  c.kind = check_kind_from_string(j.at("kind").get<std::string>());
  c.points = j.at("points").get<long>();
  c.tolerance = detail::read_number(j.at("tolerance"));
  c.max_abs = detail::read_number(j.at("max_abs"));
  c.max_rel = detail::read_number(j.at("max_rel"));
  c.pass = j.at("pass").get<bool>();
  c.verdict = j.at("verdict").get<std::string>();
  for (const auto& cj : j.at("candidates"))
    c.candidates.push_back({cj.at("label").get<std::string>(), cj.at("printed").get<bool>(),
                            detail::read_number(cj.at("max_abs")), detail::read_number(cj.at("max_rel")),
                            cj.at("matches").get<bool>()});
  for (const auto& v : j.at("worst_point")) c.worst_point.push_back(detail::read_number(v));
  return c;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["engine_version"] = r.engine_version;
  j["spec"] = r.spec;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["suite"] = r.suite;
  nlohmann::json d = nlohmann::json::array();
  for (double v : r.deltas) d.push_back(detail::number(v));
  j["deltas"] = d;
  j["admission"] = {{"mode", r.admission_mode}, {"admitted", r.admitted}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  const ReportSummary s = r.summary();
  j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"all_pass", s.failed == 0}};
  j["uncovered_equations"] = r.uncovered_equations;
  nlohmann::json errata = nlohmann::json::array();
  for (const auto& e : r.errata()) errata.push_back({{"check", e.check}, {"equation", e.equation}, {"resolved", e.resolved}});
  j["errata"] = errata;
  return j;
}

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline VerificationReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) throw ReportFormatError("unsupported report schema");
    VerificationReport r;
    r.engine_version = j.at("engine_version").get<std::string>();
    r.spec = j.at("spec").get<std::string>();
    r.seed = j.at("seed").get<unsigned long long>();
    r.points = j.at("points").get<int>();
    r.suite = j.at("suite").get<std::string>();
    for (const auto& v : j.at("deltas")) r.deltas.push_back(detail::read_number(v));
    r.admission_mode = j.at("admission").at("mode").get<std::string>();
    r.admitted = j.at("admission").at("admitted").get<bool>();
    for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
    r.uncovered_equations = j.at("uncovered_equations").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  }
}

inline std::string report_to_json_string(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

namespace detail {
inline std::string fmt_sci(double v) {
  if (!std::isfinite(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}
inline std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}
}  // namespace detail

inline std::string report_to_markdown(const VerificationReport& r) {
  std::ostringstream os;
  const ReportSummary s = r.summary();
  os << "# Verification report: " << r.spec << "\n\n";
  os << "- engine: " << r.engine_version << "\n";
  os << "- suite: " << r.suite << ", seed: " << r.seed << ", points: " << r.points << "\n";
  os << "- deltas:";
  for (double d : r.deltas) os << " " << d;
  os << "\n";
  os << "- admission: " << r.admission_mode << (r.admitted ? " (admitted)" : " (not admitted)") << "\n";
  os << "- checks: " << s.total << " total, " << s.passed << " passed, " << s.failed << " failed\n";
  os << "- curvature convention: R(d_i, d_j) d_k = R_ijk^h d_h with "
        "R_ijk^h = d_i G^h_jk - d_j G^h_ik + G^h_is G^s_jk - G^h_js G^s_ik\n\n";

  std::map<std::string, std::vector<const CheckRecord*>> by_eq;
  for (const auto& c : r.checks)
    if (!c.equation.empty()) by_eq[c.equation].push_back(&c);
  auto eq_order = [](const std::string& e) {
    return e.size() > 2 && e.rfind("eq", 0) == 0 ? std::atoi(e.c_str() + 2) : 1000;
  };
  std::vector<std::string> eqs;
  for (const auto& [e, v] : by_eq) eqs.push_back(e);
  std::sort(eqs.begin(), eqs.end(), [&](const std::string& a, const std::string& b) {
    return eq_order(a) != eq_order(b) ? eq_order(a) < eq_order(b) : a < b;
  });

  os << "## Equations\n\n| equation | checks | passed | worst rel. deviation | verdicts |\n|---|---|---|---|---|\n";
  for (const auto& e : eqs) {
    const auto& v = by_eq[e];
    long passed = 0;
    double worst = 0.0;
    std::set<std::string> verdicts;
    for (const auto* c : v) {
      passed += c->pass ? 1 : 0;
      if (c->kind != CheckKind::kWitness) worst = std::max(worst, c->max_rel);
      if (!c->verdict.empty()) verdicts.insert(c->verdict);
    }
    std::string vs;
    for (const auto& x : verdicts) vs += (vs.empty() ? "" : "; ") + x;
    os << "| " << e << " | " << v.size() << " | " << passed << " | " << detail::fmt_sci(worst) << " | "
       << detail::md_escape(vs) << " |\n";
  }

  os << "\n## Checks\n\n| id | equation | kind | points | max abs | max rel | tol | result | verdict |\n"
        "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& c : r.checks) {
    os << "| " << detail::md_escape(c.id) << " | " << c.equation << " | " << to_string(c.kind) << " | " << c.points
       << " | " << detail::fmt_sci(c.max_abs) << " | " << detail::fmt_sci(c.max_rel) << " | "
       << detail::fmt_sci(c.tolerance) << " | " << (c.pass ? "pass" : "FAIL") << " | " << detail::md_escape(c.verdict)
       << " |\n";
  }

  os << "\n## Errata\n\n";
  const auto errata = r.errata();
  if (errata.empty()) os << "none\n";
  for (const auto& e : errata) os << "- " << e.equation << " (" << e.check << "): resolved as `" << e.resolved << "`\n";

  os << "\n## Uncovered equations\n\n";
  if (r.uncovered_equations.empty()) os << "none\n";
  for (const auto& e : r.uncovered_equations) os << "- " << e << "\n";
  return os.str();
}

}  // namespace tbg
