// One line per acceptance criterion. Exit status 0 iff the set of failing
// criteria equals the --expect-fail list (empty by default).

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tbg/suite.hpp"

using namespace tbg;

namespace {

namespace ac {
constexpr double kIdentity = 1e-9;
constexpr double kExact = 1e-10;
constexpr double kWitness = 1e-6;
constexpr double kDerivative = 1e-6;
constexpr int kPoints = 100;
constexpr std::uint64_t kSeed = 42;
constexpr int kRandomExpressions = 1000;
}  // namespace ac

const std::vector<double> kDeltas{0.0, 0.5, 1.0, 2.0};
const std::vector<double> kPositiveDeltas{0.5, 1.0, 2.0};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    pass = false;
    notes.push_back(why);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string dtag(double d) { return "[delta=" + format_delta(d) + "]"; }

class Reports {
 public:
  const VerificationReport& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    SuiteOptions o;
    o.seed = ac::kSeed;
    o.points = ac::kPoints;
    o.deltas = kDeltas;
    return cache_.emplace(name, run_suite(load_builtin(name), o)).first->second;
  }

 private:
  std::map<std::string, VerificationReport> cache_;
};

// Looks up a record; a missing one fails the criterion.
const CheckRecord* need(const VerificationReport& r, const std::string& id, Outcome& out) {
  const CheckRecord* c = r.find(id);
  if (!c) out.fail(r.spec + ": missing check " + id);
  return c;
}

void at_most(const VerificationReport& r, const std::string& id, double tol, Outcome& out, bool absolute = false) {
  const CheckRecord* c = need(r, id, out);
  if (!c) return;
  const double v = absolute ? c->max_abs : c->max_rel;
  if (!(c->pass && v <= tol)) out.fail(r.spec + " " + id + " deviation " + sci(v) + " > " + sci(tol));
}

// Metric consistency.
Outcome ac1(Reports& reps) {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"flat-para-2", "para-surface"}) {
    const auto& r = reps.get(name);
    for (double d : kDeltas)
      for (const char* id : {"metric.eq1.horizontal", "metric.eq1.mixed", "metric.eq1.vertical", "metric.eq2.block_matrix",
                             "metric.eq3.inverse_product"}) {
        at_most(r, id + dtag(d), ac::kIdentity, o);
        if (const auto* c = r.find(id + dtag(d))) worst = std::max(worst, c->max_rel);
      }
  }
  o.note("worst " + sci(worst));
  return o;
}

// Closed-form Levi-Civita connection against the oracle.
Outcome ac2(Reports& reps) {
  Outcome o;
  const auto& r = reps.get("para-surface");
  for (double d : kDeltas)
    for (const char* id : {"connection.eq4.line1", "connection.eq4.line2", "connection.eq4.line3"})
      at_most(r, id + dtag(d), ac::kIdentity, o);
  std::set<std::string> verdicts;
  for (double d : kPositiveDeltas) {
    const auto* c = need(r, "connection.eq4.line4" + dtag(d), o);
    if (!c) continue;
    int matching = 0;
    for (const auto& k : c->candidates) matching += k.matches ? 1 : 0;
    if (matching != 1) o.fail("line 4 at delta " + format_delta(d) + ": " + std::to_string(matching) + " candidates match");
    verdicts.insert(c->verdict);
  }
  if (verdicts.size() != 1) o.fail("line 4 verdict not stable across delta");
  if (!verdicts.empty()) o.note("line 4 denominator " + *verdicts.begin());
  return o;
}

// Levi-Civita characterization of the oracle.
Outcome ac3(Reports& reps) {
  Outcome o;
  for (const auto& name : builtin_names()) {
    const auto& r = reps.get(name);
    for (double d : kDeltas) {
      at_most(r, "connection.oracle.torsion_free" + dtag(d), ac::kIdentity, o);
      at_most(r, "connection.oracle.metric_compatible" + dtag(d), ac::kIdentity, o);
    }
  }
  return o;
}

double record_abs(const VerificationReport& r, const std::string& id) {
  const auto* c = r.find(id);
  return c ? c->max_abs : std::nan("");
}

// Projection: totally geodesic iff flat, always harmonic.
Outcome ac4(Reports& reps) {
  Outcome o;
  for (const char* name : {"flat-para-2", "flat-para-4"}) {
    const auto& r = reps.get(name);
    for (double d : kDeltas) {
      at_most(r, "maps.eq7.totally_geodesic_iff_flat" + dtag(d), ac::kExact, o, true);
      at_most(r, "maps.eq7.harmonic" + dtag(d), ac::kIdentity, o, true);
    }
  }
  // The nonflat direction is asked of para-surface.
  const auto& s = reps.get("para-surface");
  double mixed = 0.0;
  for (double d : kDeltas) {
    mixed = std::max(mixed, record_abs(s, "maps.eq7.totally_geodesic_iff_flat" + dtag(d)));
    at_most(s, "maps.eq7.harmonic" + dtag(d), ac::kIdentity, o, true);
  }
  if (!(mixed > ac::kWitness))
    o.fail("para-surface max|beta(pi)(E_ibar,E_j)| = " + sci(mixed) + ", not > 1e-6: anti-paraKahler surfaces are flat");
  // Same statement on a curved 4-dimensional base, reported for reference.
  const auto& p = reps.get("para-product");
  double pm = 0.0;
  bool ph = true;
  for (double d : kDeltas) {
    const auto* c = p.find("maps.eq7.totally_geodesic_iff_flat" + dtag(d));
    if (c && c->pass) pm = std::max(pm, c->max_abs);
    const auto* h = p.find("maps.eq7.harmonic" + dtag(d));
    ph = ph && h && h->pass;
  }
  o.note("para-product: mixed block " + sci(pm) + (ph ? ", tau = 0" : ", tau NONZERO"));
  return o;
}

// Harmonic pairs.
Outcome ac5() {
  Outcome o;
  nlohmann::json j = *builtin_json("flat-para-2");
  j["name"] = "flat-para-2 with para-surface h";
  j["second_metric"] = builtin_json("para-surface")->at("metric");
  SuiteOptions opt;
  opt.suite = "maps";
  opt.points = ac::kPoints;
  opt.seed = ac::kSeed;
  opt.deltas = {1.0};
  const auto r = run_suite(build_spec(spec_from_json(j)), opt);
  at_most(r, "maps.eq9.scaled_metric", ac::kExact, o, true);
  at_most(r, "maps.eq9.residual_equals_identity_tension", ac::kExact, o, true);
  const auto* h = r.find("maps.eq9.second_metric_harmonic");
  if (h) o.note("residual size " + sci(h->max_abs));
  return o;
}

// Sections: isometric immersion iff parallel.
Outcome ac6(Reports& reps) {
  Outcome o;
  const std::set<std::string> parallel{"zero", "constant", "parallel"};
  double iso = 0.0, non = std::numeric_limits<double>::infinity();
  for (const auto& name : builtin_names()) {
    const auto& r = reps.get(name);
    for (const auto& [field, xi] : load_builtin(name).fields)
      for (double d : kDeltas) {
        const std::string t = "[delta=" + format_delta(d) + ",xi=" + field + "]";
        at_most(r, "maps.eq10.pullback_metric" + t, ac::kIdentity, o);
        const auto* c = need(r, "maps.eq10.isometric_iff_parallel" + t, o);
        if (!c) continue;
        if (!c->pass) o.fail(name + " " + c->id + ": " + c->verdict);
        if (parallel.count(field)) {
          iso = std::max(iso, c->max_abs);
          if (c->max_abs > ac::kExact) o.fail(name + " " + field + ": pullback differs by " + sci(c->max_abs));
        }
        if (field == "x1_d2") {
          non = std::min(non, c->max_abs);
          if (!(c->max_abs > ac::kWitness)) o.fail(name + " x1_d2: pullback gap only " + sci(c->max_abs));
        }
      }
  }
  o.note("parallel gap " + sci(iso) + ", x1 d2 gap >= " + sci(non));
  return o;
}

// Section second fundamental form and tension.
Outcome ac7(Reports& reps) {
  Outcome o;
  std::set<std::string> verdicts;
  for (const auto& name : builtin_names()) {
    const auto& r = reps.get(name);
    for (const auto& c : r.checks) {
      const bool section = c.id.rfind("maps.eq11.", 0) == 0 || c.id.rfind("maps.eq12.", 0) == 0;
      if (!section) continue;
      if (c.kind == CheckKind::kCandidates) {
        if (!c.pass || c.max_rel > ac::kIdentity) o.fail(name + " " + c.id + ": " + c.verdict);
        if (c.verdict != "indistinguishable") verdicts.insert(c.id.substr(5, c.id.find('[') - 5) + "=" + c.verdict);
      } else if (!c.pass || c.max_abs > ac::kExact) {
        o.fail(name + " " + c.id + " " + sci(c.max_abs));
      }
    }
  }
  std::string v;
  for (const auto& s : verdicts) v += (v.empty() ? "" : ", ") + s;
  o.note("verdicts: " + v);
  return o;
}

// Identity maps between the two lifted metrics.
Outcome ac8(Reports& reps) {
  Outcome o;
  std::set<std::string> resolved;
  for (const auto& name : builtin_names()) {
    const auto& r = reps.get(name);
    for (double d : kPositiveDeltas) {
      for (const char* id : {"maps.eq14.tension", "maps.eq15.tension"}) {
        const auto* c = need(r, id + dtag(d), o);
        if (!c) continue;
        int printed_matches = 0;
        for (const auto& k : c->candidates)
          if (k.printed && k.matches) ++printed_matches;
        if (printed_matches != 1)
          o.fail(name + " " + c->id + ": " + std::to_string(printed_matches) + " printed (denominator, n) pairs match");
        resolved.insert(std::string(id).substr(5, 4) + " -> " + c->verdict);
      }
      const auto* w = need(r, "maps.eq14.not_harmonic" + dtag(d), o);
      if (w && !w->pass) o.fail(name + " " + w->id + ": max " + sci(w->max_abs));
    }
  }
  // Keep the line readable: one failure per equation is enough.
  std::vector<std::string> compact;
  std::set<std::string> seen;
  for (const auto& n : o.notes) {
    const std::string key = n.find("eq14") != std::string::npos ? "eq14" : n.find("eq15") != std::string::npos ? "eq15" : n;
    if (seen.insert(key).second) compact.push_back(n);
  }
  o.notes = compact;
  for (const auto& s : resolved) o.note("oracle resolves " + s);
  return o;
}

// Mean connection and the identity into it.
Outcome ac9(Reports& reps) {
  Outcome o;
  for (const auto& name : builtin_names()) {
    const auto& r = reps.get(name);
    for (double d : kDeltas) {
      at_most(r, "connection.eq18.torsion_free" + dtag(d), ac::kIdentity, o);
      at_most(r, "maps.eq19.beta" + dtag(d), ac::kIdentity, o);
      at_most(r, "maps.eq19.trace" + dtag(d), ac::kIdentity, o, true);
    }
  }
  const auto& f = reps.get("flat-para-2");
  for (double d : kDeltas) at_most(f, "connection.eq18.flat_equals_levi_civita" + dtag(d), ac::kExact, o, true);
  // Nonflat direction asked of para-surface.
  const auto& s = reps.get("para-surface");
  double b = 0.0;
  for (double d : kDeltas) b = std::max(b, record_abs(s, "maps.eq19.nonzero_iff_curved" + dtag(d)));
  if (!(b > ac::kWitness)) o.fail("para-surface max|beta(I)| = " + sci(b) + ", not > 1e-6: anti-paraKahler surfaces are flat");
  const auto& p = reps.get("para-product");
  double pb = 0.0;
  for (double d : kPositiveDeltas) pb = std::max(pb, record_abs(p, "maps.eq19.nonzero_iff_curved" + dtag(d)));
  o.note("para-product: max|beta(I)| " + sci(pb));
  return o;
}

// Random expression trees kept inside every function's domain on [-1, 1]^2.
Expr random_expr(std::mt19937_64& rng, int depth) {
  auto pick = [&](unsigned n) { return static_cast<unsigned>(rng() % n); };
  auto leaf = [&]() -> Expr {
    switch (pick(3)) {
      case 0: return Expr::variable("x");
      case 1: return Expr::variable("y");
      default: return Expr(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
    }
  };
  if (depth == 0 || pick(4) == 0) return leaf();
  switch (pick(10)) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) / (Expr(2.5) + sin(random_expr(rng, depth - 1)));
    case 4: return pow(random_expr(rng, depth - 1), static_cast<int>(pick(4)));
    case 5: return sin(random_expr(rng, depth - 1));
    case 6: return cos(random_expr(rng, depth - 1));
    case 7: return exp(Expr(0.5) * sin(random_expr(rng, depth - 1)));
    case 8: return log(Expr(1.0) + pow(random_expr(rng, depth - 1), 2));
    default: return sqrt(Expr(0.5) + pow(random_expr(rng, depth - 1), 2));
  }
}

// Engine self-tests.
Outcome ac10() {
  Outcome o;
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const std::vector<std::string> vars{"x", "y"};
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < ac::kRandomExpressions; ++k) {
    const Expr e = random_expr(rng, 4);
    const int v = k % 2;
    std::vector<double> p{box(rng), box(rng)};
    const double d = evaluate(differentiate(e, vars[v]), vars, p);
    auto pp = p, pm = p;
    pp[v] += h;
    pm[v] -= h;
    const double fd = (evaluate(e, vars, pp) - evaluate(e, vars, pm)) / (2 * h);
    const double rel = std::abs(d - fd) / (1 + std::abs(d));
    worst = std::max(worst, rel);
  }
  if (!(worst <= ac::kDerivative)) o.fail("derivative deviation " + sci(worst));
  SuiteOptions opt;
  opt.seed = ac::kSeed;
  opt.points = ac::kPoints;
  const auto spec = load_builtin("para-product");
  const std::string a = report_to_json_string(run_suite(spec, opt));
  const std::string b = report_to_json_string(run_suite(spec, opt));
  if (a != b) o.fail("reports differ between identical runs");
  o.note(std::to_string(ac::kRandomExpressions) + " expressions, worst " + sci(worst) + "; report " +
         std::to_string(a.size()) + " bytes identical");
  return o;
}

std::set<std::string> parse_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--expect-fail AC4,AC8,...]\n";
      return 2;
    }
  }

  Reports reps;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 metric consistency", [&] { return ac1(reps); }},
      {"AC2 connection closed form vs oracle", [&] { return ac2(reps); }},
      {"AC3 oracle is Levi-Civita", [&] { return ac3(reps); }},
      {"AC4 projection totally geodesic iff flat, harmonic", [&] { return ac4(reps); }},
      {"AC5 harmonic pairs", [] { return ac5(); }},
      {"AC6 section isometric iff parallel", [&] { return ac6(reps); }},
      {"AC7 section beta and tau closed forms", [&] { return ac7(reps); }},
      {"AC8 identity-map tensions, one printed candidate", [&] { return ac8(reps); }},
      {"AC9 mean connection", [&] { return ac9(reps); }},
      {"AC10 engine self-tests", [] { return ac10(); }},
  };

  std::set<std::string> failed;
  for (const auto& [title, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("error: ") + e.what());
    }
    const std::string tag = title.substr(0, title.find(' '));
    if (!o.pass) failed.insert(tag);
    std::cout << (o.pass ? "PASS " : "FAIL ") << title;
    for (std::size_t k = 0; k < o.notes.size(); ++k) std::cout << (k ? "; " : " | ") << o.notes[k];
    std::cout << "\n";
  }
  std::cout << "acceptance: " << criteria.size() - failed.size() << "/" << criteria.size() << " criteria pass";
  if (!expected.empty()) {
    std::cout << " (expected failures:";
    for (const auto& e : expected) std::cout << " " << e;
    std::cout << ")";
  }
  std::cout << "\n";
  return failed == expected ? 0 : 1;
}
