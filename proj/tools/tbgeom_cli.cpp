#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tbg/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInfra = 2;

struct RunArgs {
  std::string spec;
  std::string suite = "all";
  std::uint64_t seed = 42;
  int points = 100;
  std::vector<double> deltas;
  bool strict = false;
  std::string format = "json";
  std::string out;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("spec", a.spec, "spec file or builtin name")->required();
  cmd->add_option("--suite", a.suite, "admission|metric|connection|maps|all")
      ->check(CLI::IsMember(tbg::known_suites()));
  cmd->add_option("--seed", a.seed, "PRNG seed");
  cmd->add_option("--points", a.points, "sample points per check")->check(CLI::PositiveNumber);
  cmd->add_option("--delta", a.deltas, "deformation parameter, repeatable (default: spec list, else 1.0)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--strict", a.strict, "admission failure fails the run and skips closed-form checks");
  cmd->add_option("--out", a.out, "write the report here instead of stdout");
}

bool emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

tbg::VerificationReport run(const RunArgs& a) {
  const tbg::LoadedSpec spec = tbg::load_spec(a.spec);
  tbg::SuiteOptions opt;
  opt.suite = a.suite;
  opt.seed = a.seed;
  opt.points = a.points;
  opt.deltas = a.deltas;
  opt.strict = a.strict;
  return tbg::run_suite(spec, opt);
}

std::string render(const tbg::VerificationReport& r, const std::string& format) {
  return format == "markdown" ? tbg::report_to_markdown(r) : tbg::report_to_json_string(r);
}

void print_summary(const tbg::VerificationReport& r, std::ostream& os) {
  const auto s = r.summary();
  for (const auto& c : r.checks)
    if (!c.pass) {
      os << "FAIL " << c.id << "  max_rel=" << c.max_rel;
      if (!c.verdict.empty()) os << "  (" << c.verdict << ")";
      if (!c.worst_point.empty()) os << "  at " << tbg::format_point(c.worst_point);
      os << "\n";
    }
  for (const auto& e : r.errata()) os << "erratum " << e.check << ": " << e.resolved << "\n";
  os << r.spec << ": " << s.passed << "/" << s.total << " checks passed";
  if (!r.admitted) os << " (admission failed, mode " << r.admission_mode << ")";
  os << "\n";
}

int cmd_list() {
  for (const auto& b : tbg::list_builtins()) std::cout << b.name << "  " << b.description << "\n";
  return kExitPass;
}

int cmd_validate(const std::string& path) {
  const tbg::LoadedSpec spec = tbg::load_spec(path);
  const auto pts = tbg::sample_base_points(*spec.manifold, 100, 42);
  const tbg::AdmissionResult a = tbg::run_admission(spec.manifold, spec.phi, pts);
  for (const auto& c : a.checks) {
    std::cout << (c.pass ? "pass " : "FAIL ") << c.id;
    if (!c.pass) {
      if (!c.verdict.empty()) std::cout << "  (" << c.verdict << ")";
      if (!c.worst_point.empty()) std::cout << "  worst point " << tbg::format_point(c.worst_point);
    }
    std::cout << "\n";
  }
  std::cout << spec.spec.name << ": " << (a.admitted() ? "admitted" : "not admitted") << "\n";
  return a.admitted() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed Sasaki metric verification engine"};
  app.set_version_flag("--version", tbg::kEngineVersion);
  app.require_subcommand(1);

  app.add_subcommand("list-builtins", "list the built-in example manifolds");

  std::string validate_spec;
  auto* validate = app.add_subcommand("validate", "load a spec and run the admission checks");
  validate->add_option("spec", validate_spec, "spec file or builtin name")->required();

  RunArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_run_options(verify, verify_args);
  verify->add_option("--format", verify_args.format, "json|markdown")->check(CLI::IsMember({"json", "markdown"}));

  RunArgs report_args;
  auto* report = app.add_subcommand("report", "run the suite and print the report");
  add_run_options(report, report_args);
  report->add_option("--format", report_args.format, "json|markdown")
      ->check(CLI::IsMember({"json", "markdown"}))
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInfra;
  }

  try {
    if (app.got_subcommand("list-builtins")) return cmd_list();
    if (validate->parsed()) return cmd_validate(validate_spec);
    if (verify->parsed()) {
      const auto r = run(verify_args);
      if (!verify_args.out.empty()) {
        if (!emit(render(r, verify_args.format), verify_args.out)) return kExitInfra;
      }
      print_summary(r, std::cout);
      return tbg::exit_code(r);
    }
    if (report->parsed()) {
      const auto r = run(report_args);
      if (!emit(render(r, report_args.format), report_args.out)) return kExitInfra;
      return tbg::exit_code(r);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfra;
  }
  return kExitInfra;
}
