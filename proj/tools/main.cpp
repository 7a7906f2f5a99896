// Command-line front end: metric checks, GA threshold scans, Radon identity
// verification, and the discrete Plateau solver.
//
// Exit codes: 0 success, 1 verdict failure, 2 configuration error,
//             3 solver did not converge, 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "finsler/cartan.h"
#include "finsler/curve.h"
#include "finsler/gacheck.h"
#include "finsler/metric.h"
#include "finsler/metric_io.h"
#include "finsler/plateau.h"
#include "finsler/radon.h"
#include "finsler/reports.h"
#include "finsler/sampling.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNumerical = 4;

void Fail(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

bool EnsureOutDir(const std::string& dir) {
  if (dir.empty() || dir == ".") return true;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    Fail("cannot create output directory '" + dir + "': " + ec.message());
    return false;
  }
  return true;
}

std::string FormatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Canonical configuration text: sorted key=value pairs joined by
// semicolons, hashed into every report for byte-reproducibility.
class ConfigText {
 public:
  void Add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void Add(const std::string& key, double value) { Add(key, FormatDouble(value)); }
  void Add(const std::string& key, int value) { Add(key, std::to_string(value)); }
  void Add(const std::string& key, std::uint64_t value) {
    Add(key, std::to_string(value));
  }
  std::string Text() const {
    std::vector<std::pair<std::string, std::string>> sorted = entries_;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i) out += ';';
      out += sorted[i].first + "=" + sorted[i].second;
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

bool WriteOrFail(const std::string& path, const std::string& content) {
  std::string error;
  if (!finsler::WriteTextFile(path, content, &error)) {
    Fail(error);
    return false;
  }
  std::fprintf(stdout, "wrote %s\n", path.c_str());
  return true;
}

int RunCheckMetric(const std::string& metric_path, int samples, int ga_samples,
                   int sufficient_samples, std::uint64_t seed,
                   const std::string& out_dir) {
  if (!EnsureOutDir(out_dir)) return kExitConfig;
  finsler::MetricSpec spec;
  std::string error;
  if (!finsler::ParseMetricSpecFile(metric_path, &spec, &error)) {
    Fail(error);
    return kExitConfig;
  }
  finsler::FinslerCheckReport fin =
      finsler::CheckFinsler(spec, finsler::Vec3::Zero(), samples, seed);
  finsler::GAReport ga;
  if (!finsler::CheckGa(spec, &ga, &error, ga_samples, sufficient_samples)) {
    Fail(error);
    return kExitNumerical;
  }
  ConfigText config;
  config.Add("command", "check-metric");
  config.Add("metric", spec.CanonicalText());
  config.Add("samples", samples);
  config.Add("ga_samples", ga_samples);
  config.Add("sufficient_samples", sufficient_samples);
  config.Add("seed", seed);
  finsler::ReportContext ctx{config.Text(), seed};
  if (!WriteOrFail(JoinPath(out_dir, "finsler_report.json"),
                   finsler::FinslerReportJson(fin, ctx))) {
    return kExitNumerical;
  }
  if (!WriteOrFail(JoinPath(out_dir, "ga_report.json"),
                   finsler::GaReportJson(ga, ctx))) {
    return kExitNumerical;
  }
  bool pass = fin.verdict && ga.direct.holds;
  std::fprintf(stdout, "finsler=%s ga=%s sufficient=%s\n",
               fin.verdict ? "pass" : "fail", ga.direct.holds ? "pass" : "fail",
               ga.sufficient.holds ? "holds" : "does-not-apply");
  return pass ? kExitOk : kExitVerdict;
}

int RunThresholdScan(const std::string& family_name, double b_lo, double b_hi,
                     double tol, int rows, int samples, std::uint64_t seed,
                     const std::string& out_dir, const std::string& format) {
  if (!EnsureOutDir(out_dir)) return kExitConfig;
  finsler::PhiFamily family;
  if (!finsler::ParsePhiName(family_name, &family)) {
    Fail("unknown family '" + family_name + "'");
    return kExitConfig;
  }
  // Default brackets contain the known critical values with slack on both
  // sides.
  if (b_lo < 0.0 || b_hi < 0.0) {
    switch (family) {
      case finsler::PhiFamily::kRanders: b_lo = 0.4; b_hi = 0.8; break;
      case finsler::PhiFamily::kTwoOrder: b_lo = 0.2; b_hi = 0.45; break;
      case finsler::PhiFamily::kMatsumoto: b_lo = 0.35; b_hi = 0.65; break;
      default:
        Fail("no default bracket for family '" + family_name +
             "'; pass --b-lo and --b-hi");
        return kExitConfig;
    }
  }
  finsler::ThresholdResult result;
  std::string error;
  if (!finsler::ThresholdScan(family, b_lo, b_hi, tol, &result, &error, rows,
                              samples)) {
    Fail(error);
    return error.find("inconsistent") != std::string::npos ? kExitNumerical
                                                           : kExitConfig;
  }
  ConfigText config;
  config.Add("command", "threshold-scan");
  config.Add("family", family_name);
  config.Add("b_lo", b_lo);
  config.Add("b_hi", b_hi);
  config.Add("tol", tol);
  config.Add("rows", rows);
  config.Add("samples", samples);
  config.Add("seed", seed);
  finsler::ReportContext ctx{config.Text(), seed};
  std::string base = "threshold_" + result.family;
  bool ok = format == "json"
                ? WriteOrFail(JoinPath(out_dir, base + ".json"),
                              finsler::ThresholdResultJson(result, ctx))
                : WriteOrFail(JoinPath(out_dir, base + ".csv"),
                              finsler::ThresholdResultCsv(result, ctx));
  if (!ok) return kExitNumerical;
  std::fprintf(stdout, "critical_b=%s bracket=[%s, %s]\n",
               FormatDouble(result.critical_b).c_str(),
               FormatDouble(result.bracket_lo).c_str(),
               FormatDouble(result.bracket_hi).c_str());
  return kExitOk;
}

int RunSolvePlateau(const std::string& metric_path, const std::string& curve_name,
                    int rings, int quad_n, const std::vector<double>& eps_schedule,
                    double tol, int max_iters, bool no_closed_form,
                    std::uint64_t seed, const std::string& out_dir) {
  if (!EnsureOutDir(out_dir)) return kExitConfig;
  finsler::MetricSpec spec;
  std::string error;
  if (!finsler::ParseMetricSpecFile(metric_path, &spec, &error)) {
    Fail(error);
    return kExitConfig;
  }
  finsler::BoundaryCurve curve;
  if (!finsler::MakeNamedCurve(curve_name, &curve, &error)) {
    Fail(error);
    return kExitConfig;
  }
  finsler::SolveConfig config;
  config.rings = rings;
  config.quad_n = quad_n;
  if (!eps_schedule.empty()) config.eps_schedule = eps_schedule;
  config.grad_tol = tol;
  config.max_iterations_per_stage = max_iters;
  config.use_closed_form = !no_closed_form;
  config.seed = seed;
  finsler::SolveResult result;
  if (!finsler::SolvePlateau(spec, curve, config, &result, &error)) {
    Fail(error);
    bool config_problem = error.find("must") != std::string::npos ||
                          error.find("requires") != std::string::npos;
    if (result.degenerate) return kExitNumerical;
    return config_problem ? kExitConfig : kExitNumerical;
  }
  ConfigText cfg;
  cfg.Add("command", "solve-plateau");
  cfg.Add("metric", spec.CanonicalText());
  cfg.Add("curve", curve.name);
  cfg.Add("rings", rings);
  cfg.Add("quad_n", quad_n);
  std::string sched;
  for (std::size_t i = 0; i < config.eps_schedule.size(); ++i) {
    if (i) sched += ',';
    sched += FormatDouble(config.eps_schedule[i]);
  }
  cfg.Add("eps_schedule", sched);
  cfg.Add("tol", tol);
  cfg.Add("max_iters", max_iters);
  cfg.Add("closed_form", config.use_closed_form ? 1 : 0);
  cfg.Add("seed", seed);
  finsler::ReportContext ctx{cfg.Text(), seed};
  if (!finsler::WriteObjFile(result.mesh, JoinPath(out_dir, "surface.obj"),
                             &error)) {
    Fail(error);
    return kExitNumerical;
  }
  std::fprintf(stdout, "wrote %s\n", JoinPath(out_dir, "surface.obj").c_str());
  if (!WriteOrFail(JoinPath(out_dir, "solve_report.json"),
                   finsler::SolveReportJson(result, ctx))) {
    return kExitNumerical;
  }
  for (const std::string& w : result.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  std::fprintf(stdout,
               "area=%s euclidean=%s conformality=%s converged=%s\n",
               FormatDouble(result.finsler_area).c_str(),
               FormatDouble(result.euclidean_area).c_str(),
               FormatDouble(result.conformality_defect).c_str(),
               result.converged ? "yes" : "no");
  return result.converged ? kExitOk : kExitNotConverged;
}

int RunRadonVerify(const std::string& metric_path, double tol, int samples,
                   int quad_n, std::uint64_t seed, const std::string& out_dir) {
  if (!EnsureOutDir(out_dir)) return kExitConfig;
  finsler::MetricSpec spec;
  if (metric_path.empty()) {
    spec.family = finsler::MetricFamily::kRanders;
    spec.b = finsler::Vec3(0.3, 0.0, 0.0);
  } else {
    std::string error;
    if (!finsler::ParseMetricSpecFile(metric_path, &spec, &error)) {
      Fail(error);
      return kExitConfig;
    }
  }
  if (!(tol > 0.0)) {
    Fail("tolerance must be positive");
    return kExitConfig;
  }
  finsler::RadonVerifyReport report;
  report.sample_count = samples;
  report.quad_n = quad_n;
  report.tolerance = tol;

  finsler::SplitMix64 rng(seed ? seed : 0x5ca1ab1eULL);
  std::string error;

  // 1. Closed form: the transform of the inverse-square norm is 1/|Z|.
  finsler::HomogeneousFunction inv_square;
  inv_square.eval = [](const finsler::Vec3& y) { return 1.0 / y.squaredNorm(); };
  inv_square.degree = -2.0;
  for (int i = 0; i < samples; ++i) {
    finsler::Vec3 z = finsler::RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    double r;
    if (!finsler::RadonTransform(inv_square, z, quad_n, &r, &error)) {
      Fail(error);
      return kExitNumerical;
    }
    report.inverse_square_max_error =
        std::max(report.inverse_square_max_error, std::abs(r - 1.0 / z.norm()));
  }

  // 2. Reciprocity: quadrature area integrand times the transform of F^-m.
  finsler::CartanIntegrand ci;
  if (!finsler::MakeCartanIntegrand(spec, quad_n, &ci, &error,
                                    /*use_closed_form=*/false)) {
    Fail(error);
    return kExitConfig;
  }
  const int m = spec.m;
  finsler::HomogeneousFunction f_inv_m;
  f_inv_m.degree = -m;
  for (int i = 0; i < samples; ++i) {
    finsler::Vec3 x = finsler::Vec3::Zero();
    if (spec.IsXDependent()) {
      x = finsler::Vec3(rng.NextInRange(-1.0, 1.0), rng.NextInRange(-1.0, 1.0),
                        rng.NextInRange(-1.0, 1.0));
    }
    finsler::Vec3 z = finsler::RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    f_inv_m.eval = [&spec, &x, m](const finsler::Vec3& y) {
      double f = finsler::EvalMetricFast(spec, x, y);
      return std::pow(f, -m);
    };
    double area, transform;
    if (!finsler::AreaIntegrand(ci, x, z, &area, &error) ||
        !finsler::RadonTransform(f_inv_m, z, quad_n, &transform, &error)) {
      Fail(error);
      return kExitNumerical;
    }
    report.reciprocity_max_error =
        std::max(report.reciprocity_max_error, std::abs(area * transform - 1.0));
  }

  // 3. First-order differentiation rule on F^-m at x = 0.
  finsler::HomogeneousFunction g;
  g.degree = -m;
  g.eval = [&spec, m](const finsler::Vec3& y) {
    double f = finsler::EvalMetricFast(spec, finsler::Vec3::Zero(), y);
    return std::pow(f, -m);
  };
  for (int i = 0; i < samples; ++i) {
    finsler::Vec3 z = finsler::RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    int tau = static_cast<int>(rng.Next() % 3);
    int sigma = static_cast<int>(rng.Next() % 3);
    finsler::DiffRuleReport rule;
    if (!finsler::VerifyDiffRule(g, z, tau, sigma, quad_n, &rule, &error)) {
      Fail(error);
      return kExitNumerical;
    }
    report.diff_rule_max_residual =
        std::max(report.diff_rule_max_residual, rule.residual);
  }

  report.verdict = report.inverse_square_max_error <= 1e-12 &&
                   report.reciprocity_max_error <= 1e-12 &&
                   report.diff_rule_max_residual <= tol;

  ConfigText config;
  config.Add("command", "radon-verify");
  config.Add("metric", spec.CanonicalText());
  config.Add("tol", tol);
  config.Add("samples", samples);
  config.Add("quad_n", quad_n);
  config.Add("seed", seed);
  finsler::ReportContext ctx{config.Text(), seed};
  if (!WriteOrFail(JoinPath(out_dir, "radon_report.json"),
                   finsler::RadonVerifyReportJson(report, ctx))) {
    return kExitNumerical;
  }
  std::fprintf(stdout,
               "inverse_square=%s reciprocity=%s diff_rule=%s verdict=%s\n",
               FormatDouble(report.inverse_square_max_error).c_str(),
               FormatDouble(report.reciprocity_max_error).c_str(),
               FormatDouble(report.diff_rule_max_residual).c_str(),
               report.verdict ? "pass" : "fail");
  return report.verdict ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Finsler area toolkit: metric checks, threshold scans, Radon identity "
      "verification, and a discrete Plateau solver"};
  app.require_subcommand(1);

  std::string metric_path, curve_name = "circle", out_dir = ".";
  std::string family_name, format = "csv";
  int samples = 200, ga_samples = 500, sufficient_samples = 200;
  int rows = 13, scan_samples = 500;
  int rings = 16, quad_n = 256, max_iters = 400, radon_samples = 100;
  double b_lo = -1.0, b_hi = -1.0, tol = -1.0;
  std::vector<double> eps_schedule;
  bool no_closed_form = false;
  std::uint64_t seed = 0;

  CLI::App* check = app.add_subcommand(
      "check-metric", "Positivity/convexity checks for a metric spec file");
  check->add_option("--metric", metric_path, "metric spec file")->required();
  check->add_option("--samples", samples, "direction samples for the basic check");
  check->add_option("--ga-samples", ga_samples,
                    "samples for the symmetrized-tensor check");
  check->add_option("--sufficient-samples", sufficient_samples,
                    "samples for the sufficient-condition check");
  check->add_option("--seed", seed, "sampling seed");
  check->add_option("--out", out_dir, "output directory");

  CLI::App* scan = app.add_subcommand(
      "threshold-scan", "Bisect the critical drift magnitude of a phi family");
  scan->add_option("--family", family_name, "randers | two-order | matsumoto")
      ->required();
  scan->add_option("--b-lo", b_lo, "bracket lower end (default per family)");
  scan->add_option("--b-hi", b_hi, "bracket upper end (default per family)");
  scan->add_option("--tol", tol, "bisection bracket width target");
  scan->add_option("--rows", rows, "table rows across the bracket");
  scan->add_option("--samples", scan_samples, "direction samples per check");
  scan->add_option("--seed", seed, "sampling seed");
  scan->add_option("--out", out_dir, "output directory");
  scan->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* solve = app.add_subcommand(
      "solve-plateau", "Minimize Finsler area over a disk-type surface");
  solve->add_option("--metric", metric_path, "metric spec file")->required();
  solve->add_option("--curve", curve_name,
                    "circle | ellipse | polygon | helix | samples file");
  solve->add_option("--rings", rings, "mesh refinement rings");
  solve->add_option("--quad-n", quad_n, "circle quadrature nodes");
  solve->add_option("--eps-schedule", eps_schedule,
                    "comma-separated Dirichlet weights")
      ->delimiter(',');
  solve->add_option("--tol", tol, "gradient infinity-norm tolerance");
  solve->add_option("--max-iters", max_iters, "iteration cap per stage");
  solve->add_flag("--no-closed-form", no_closed_form,
                  "always integrate (skip closed-form fast paths)");
  solve->add_option("--seed", seed, "recorded in the report");
  solve->add_option("--out", out_dir, "output directory");

  CLI::App* radon = app.add_subcommand(
      "radon-verify", "Verify transform identities and the differentiation rule");
  radon->add_option("--metric", metric_path,
                    "metric spec file (default: in-plane drift 0.3)");
  radon->add_option("--tol", tol, "derivative-rule residual tolerance");
  radon->add_option("--samples", radon_samples, "sample count per identity");
  radon->add_option("--quad-n", quad_n, "circle quadrature nodes");
  radon->add_option("--seed", seed, "sampling seed");
  radon->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (check->parsed()) {
    return RunCheckMetric(metric_path, samples, ga_samples, sufficient_samples,
                          seed, out_dir);
  }
  if (scan->parsed()) {
    return RunThresholdScan(family_name, b_lo, b_hi, tol < 0.0 ? 0.002 : tol,
                            rows, scan_samples, seed, out_dir, format);
  }
  if (solve->parsed()) {
    return RunSolvePlateau(metric_path, curve_name, rings, quad_n, eps_schedule,
                           tol < 0.0 ? 1e-6 : tol, max_iters, no_closed_form,
                           seed, out_dir);
  }
  if (radon->parsed()) {
    return RunRadonVerify(metric_path, tol < 0.0 ? 1e-5 : tol, radon_samples,
                          quad_n, seed, out_dir);
  }
  return kExitConfig;
}
