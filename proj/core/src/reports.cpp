#include "finsler/reports.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace finsler {

namespace {

using Json = nlohmann::ordered_json;

Json VecJson(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json Envelope(const ReportContext& ctx) {
  Json j;
  j["config_hash"] = HashToHex(HashConfigString(ctx.config_text));
  j["seed"] = ctx.seed;
  j["config"] = ctx.config_text;
  return j;
}

std::string FormatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

const char* StageEndName(StageEnd end) {
  switch (end) {
    case StageEnd::kGradTol: return "grad_tol";
    case StageEnd::kStagnation: return "stagnation";
    case StageEnd::kIterationCap: return "iteration_cap";
    case StageEnd::kLineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

Json GaDirectJson(const GaDirectReport& r) {
  Json j;
  j["holds"] = r.holds;
  j["min_eig"] = r.min_eig;
  j["argmin_y"] = VecJson(r.argmin_y);
  j["argmin_x"] = VecJson(r.argmin_x);
  j["sample_count"] = r.sample_count;
  j["refined"] = r.refined;
  j["note"] = r.note;
  return j;
}

Json SufficientJson(const SufficientConditionReport& r) {
  Json j;
  j["holds"] = r.holds;
  j["fs_finsler"] = r.fs_finsler;
  j["cond1_min_eig"] = r.cond1_min_eig;
  j["cond2_max_eig"] = r.cond2_max_eig;
  j["sample_count"] = r.sample_count;
  j["has_witness"] = r.has_witness;
  j["witness_x"] = VecJson(r.witness_x);
  j["witness_y"] = VecJson(r.witness_y);
  j["witness_w"] = VecJson(r.witness_w);
  return j;
}

Json BoundsJson(const GrowthBounds& b) {
  Json j;
  j["c1"] = b.c1;
  j["c2"] = b.c2;
  j["m1"] = b.m1;
  j["m2"] = b.m2;
  j["sample_count"] = b.sample_count;
  j["sandwich_ok"] = b.sandwich_ok;
  j["worst_lower_margin"] = b.worst_lower_margin;
  j["worst_upper_margin"] = b.worst_upper_margin;
  return j;
}

}  // namespace

std::string FinslerReportJson(const FinslerCheckReport& report,
                              const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "finsler_check";
  j["sample_count"] = report.sample_count;
  j["min_value"] = report.min_value;
  j["argmin_value"] = VecJson(report.argmin_value);
  j["max_homogeneity_residual"] = report.max_homogeneity_residual;
  j["min_eigenvalue"] = report.min_eigenvalue;
  j["argmin_eigenvalue"] = VecJson(report.argmin_eigenvalue);
  j["verdict"] = report.verdict;
  j["error"] = report.error;
  return j.dump(2) + "\n";
}

std::string GaReportJson(const GAReport& report, const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "ga_check";
  j["direct"] = GaDirectJson(report.direct);
  j["sufficient"] = SufficientJson(report.sufficient);
  return j.dump(2) + "\n";
}

std::string EllipticityReportJson(const EllipticityReport& report,
                                  const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "ellipticity_scan";
  j["lambda_min"] = report.lambda_min;
  j["argmin_z"] = VecJson(report.argmin_z);
  j["argmin_x"] = VecJson(report.argmin_x);
  j["sample_count"] = report.sample_count;
  j["tolerance"] = report.tolerance;
  j["refined"] = report.refined;
  j["verdict"] = report.verdict;
  return j.dump(2) + "\n";
}

std::string DominanceReportJson(const DominanceReport& report,
                                const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "dominance";
  j["delta"] = report.delta;
  j["pass_corollary"] = report.pass_corollary;
  j["k0"] = report.k0;
  j["m1_star"] = report.m1_star;
  j["m2_star"] = report.m2_star;
  j["lambda_star"] = report.lambda_star;
  j["delta0"] = report.delta0;
  j["delta0_sup"] = report.delta0_sup;
  j["delta0_pass"] = report.delta0_pass;
  j["sample_count"] = report.sample_count;
  return j.dump(2) + "\n";
}

std::string ThresholdResultJson(const ThresholdResult& result,
                                const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "threshold_scan";
  j["family"] = result.family;
  j["critical_b"] = result.critical_b;
  j["bracket_lo"] = result.bracket_lo;
  j["bracket_hi"] = result.bracket_hi;
  j["tolerance"] = result.tolerance;
  j["monotone"] = result.monotone;
  Json rows = Json::array();
  for (const ThresholdRow& r : result.table) {
    Json row;
    row["b"] = r.b;
    row["finsler"] = r.finsler;
    row["ga_direct"] = r.ga_direct;
    row["sufficient"] = r.sufficient;
    row["finsler_margin"] = r.finsler_margin;
    row["ga_margin"] = r.ga_margin;
    row["sufficient_margin"] = r.sufficient_margin;
    row["verdict"] = r.verdict;
    rows.push_back(row);
  }
  j["table"] = rows;
  return j.dump(2) + "\n";
}

std::string SolveReportJson(const SolveResult& result, const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "plateau_solve";
  j["rings"] = result.mesh.rings;
  j["vertex_count"] = result.mesh.VertexCount();
  j["triangle_count"] = result.mesh.TriangleCount();
  j["boundary_count"] = result.mesh.BoundaryCount();
  j["finsler_area"] = result.finsler_area;
  j["euclidean_area"] = result.euclidean_area;
  j["dirichlet_energy"] = result.dirichlet_energy;
  j["conformality_defect"] = result.conformality_defect;
  j["finsler_boundary_length"] = result.finsler_boundary_length;
  j["min_triangle_normal"] = result.min_triangle_normal;
  j["bounds"] = BoundsJson(result.bounds);
  j["sandwich_ok"] = result.sandwich_ok;
  j["isoperimetric_bound"] = result.isoperimetric_bound;
  j["isoperimetric_ok"] = result.isoperimetric_ok;
  j["area_monotone_across_stages"] = result.area_monotone_across_stages;
  j["converged"] = result.converged;
  j["degenerate"] = result.degenerate;
  j["degenerate_triangle"] = result.degenerate_triangle;
  Json stages = Json::array();
  for (const StageTrace& s : result.stages) {
    Json row;
    row["eps"] = s.eps;
    row["iterations"] = s.iterations;
    row["energy"] = s.energy;
    row["finsler_area"] = s.finsler_area;
    row["euclidean_area"] = s.euclidean_area;
    row["grad_inf_norm"] = s.grad_inf_norm;
    row["end"] = StageEndName(s.end);
    stages.push_back(row);
  }
  j["stages"] = stages;
  Json tvals = Json::array();
  for (double t : result.boundary.t) tvals.push_back(t);
  j["boundary_t"] = tvals;
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

std::string RadonVerifyReportJson(const RadonVerifyReport& report,
                                  const ReportContext& ctx) {
  Json j = Envelope(ctx);
  j["report"] = "radon_verify";
  j["inverse_square_max_error"] = report.inverse_square_max_error;
  j["reciprocity_max_error"] = report.reciprocity_max_error;
  j["diff_rule_max_residual"] = report.diff_rule_max_residual;
  j["sample_count"] = report.sample_count;
  j["quad_n"] = report.quad_n;
  j["tolerance"] = report.tolerance;
  j["verdict"] = report.verdict;
  return j.dump(2) + "\n";
}

std::string ThresholdResultCsv(const ThresholdResult& result,
                               const ReportContext& ctx) {
  std::string out;
  out += "# config_hash=" + HashToHex(HashConfigString(ctx.config_text)) +
         " seed=" + std::to_string(ctx.seed) + "\n";
  out += "# family=" + result.family +
         " critical_b=" + FormatDouble(result.critical_b) +
         " bracket_lo=" + FormatDouble(result.bracket_lo) +
         " bracket_hi=" + FormatDouble(result.bracket_hi) +
         " tolerance=" + FormatDouble(result.tolerance) +
         " monotone=" + (result.monotone ? std::string("1") : std::string("0")) +
         "\n";
  out +=
      "family,b,finsler,ga_direct,sufficient,finsler_margin,ga_margin,"
      "sufficient_margin\n";
  for (const ThresholdRow& r : result.table) {
    out += result.family;
    out += ',';
    out += FormatDouble(r.b);
    out += ',';
    out += r.finsler ? '1' : '0';
    out += ',';
    out += r.ga_direct ? '1' : '0';
    out += ',';
    out += r.sufficient ? '1' : '0';
    out += ',';
    out += FormatDouble(r.finsler_margin);
    out += ',';
    out += FormatDouble(r.ga_margin);
    out += ',';
    out += FormatDouble(r.sufficient_margin);
    out += '\n';
  }
  return out;
}

bool WriteTextFile(const std::string& path, const std::string& content,
                   std::string* error) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    if (error) *error = "cannot open '" + path + "' for writing";
    return false;
  }
  out << content;
  if (!out.good()) {
    if (error) *error = "write to '" + path + "' failed";
    return false;
  }
  return true;
}

}  // namespace finsler
