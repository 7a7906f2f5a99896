#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "finsler/cartan.h"
#include "finsler/curve.h"
#include "finsler/mesh.h"
#include "finsler/metric.h"
#include "finsler/plateau.h"
#include "finsler/sampling.h"

using namespace finsler;

namespace {

MetricSpec Euclid() {
  MetricSpec s;
  s.family = MetricFamily::kEuclidean;
  return s;
}

MetricSpec Randers(const Vec3& b) {
  MetricSpec s;
  s.family = MetricFamily::kRanders;
  s.b = b;
  return s;
}

CartanIntegrand Make(const MetricSpec& spec, int quad_n, bool closed_form) {
  CartanIntegrand ci;
  std::string err;
  REQUIRE_MESSAGE(MakeCartanIntegrand(spec, quad_n, &ci, &err, closed_form), err);
  return ci;
}

BoundaryCurve Helix() {
  BoundaryCurve curve;
  std::string err;
  REQUIRE_MESSAGE(MakeHelicalArcCurve(1.0, 0.4, &curve, &err), err);
  return curve;
}

}  // namespace

TEST_CASE("initial surface for a flat circle is the flat disk") {
  DiskMesh mesh;
  BoundaryParameterization params;
  std::string err;
  REQUIRE(GenerateDiskMesh(8, &mesh, &err));
  REQUIRE_MESSAGE(InitialSurface(MakeCircleCurve(), &mesh, &params, &err), err);

  int nb = mesh.BoundaryCount();
  REQUIRE(static_cast<int>(params.t.size()) == nb);
  REQUIRE(params.anchor_slots == std::vector<int>({0, nb / 3, 2 * nb / 3}));
  CHECK(params.t[0] == 0.0);
  CHECK(params.t[static_cast<std::size_t>(nb / 3)] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  for (int p = 0; p + 1 < nb; ++p) {
    CHECK(params.t[static_cast<std::size_t>(p)] <
          params.t[static_cast<std::size_t>(p + 1)]);
  }

  // The harmonic fill of a flat circular boundary is the flat identity disk.
  for (std::size_t i = 0; i < mesh.x.size(); ++i) {
    CHECK(std::abs(mesh.x[i].z()) <= 1e-9);
    CHECK((mesh.x[i] - Vec3(mesh.uv[i].x(), mesh.uv[i].y(), 0.0)).norm() <= 1e-8);
  }
  CHECK(ConformalityDefect(mesh) <= 1e-6);
}

TEST_CASE("initial surface for an ellipse stays planar") {
  DiskMesh mesh;
  BoundaryParameterization params;
  std::string err;
  REQUIRE(GenerateDiskMesh(6, &mesh, &err));
  REQUIRE(InitialSurface(MakeEllipseCurve(), &mesh, &params, &err));
  for (const Vec3& x : mesh.x) CHECK(std::abs(x.z()) <= 1e-9);
}

TEST_CASE("dof packing round trips and boundary follows the curve") {
  CartanIntegrand ci = Make(Randers(Vec3(0.2, 0.1, 0.15)), 64, false);
  BoundaryCurve curve = Helix();
  PlateauProblem problem;
  std::string err;
  REQUIRE_MESSAGE(PlateauProblem::Create(ci, curve, 3, 0.05, &problem, &err), err);

  int interior = problem.mesh().VertexCount() - problem.mesh().BoundaryCount();
  int sliding = problem.mesh().BoundaryCount() - 3;
  CHECK(problem.DofCount() == 3 * interior + sliding);

  std::vector<double> dof;
  problem.PackDof(&dof);
  REQUIRE(static_cast<int>(dof.size()) == problem.DofCount());
  problem.ApplyDof(dof);
  std::vector<double> again;
  problem.PackDof(&again);
  CHECK(dof == again);

  // After applying a perturbed dof, boundary vertices sit exactly on gamma(t).
  SplitMix64 rng(11);
  for (double& d : dof) d += 0.004 * rng.NextInRange(-1, 1);
  problem.ProjectBoundaryDof(&dof);
  problem.ApplyDof(dof);
  const DiskMesh& mesh = problem.mesh();
  const auto& t = problem.boundary().t;
  for (int p = 0; p < mesh.BoundaryCount(); ++p) {
    Vec3 on_curve = curve.position(t[static_cast<std::size_t>(p)]);
    Vec3 at = mesh.x[static_cast<std::size_t>(mesh.boundary[static_cast<std::size_t>(p)])];
    CHECK((at - on_curve).norm() <= 1e-12);
  }
}

TEST_CASE("boundary projection restores per-segment order") {
  CartanIntegrand ci = Make(Euclid(), 64, true);
  PlateauProblem problem;
  std::string err;
  REQUIRE(PlateauProblem::Create(ci, MakeCircleCurve(), 2, 0.1, &problem, &err));
  // rings = 2: 12 boundary slots, anchors at 0/4/8, sliding 1,2,3,5,6,7,9,10,11.
  std::vector<double> dof;
  problem.PackDof(&dof);
  int interior3 = 3 * (problem.mesh().VertexCount() - problem.mesh().BoundaryCount());
  REQUIRE(static_cast<int>(dof.size()) == interior3 + 9);

  // Scramble the first segment and push one value outside its segment.
  dof[static_cast<std::size_t>(interior3 + 0)] = 0.30;   // slot 1
  dof[static_cast<std::size_t>(interior3 + 1)] = 0.10;   // slot 2
  dof[static_cast<std::size_t>(interior3 + 2)] = 0.20;   // slot 3
  dof[static_cast<std::size_t>(interior3 + 3)] = 0.95;   // slot 5, beyond 2/3
  problem.ProjectBoundaryDof(&dof);
  CHECK(dof[static_cast<std::size_t>(interior3 + 0)] == doctest::Approx(0.10));
  CHECK(dof[static_cast<std::size_t>(interior3 + 1)] == doctest::Approx(0.20));
  CHECK(dof[static_cast<std::size_t>(interior3 + 2)] == doctest::Approx(0.30));
  CHECK(dof[static_cast<std::size_t>(interior3 + 3)] <= 2.0 / 3);
  CHECK(dof[static_cast<std::size_t>(interior3 + 3)] >= 1.0 / 3);
  // Projection is idempotent.
  std::vector<double> twice = dof;
  problem.ProjectBoundaryDof(&twice);
  CHECK(twice == dof);
}

TEST_CASE("energy gradient matches central finite differences") {
  CartanIntegrand ci = Make(Randers(Vec3(0.2, 0.1, 0.15)), 64, false);
  PlateauProblem problem;
  std::string err;
  REQUIRE(PlateauProblem::Create(ci, Helix(), 3, 0.05, &problem, &err));

  std::vector<double> dof;
  problem.PackDof(&dof);
  SplitMix64 rng(77);
  for (double& d : dof) d += 0.005 * rng.NextInRange(-1, 1);
  problem.ProjectBoundaryDof(&dof);

  double energy;
  std::vector<double> grad;
  bool valid;
  REQUIRE(problem.EnergyAndGradient(dof, &energy, &grad, &valid, &err));
  REQUIRE(valid);
  REQUIRE(grad.size() == dof.size());

  double worst = 0.0;
  for (std::size_t d = 0; d < dof.size(); ++d) {
    double h = 1e-6 * std::max(1.0, std::abs(dof[d]));
    auto up = dof;
    up[d] += h;
    auto dn = dof;
    dn[d] -= h;
    double eu, ed;
    bool vu, vd;
    REQUIRE(problem.Energy(up, &eu, &vu, &err));
    REQUIRE(problem.Energy(dn, &ed, &vd, &err));
    REQUIRE(vu);
    REQUIRE(vd);
    double fd = (eu - ed) / (2 * h);
    double rel = std::abs(grad[d] - fd) / std::max(1.0, std::abs(fd));
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("energy flags collapsed triangles instead of erroring") {
  CartanIntegrand ci = Make(Euclid(), 64, true);
  PlateauProblem problem;
  std::string err;
  REQUIRE(PlateauProblem::Create(ci, MakeCircleCurve(), 2, 0.1, &problem, &err));
  std::vector<double> dof;
  problem.PackDof(&dof);
  int interior3 = 3 * (problem.mesh().VertexCount() - problem.mesh().BoundaryCount());
  for (int d = 0; d < interior3; ++d) dof[static_cast<std::size_t>(d)] = 0.0;
  double energy;
  bool valid;
  REQUIRE(problem.Energy(dof, &energy, &valid, &err));
  CHECK_FALSE(valid);
  CHECK(energy == std::numeric_limits<double>::infinity());
}

TEST_CASE("flat circle solve lands on the disk") {
  SolveConfig config;
  config.rings = 8;
  config.quad_n = 128;
  SolveResult result;
  std::string err;
  REQUIRE_MESSAGE(SolvePlateau(Euclid(), MakeCircleCurve(), config, &result, &err), err);
  CHECK(result.converged);
  CHECK_FALSE(result.degenerate);
  CHECK(result.warnings.empty());
  CHECK(result.finsler_area == doctest::Approx(M_PI).epsilon(0.01));
  CHECK(result.conformality_defect <= 1e-3);
  CHECK(result.finsler_boundary_length == doctest::Approx(2 * M_PI).epsilon(1e-6));
  CHECK(result.sandwich_ok);
  CHECK(result.isoperimetric_ok);
  CHECK(result.area_monotone_across_stages);
  CHECK(result.min_triangle_normal > 0.0);
  CHECK(result.stages.size() == config.eps_schedule.size());

  // Flat-limit consistency of area and boundary length.
  double l2 = result.finsler_boundary_length * result.finsler_boundary_length;
  CHECK(std::abs(4 * M_PI * result.finsler_area - l2) / l2 <= 0.02);

  // The discretization error halves twice when rings double.
  SolveConfig fine = config;
  fine.rings = 16;
  SolveResult result16;
  REQUIRE(SolvePlateau(Euclid(), MakeCircleCurve(), fine, &result16, &err));
  double err8 = std::abs(result.finsler_area - M_PI);
  double err16 = std::abs(result16.finsler_area - M_PI);
  CHECK(err8 / err16 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("randers drift shrinks the disk area by the closed-form factor") {
  SolveConfig config;
  config.rings = 16;
  SolveResult result;
  std::string err;
  REQUIRE(SolvePlateau(Randers(Vec3(0.3, 0, 0)), MakeCircleCurve(), config,
                       &result, &err));
  CHECK(result.converged);
  double target = M_PI * std::pow(0.91, 1.5);
  CHECK(std::abs(result.finsler_area - target) / target <= 0.015);
  CHECK(result.finsler_area >=
        result.bounds.m1 * result.euclidean_area - 1e-9);
  CHECK(result.finsler_area <=
        result.bounds.m2 * result.euclidean_area + 1e-9);
  CHECK(result.sandwich_ok);
  CHECK(result.isoperimetric_ok);
  CHECK(result.finsler_boundary_length == doctest::Approx(2 * M_PI).epsilon(1e-6));
}

TEST_CASE("descent iterates decrease energy and respect the growth sandwich") {
  SolveConfig config;
  config.rings = 4;
  config.quad_n = 64;
  config.eps_schedule = {0.5};
  config.max_iterations_per_stage = 40;

  std::vector<SolveConfig::IterationInfo> trace;
  config.observer = [&trace](const SolveConfig::IterationInfo& info) {
    trace.push_back(info);
  };

  MetricSpec metric = Randers(Vec3(0.2, 0.0, 0.1));
  SolveResult result;
  std::string err;
  REQUIRE_MESSAGE(SolvePlateau(metric, Helix(), config, &result, &err), err);
  CHECK_FALSE(result.degenerate);
  REQUIRE(trace.size() >= 5);

  GrowthBounds bounds;
  CartanIntegrand ci = Make(metric, 64, false);
  REQUIRE(ComputeGrowthBounds(ci, 500, &bounds, &err));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& info = trace[k];
    CHECK(std::isfinite(info.energy));
    CHECK(info.step > 0.0);
    CHECK(info.finsler_area >= bounds.m1 * info.euclidean_area - 1e-9);
    CHECK(info.finsler_area <= bounds.m2 * info.euclidean_area + 1e-9);
    if (k > 0) {
      CHECK(info.energy <= trace[k - 1].energy + 1e-12);
    }
  }
}

TEST_CASE("helical boundary with a mild continuation schedule stays healthy") {
  SolveConfig config;
  config.rings = 3;
  config.quad_n = 64;
  config.eps_schedule = {0.5, 0.2};
  config.max_iterations_per_stage = 60;
  SolveResult result;
  std::string err;
  REQUIRE_MESSAGE(SolvePlateau(Randers(Vec3(0.2, 0.1, 0.15)), Helix(), config,
                               &result, &err),
                  err);
  CHECK_FALSE(result.degenerate);
  CHECK(result.stages.size() == 2);
  CHECK(result.min_triangle_normal > 0.0);
  CHECK(result.warnings.empty());
  // The saddle-like span is genuinely non-flat.
  double planar_spread = 0.0;
  for (const Vec3& x : result.mesh.x) {
    planar_spread = std::max(planar_spread, std::abs(x.z()));
  }
  CHECK(planar_spread > 0.05);
}

TEST_CASE("solver rejects unusable configurations") {
  SolveResult result;
  std::string err;
  SolveConfig config;
  config.rings = 1;
  CHECK_FALSE(SolvePlateau(Euclid(), MakeCircleCurve(), config, &result, &err));
  CHECK(err.find("requires") != std::string::npos);

  config = SolveConfig{};
  config.eps_schedule.clear();
  err.clear();
  CHECK_FALSE(SolvePlateau(Euclid(), MakeCircleCurve(), config, &result, &err));
  CHECK(err.find("must") != std::string::npos);

  config = SolveConfig{};
  config.grad_tol = -1.0;
  err.clear();
  CHECK_FALSE(SolvePlateau(Euclid(), MakeCircleCurve(), config, &result, &err));
  CHECK_FALSE(err.empty());
}

TEST_CASE("unhealthy metrics produce warnings but still run") {
  SolveConfig config;
  config.rings = 2;
  config.quad_n = 64;
  config.eps_schedule = {0.5};
  config.max_iterations_per_stage = 5;
  SolveResult result;
  std::string err;
  // |b| = 0.98 < 1 keeps the integrand finite but fails the convexity probes.
  REQUIRE(SolvePlateau(Randers(Vec3(0.98, 0, 0)), MakeCircleCurve(), config,
                       &result, &err));
  CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("isoperimetric bound check") {
  GrowthBounds unit;
  unit.c1 = unit.c2 = unit.m1 = unit.m2 = 1.0;
  bool ok;
  double bound;
  std::string err;
  REQUIRE(IsoperimetricCheck(3.0, 2 * M_PI, unit, &ok, &bound, &err));
  CHECK(ok);
  CHECK(bound == doctest::Approx(M_PI).epsilon(1e-12));

  REQUIRE(IsoperimetricCheck(20.0, 2 * M_PI, unit, &ok, &bound, &err));
  CHECK_FALSE(ok);

  GrowthBounds bad;
  CHECK_FALSE(IsoperimetricCheck(1.0, 1.0, bad, &ok, &bound, &err));
}

TEST_CASE("obj export lists every vertex and face") {
  DiskMesh mesh;
  std::string err;
  REQUIRE(GenerateDiskMesh(1, &mesh, &err));
  const char* path = "plateau_test_surface.obj";
  REQUIRE_MESSAGE(WriteObjFile(mesh, path, &err), err);

  std::ifstream in(path);
  REQUIRE(in.good());
  int vertices = 0, faces = 0;
  std::string line;
  bool face_indices_ok = true;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++vertices;
    if (line.rfind("f ", 0) == 0) {
      ++faces;
      int a = 0, b = 0, c = 0;
      if (std::sscanf(line.c_str(), "f %d %d %d", &a, &b, &c) != 3 ||
          a < 1 || b < 1 || c < 1 || a > mesh.VertexCount() ||
          b > mesh.VertexCount() || c > mesh.VertexCount()) {
        face_indices_ok = false;
      }
    }
  }
  in.close();
  CHECK(vertices == mesh.VertexCount());
  CHECK(faces == mesh.TriangleCount());
  CHECK(face_indices_ok);
  std::remove(path);
}
