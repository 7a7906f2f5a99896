#pragma once

#include "finsler/cartan.h"
#include "finsler/curve.h"
#include "finsler/mesh.h"
#include "finsler/types.h"

#include <functional>
#include <string>
#include <vector>

namespace finsler {

// Boundary parameters: boundary-loop vertex p carries a curve parameter
// t_p with three anchors pinned at t = 0, 1/3, 2/3 (loop positions 0, M/3,
// 2M/3); the remaining parameters slide along the curve and are kept ordered
// by a per-segment sorted clamp.
struct BoundaryParameterization {
  std::vector<double> t;          // one per boundary-loop position
  std::vector<int> anchor_slots;  // loop positions of the three anchors
};

// Discrete Plateau energy  E(dof) = Finsler area + eps * Dirichlet energy
// over interior vertex positions and sliding boundary parameters.  The
// Dirichlet weights come from the fixed parametric mesh, so the term is an
// exact convex quadratic; the area term uses the one-point centroid rule per
// triangle.
class PlateauProblem {
 public:
  // The problem keeps its own working mesh (initialized by InitialSurface)
  // plus the boundary parameterization.
  static bool Create(const CartanIntegrand& ci, const BoundaryCurve& curve,
                     int rings, double eps, PlateauProblem* out,
                     std::string* error, int harmonic_sweeps = 200,
                     double min_triangle_area = 1e-12);

  int DofCount() const;
  void PackDof(std::vector<double>* dof) const;
  // Writes positions/parameters for this dof vector into the working mesh.
  void ApplyDof(const std::vector<double>& dof);
  // Per-segment sorted clamp of the sliding boundary parameters (in place).
  void ProjectBoundaryDof(std::vector<double>* dof) const;

  // Energy at a dof vector; *valid is false (not an error) when some spatial
  // triangle area falls below the degeneration threshold.
  bool Energy(const std::vector<double>& dof, double* energy, bool* valid,
              std::string* error);
  // Energy plus the analytic gradient (area term differentiated through the
  // triangle normals; Dirichlet exact; boundary dof by the chain rule through
  // gamma').
  bool EnergyAndGradient(const std::vector<double>& dof, double* energy,
                         std::vector<double>* grad, bool* valid,
                         std::string* error);

  bool FinslerArea(double* area, std::string* error);
  double EuclideanArea() const { return DiscreteEuclideanArea(mesh_); }
  double Dirichlet() const { return DirichletEnergy(dirichlet_, mesh_.x); }

  const DiskMesh& mesh() const { return mesh_; }
  const BoundaryParameterization& boundary() const { return params_; }
  void set_eps(double eps) { eps_ = eps; }
  double eps() const { return eps_; }

 private:
  CartanIntegrand ci_;
  BoundaryCurve curve_;
  DiskMesh mesh_;
  DirichletOperator dirichlet_;
  BoundaryParameterization params_;
  std::vector<int> interior_;         // interior vertex ids
  std::vector<int> sliding_;          // boundary-loop positions free to move
  double eps_ = 0.0;
  double min_triangle_area_ = 1e-12;
};

// Pins the boundary vertices to gamma at equally spaced parameters (anchors
// at 0, 1/3, 2/3) and fills the interior with the discrete-harmonic
// interpolant (cotangent-weight Gauss-Seidel sweeps, stopping early when the
// largest vertex move drops below 1e-10).  Fails when two anchors collide in
// space.
bool InitialSurface(const BoundaryCurve& curve, DiskMesh* mesh,
                    BoundaryParameterization* params, std::string* error,
                    int sweeps = 200);

struct SolveConfig {
  int rings = 16;
  int quad_n = 256;
  bool use_closed_form = true;
  std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4};
  double grad_tol = 1e-6;            // infinity norm of the full gradient
  int max_iterations_per_stage = 400;
  double armijo_c = 1e-4;            // sufficient-decrease constant
  double initial_step = 1.0;
  double min_triangle_area = 1e-12;  // step rejection threshold
  int harmonic_sweeps = 200;
  int growth_samples = 500;
  int length_quad_n = 256;
  std::uint64_t seed = 0;            // recorded in reports (solver is deterministic)

  // Optional per-accepted-iterate observer (invariant tests).
  struct IterationInfo {
    int stage = 0;
    int iteration = 0;
    double energy = 0.0;
    double finsler_area = 0.0;
    double euclidean_area = 0.0;
    double grad_inf_norm = 0.0;
    double step = 0.0;
  };
  std::function<void(const IterationInfo&)> observer;
};

enum class StageEnd { kGradTol, kStagnation, kIterationCap, kLineSearchFailure };

struct StageTrace {
  double eps = 0.0;
  int iterations = 0;
  double energy = 0.0;
  double finsler_area = 0.0;
  double euclidean_area = 0.0;
  double grad_inf_norm = 0.0;
  StageEnd end = StageEnd::kIterationCap;
};

struct SolveResult {
  DiskMesh mesh;
  BoundaryParameterization boundary;
  double finsler_area = 0.0;
  double euclidean_area = 0.0;
  double dirichlet_energy = 0.0;
  double conformality_defect = 0.0;
  double finsler_boundary_length = 0.0;
  double min_triangle_normal = 0.0;
  GrowthBounds bounds;
  bool sandwich_ok = false;       // m1*euclidean <= area <= m2*euclidean
  double isoperimetric_bound = 0.0;  // (c2^2 / (4 pi c1^2)) L^2
  bool isoperimetric_ok = false;
  bool area_monotone_across_stages = false;
  bool converged = false;
  bool degenerate = false;
  int degenerate_triangle = -1;
  std::vector<StageTrace> stages;
  std::vector<std::string> warnings;
};

// Gradient descent with Armijo backtracking over the eps-continuation
// schedule.  Metric health problems (failing positivity or symmetrized-tensor
// checks on a coarse sample) are reported as warnings, not failures; a
// degenerate mesh aborts with the offending triangle id.
bool SolvePlateau(const MetricSpec& metric, const BoundaryCurve& curve,
                  const SolveConfig& config, SolveResult* out,
                  std::string* error);

// area <= (c2^2 / (4 pi c1^2)) * length^2, the growth-bound transfer of the
// euclidean isoperimetric inequality; writes the right-hand side to *bound
// and the verdict to *ok.  Fails (false) only when the bounds are unusable.
bool IsoperimetricCheck(double area, double length, const GrowthBounds& bounds,
                        bool* ok, double* bound, std::string* error);

// ASCII OBJ export (vertices + faces).
bool WriteObjFile(const DiskMesh& mesh, const std::string& path,
                  std::string* error);

}  // namespace finsler
