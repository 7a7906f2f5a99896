#include "finsler/plateau.h"

#include "finsler/gacheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace finsler {

namespace {

constexpr double kAnchorSeparationMin = 1e-12;
constexpr double kSegmentClampMargin = 1e-9;

}  // namespace

bool InitialSurface(const BoundaryCurve& curve, DiskMesh* mesh,
                    BoundaryParameterization* params, std::string* error,
                    int sweeps) {
  if (!curve.position || !curve.derivative) {
    if (error) *error = "boundary curve is missing evaluators";
    return false;
  }
  int nb = mesh->BoundaryCount();
  if (nb < 3 || nb % 3 != 0) {
    if (error) {
      *error = "boundary loop size " + std::to_string(nb) +
               " does not admit three equally spaced anchors";
    }
    return false;
  }
  params->t.resize(static_cast<std::size_t>(nb));
  params->anchor_slots = {0, nb / 3, 2 * nb / 3};
  for (int p = 0; p < nb; ++p) {
    params->t[static_cast<std::size_t>(p)] = static_cast<double>(p) / nb;
  }
  // Anchor collision means the three-point normalization cannot pin the
  // parameterization.
  for (int a = 0; a < 3; ++a) {
    Vec3 pa = curve.position(curve.anchors[static_cast<std::size_t>(a)]);
    Vec3 pb = curve.position(curve.anchors[static_cast<std::size_t>((a + 1) % 3)]);
    if ((pa - pb).norm() < kAnchorSeparationMin) {
      if (error) {
        *error = "boundary anchors " + std::to_string(a) + " and " +
                 std::to_string((a + 1) % 3) + " collide in space";
      }
      return false;
    }
  }
  for (int p = 0; p < nb; ++p) {
    int v = mesh->boundary[static_cast<std::size_t>(p)];
    mesh->x[static_cast<std::size_t>(v)] =
        curve.position(params->t[static_cast<std::size_t>(p)]);
  }
  // Interior: discrete-harmonic interpolation by cotangent-weight
  // Gauss-Seidel sweeps, started from the flat parametric lift.
  std::vector<bool> on_boundary(static_cast<std::size_t>(mesh->VertexCount()), false);
  for (int v : mesh->boundary) on_boundary[static_cast<std::size_t>(v)] = true;
  for (int v = 0; v < mesh->VertexCount(); ++v) {
    if (!on_boundary[static_cast<std::size_t>(v)]) {
      mesh->x[static_cast<std::size_t>(v)] =
          Vec3(mesh->uv[static_cast<std::size_t>(v)].x(),
               mesh->uv[static_cast<std::size_t>(v)].y(), 0.0);
    }
  }
  DirichletOperator op = MakeDirichletOperator(*mesh);
  std::vector<std::vector<std::pair<int, double>>> nbrs(
      static_cast<std::size_t>(mesh->VertexCount()));
  for (const auto& e : op.edges) {
    nbrs[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.w);
    nbrs[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.w);
  }
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double max_move = 0.0;
    for (int v = 0; v < mesh->VertexCount(); ++v) {
      if (on_boundary[static_cast<std::size_t>(v)]) continue;
      Vec3 acc = Vec3::Zero();
      double wsum = 0.0;
      for (const auto& [j, w] : nbrs[static_cast<std::size_t>(v)]) {
        acc += w * mesh->x[static_cast<std::size_t>(j)];
        wsum += w;
      }
      if (wsum <= 0.0) continue;
      Vec3 next = acc / wsum;
      max_move = std::max(max_move,
                          (next - mesh->x[static_cast<std::size_t>(v)]).norm());
      mesh->x[static_cast<std::size_t>(v)] = next;
    }
    if (max_move < 1e-10) break;
  }
  return true;
}

bool PlateauProblem::Create(const CartanIntegrand& ci, const BoundaryCurve& curve,
                            int rings, double eps, PlateauProblem* out,
                            std::string* error, int harmonic_sweeps,
                            double min_triangle_area) {
  if (rings < 2) {
    if (error) *error = "the solver requires rings >= 2";
    return false;
  }
  out->ci_ = ci;
  out->curve_ = curve;
  out->eps_ = eps;
  out->min_triangle_area_ = min_triangle_area;
  if (!GenerateDiskMesh(rings, &out->mesh_, error)) return false;
  if (!InitialSurface(curve, &out->mesh_, &out->params_, error, harmonic_sweeps)) {
    return false;
  }
  out->dirichlet_ = MakeDirichletOperator(out->mesh_);
  std::vector<bool> on_boundary(static_cast<std::size_t>(out->mesh_.VertexCount()),
                                false);
  for (int v : out->mesh_.boundary) on_boundary[static_cast<std::size_t>(v)] = true;
  out->interior_.clear();
  for (int v = 0; v < out->mesh_.VertexCount(); ++v) {
    if (!on_boundary[static_cast<std::size_t>(v)]) out->interior_.push_back(v);
  }
  out->sliding_.clear();
  for (int p = 0; p < out->mesh_.BoundaryCount(); ++p) {
    if (p != out->params_.anchor_slots[0] && p != out->params_.anchor_slots[1] &&
        p != out->params_.anchor_slots[2]) {
      out->sliding_.push_back(p);
    }
  }
  return true;
}

int PlateauProblem::DofCount() const {
  return 3 * static_cast<int>(interior_.size()) +
         static_cast<int>(sliding_.size());
}

void PlateauProblem::PackDof(std::vector<double>* dof) const {
  dof->clear();
  dof->reserve(static_cast<std::size_t>(DofCount()));
  for (int v : interior_) {
    const Vec3& x = mesh_.x[static_cast<std::size_t>(v)];
    dof->push_back(x[0]);
    dof->push_back(x[1]);
    dof->push_back(x[2]);
  }
  for (int p : sliding_) dof->push_back(params_.t[static_cast<std::size_t>(p)]);
}

void PlateauProblem::ApplyDof(const std::vector<double>& dof) {
  std::size_t k = 0;
  for (int v : interior_) {
    mesh_.x[static_cast<std::size_t>(v)] =
        Vec3(dof[k], dof[k + 1], dof[k + 2]);
    k += 3;
  }
  for (int p : sliding_) params_.t[static_cast<std::size_t>(p)] = dof[k++];
  for (int p = 0; p < mesh_.BoundaryCount(); ++p) {
    int v = mesh_.boundary[static_cast<std::size_t>(p)];
    mesh_.x[static_cast<std::size_t>(v)] =
        curve_.position(params_.t[static_cast<std::size_t>(p)]);
  }
}

void PlateauProblem::ProjectBoundaryDof(std::vector<double>* dof) const {
  std::size_t base = 3 * interior_.size();
  // The sliding slots are stored in loop order, so each anchor segment is a
  // contiguous run; sort the run and clamp it into the open segment.
  std::size_t idx = 0;
  for (int seg = 0; seg < 3; ++seg) {
    int lo_slot = params_.anchor_slots[static_cast<std::size_t>(seg)];
    int hi_slot = seg == 2 ? mesh_.BoundaryCount()
                           : params_.anchor_slots[static_cast<std::size_t>(seg + 1)];
    double t_lo = static_cast<double>(seg) / 3.0;
    double t_hi = static_cast<double>(seg + 1) / 3.0;
    std::size_t count = static_cast<std::size_t>(hi_slot - lo_slot - 1);
    auto begin = dof->begin() + static_cast<std::ptrdiff_t>(base + idx);
    auto end = begin + static_cast<std::ptrdiff_t>(count);
    std::sort(begin, end);
    for (auto it = begin; it != end; ++it) {
      *it = std::clamp(*it, t_lo + kSegmentClampMargin, t_hi - kSegmentClampMargin);
    }
    idx += count;
  }
}

bool PlateauProblem::FinslerArea(double* area, std::string* error) {
  return DiscreteFinslerArea(ci_, mesh_, area, error);
}

bool PlateauProblem::Energy(const std::vector<double>& dof, double* energy,
                            bool* valid, std::string* error) {
  ApplyDof(dof);
  *valid = true;
  KahanSum area;
  for (int t = 0; t < mesh_.TriangleCount(); ++t) {
    const auto& tri = mesh_.tris[static_cast<std::size_t>(t)];
    const Vec3& x0 = mesh_.x[static_cast<std::size_t>(tri[0])];
    const Vec3& x1 = mesh_.x[static_cast<std::size_t>(tri[1])];
    const Vec3& x2 = mesh_.x[static_cast<std::size_t>(tri[2])];
    Vec3 n = (x1 - x0).cross(x2 - x0);
    if (0.5 * n.norm() < min_triangle_area_) {
      *valid = false;
      *energy = std::numeric_limits<double>::infinity();
      return true;
    }
    Vec3 centroid = (x0 + x1 + x2) / 3.0;
    double a;
    std::string err;
    if (!AreaIntegrand(ci_, centroid, n, &a, &err)) {
      if (error) *error = "triangle " + std::to_string(t) + ": " + err;
      return false;
    }
    area.Add(0.5 * a);
  }
  *energy = area.Value() + eps_ * DirichletEnergy(dirichlet_, mesh_.x);
  return true;
}

bool PlateauProblem::EnergyAndGradient(const std::vector<double>& dof,
                                       double* energy,
                                       std::vector<double>* grad, bool* valid,
                                       std::string* error) {
  ApplyDof(dof);
  *valid = true;
  const std::size_t nv = static_cast<std::size_t>(mesh_.VertexCount());
  std::vector<Vec3> vgrad(nv, Vec3::Zero());
  KahanSum area;
  const bool x_dependent = ci_.metric.IsXDependent();
  for (int t = 0; t < mesh_.TriangleCount(); ++t) {
    const auto& tri = mesh_.tris[static_cast<std::size_t>(t)];
    int i = tri[0], j = tri[1], k = tri[2];
    const Vec3& xi = mesh_.x[static_cast<std::size_t>(i)];
    const Vec3& xj = mesh_.x[static_cast<std::size_t>(j)];
    const Vec3& xk = mesh_.x[static_cast<std::size_t>(k)];
    Vec3 e1 = xj - xi, e2 = xk - xi;
    Vec3 n = e1.cross(e2);
    if (0.5 * n.norm() < min_triangle_area_) {
      *valid = false;
      *energy = std::numeric_limits<double>::infinity();
      return true;
    }
    Vec3 centroid = (xi + xj + xk) / 3.0;
    double a;
    Vec3 gn;
    std::string err;
    if (!AreaIntegrandDerivs(ci_, centroid, n, &a, &gn, nullptr, &err)) {
      if (error) *error = "triangle " + std::to_string(t) + ": " + err;
      return false;
    }
    area.Add(0.5 * a);
    // d/dX of A(centroid, (Xj-Xi) x (Xk-Xi)) through the normal.
    vgrad[static_cast<std::size_t>(i)] += 0.5 * (xj - xk).cross(gn);
    vgrad[static_cast<std::size_t>(j)] += 0.5 * e2.cross(gn);
    vgrad[static_cast<std::size_t>(k)] += 0.5 * gn.cross(e1);
    if (x_dependent) {
      Vec3 gx;
      if (!AreaIntegrandXGradient(ci_, centroid, n, &gx, &err)) {
        if (error) *error = "triangle " + std::to_string(t) + ": " + err;
        return false;
      }
      Vec3 share = gx / 6.0;  // 1/2 (area) * 1/3 (centroid barycentric weight)
      vgrad[static_cast<std::size_t>(i)] += share;
      vgrad[static_cast<std::size_t>(j)] += share;
      vgrad[static_cast<std::size_t>(k)] += share;
    }
  }
  double dirichlet = DirichletEnergy(dirichlet_, mesh_.x);
  if (eps_ != 0.0) {
    std::vector<Vec3> dgrad(nv, Vec3::Zero());
    AddDirichletGradient(dirichlet_, mesh_.x, &dgrad);
    for (std::size_t v = 0; v < nv; ++v) vgrad[v] += eps_ * dgrad[v];
  }
  *energy = area.Value() + eps_ * dirichlet;
  grad->assign(static_cast<std::size_t>(DofCount()), 0.0);
  std::size_t slot = 0;
  for (int v : interior_) {
    (*grad)[slot] = vgrad[static_cast<std::size_t>(v)][0];
    (*grad)[slot + 1] = vgrad[static_cast<std::size_t>(v)][1];
    (*grad)[slot + 2] = vgrad[static_cast<std::size_t>(v)][2];
    slot += 3;
  }
  for (int p : sliding_) {
    int v = mesh_.boundary[static_cast<std::size_t>(p)];
    Vec3 vel = curve_.derivative(params_.t[static_cast<std::size_t>(p)]);
    (*grad)[slot++] = vgrad[static_cast<std::size_t>(v)].dot(vel);
  }
  return true;
}

bool IsoperimetricCheck(double area, double length, const GrowthBounds& bounds,
                        bool* ok, double* bound, std::string* error) {
  if (!(bounds.c1 > 0.0) || !(bounds.c2 >= bounds.c1)) {
    if (error) *error = "isoperimetric check requires positive growth bounds";
    return false;
  }
  double ratio = bounds.c2 / bounds.c1;
  *bound = ratio * ratio * length * length / (4.0 * M_PI);
  // Relative slack absorbs quadrature roundoff in the equality case.
  *ok = area <= *bound * (1.0 + 1e-12) + 1e-12;
  return true;
}

bool WriteObjFile(const DiskMesh& mesh, const std::string& path,
                  std::string* error) {
  std::ofstream out(path);
  if (!out) {
    if (error) *error = "cannot open '" + path + "' for writing";
    return false;
  }
  char buf[160];
  for (const Vec3& x : mesh.x) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", x[0], x[1], x[2]);
    out << buf;
  }
  for (const auto& t : mesh.tris) {
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
  if (!out.good()) {
    if (error) *error = "write to '" + path + "' failed";
    return false;
  }
  return true;
}

namespace {

int FindDegenerateTriangle(const DiskMesh& mesh, double min_area) {
  for (int t = 0; t < mesh.TriangleCount(); ++t) {
    const auto& tri = mesh.tris[static_cast<std::size_t>(t)];
    Vec3 e1 = mesh.x[static_cast<std::size_t>(tri[1])] - mesh.x[static_cast<std::size_t>(tri[0])];
    Vec3 e2 = mesh.x[static_cast<std::size_t>(tri[2])] - mesh.x[static_cast<std::size_t>(tri[0])];
    if (0.5 * e1.cross(e2).norm() < min_area) return t;
  }
  return -1;
}

double InfNorm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double SquaredNorm(const std::vector<double>& v) {
  KahanSum s;
  for (double x : v) s.Add(x * x);
  return s.Value();
}

}  // namespace

bool SolvePlateau(const MetricSpec& metric, const BoundaryCurve& curve,
                  const SolveConfig& config, SolveResult* out,
                  std::string* error) {
  if (config.rings < 2) {
    if (error) *error = "solver configuration requires rings >= 2";
    return false;
  }
  if (config.eps_schedule.empty()) {
    if (error) *error = "eps schedule must not be empty";
    return false;
  }
  for (double e : config.eps_schedule) {
    if (!(e > 0.0)) {
      if (error) *error = "eps schedule entries must be positive";
      return false;
    }
  }
  if (!(config.grad_tol > 0.0) || !(config.armijo_c > 0.0) ||
      !(config.armijo_c < 1.0) || !(config.initial_step > 0.0) ||
      config.max_iterations_per_stage < 1) {
    if (error) *error = "solver tolerances must be positive (and armijo_c < 1)";
    return false;
  }

  // Metric health: warn, do not fail.
  FinslerCheckReport fin = CheckFinsler(metric, Vec3::Zero(), 100);
  if (!fin.verdict) {
    out->warnings.push_back(
        "metric failed the positivity/convexity sample check (min F = " +
        std::to_string(fin.min_value) + ", min eig = " +
        std::to_string(fin.min_eigenvalue) + "); proceeding anyway");
  }
  GaDirectReport ga;
  std::string ga_err;
  if (GaDirect(metric, &ga, &ga_err, 100, nullptr, false)) {
    if (!ga.holds) {
      out->warnings.push_back(
          "symmetrized fundamental tensor is not positive definite on a coarse "
          "sample (min eig = " + std::to_string(ga.min_eig) +
          "); proceeding anyway");
    }
  } else {
    out->warnings.push_back("symmetrized-tensor sample check failed: " + ga_err);
  }

  CartanIntegrand ci;
  if (!MakeCartanIntegrand(metric, config.quad_n, &ci, error,
                           config.use_closed_form)) {
    return false;
  }
  std::string bounds_err;
  if (!ComputeGrowthBounds(ci, config.growth_samples, &out->bounds, &bounds_err)) {
    out->warnings.push_back("growth bounds unavailable: " + bounds_err);
  }

  PlateauProblem problem;
  if (!PlateauProblem::Create(ci, curve, config.rings, config.eps_schedule[0],
                              &problem, error, config.harmonic_sweeps,
                              config.min_triangle_area)) {
    return false;
  }
  std::vector<double> dof;
  problem.PackDof(&dof);

  bool last_stage_converged = false;
  double prev_stage_area = std::numeric_limits<double>::infinity();
  out->area_monotone_across_stages = true;
  out->degenerate = false;

  for (std::size_t stage = 0; stage < config.eps_schedule.size(); ++stage) {
    problem.set_eps(config.eps_schedule[stage]);
    StageTrace trace;
    trace.eps = config.eps_schedule[stage];
    double alpha = config.initial_step;
    int stagnant = 0;
    StageEnd end = StageEnd::kIterationCap;
    double energy = 0.0, grad_norm = 0.0;

    for (int iter = 0; iter < config.max_iterations_per_stage; ++iter) {
      std::vector<double> grad;
      bool valid;
      if (!problem.EnergyAndGradient(dof, &energy, &grad, &valid, error)) {
        return false;
      }
      if (!valid) {
        out->degenerate = true;
        out->degenerate_triangle =
            FindDegenerateTriangle(problem.mesh(), config.min_triangle_area);
        if (error) {
          *error = "surface degenerated: triangle " +
                   std::to_string(out->degenerate_triangle) +
                   " fell below the minimum area " +
                   std::to_string(config.min_triangle_area);
        }
        trace.iterations = iter;
        out->stages.push_back(trace);
        return false;
      }
      grad_norm = InfNorm(grad);
      if (grad_norm < config.grad_tol) {
        end = StageEnd::kGradTol;
        trace.iterations = iter;
        break;
      }
      double g2 = SquaredNorm(grad);
      double step = std::min(config.initial_step, 2.0 * alpha);
      bool accepted = false;
      std::vector<double> cand(dof.size());
      double cand_energy = 0.0;
      while (step >= 1e-14) {
        for (std::size_t d = 0; d < dof.size(); ++d) {
          cand[d] = dof[d] - step * grad[d];
        }
        problem.ProjectBoundaryDof(&cand);
        bool cand_valid;
        if (!problem.Energy(cand, &cand_energy, &cand_valid, error)) return false;
        if (cand_valid &&
            cand_energy <= energy - config.armijo_c * step * g2) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        end = StageEnd::kLineSearchFailure;
        trace.iterations = iter;
        break;
      }
      alpha = step;
      double drop = energy - cand_energy;
      dof = cand;
      trace.iterations = iter + 1;
      if (config.observer) {
        problem.ApplyDof(dof);
        SolveConfig::IterationInfo info;
        info.stage = static_cast<int>(stage);
        info.iteration = iter;
        info.energy = cand_energy;
        std::string area_err;
        if (!problem.FinslerArea(&info.finsler_area, &area_err)) {
          info.finsler_area = std::numeric_limits<double>::quiet_NaN();
        }
        info.euclidean_area = problem.EuclideanArea();
        info.grad_inf_norm = grad_norm;
        info.step = step;
        config.observer(info);
      }
      if (drop <= 1e-15 * std::max(1.0, std::abs(energy))) {
        if (++stagnant >= 3) {
          end = StageEnd::kStagnation;
          break;
        }
      } else {
        stagnant = 0;
      }
    }

    problem.ApplyDof(dof);
    double stage_area;
    if (!problem.FinslerArea(&stage_area, error)) return false;
    trace.finsler_area = stage_area;
    trace.euclidean_area = problem.EuclideanArea();
    bool valid_final;
    if (!problem.Energy(dof, &trace.energy, &valid_final, error)) return false;
    trace.grad_inf_norm = grad_norm;
    trace.end = end;
    out->stages.push_back(trace);
    if (stage_area > prev_stage_area + 1e-10) {
      out->area_monotone_across_stages = false;
    }
    prev_stage_area = stage_area;
    last_stage_converged =
        end == StageEnd::kGradTol || end == StageEnd::kStagnation;
  }

  problem.ApplyDof(dof);
  out->mesh = problem.mesh();
  out->boundary = problem.boundary();
  if (!problem.FinslerArea(&out->finsler_area, error)) return false;
  out->euclidean_area = problem.EuclideanArea();
  out->dirichlet_energy = problem.Dirichlet();
  out->conformality_defect = ConformalityDefect(out->mesh);
  out->min_triangle_normal = MinTriangleNormal(out->mesh);
  if (!FinslerLength(metric, curve, config.length_quad_n,
                     &out->finsler_boundary_length, error)) {
    return false;
  }
  if (out->bounds.c1 > 0.0) {
    double lower = out->bounds.m1 * out->euclidean_area;
    double upper = out->bounds.m2 * out->euclidean_area;
    double slack = 1e-9 * std::max(1.0, out->finsler_area);
    out->sandwich_ok = out->finsler_area >= lower - slack &&
                       out->finsler_area <= upper + slack;
    std::string iso_err;
    if (!IsoperimetricCheck(out->finsler_area, out->finsler_boundary_length,
                            out->bounds, &out->isoperimetric_ok,
                            &out->isoperimetric_bound, &iso_err)) {
      out->warnings.push_back("isoperimetric check unavailable: " + iso_err);
      out->isoperimetric_ok = false;
    }
  } else {
    out->sandwich_ok = false;
    out->isoperimetric_ok = false;
  }
  out->converged = last_stage_converged && !out->degenerate;
  return true;
}

}  // namespace finsler
