#include "finsler/mesh.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace finsler {

namespace {

double Cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

int RingStart(int r) { return r == 0 ? 0 : 1 + 3 * r * (r - 1); }

}  // namespace

bool GenerateDiskMesh(int rings, DiskMesh* out, std::string* error) {
  if (rings < 1) {
    if (error) *error = "disk mesh requires rings >= 1";
    return false;
  }
  DiskMesh mesh;
  mesh.rings = rings;
  mesh.uv.emplace_back(0.0, 0.0);
  for (int r = 1; r <= rings; ++r) {
    int n = 6 * r;
    double radius = static_cast<double>(r) / rings;
    for (int j = 0; j < n; ++j) {
      double theta = 2.0 * M_PI * j / n;
      mesh.uv.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
    }
  }
  // Zipper triangulation between consecutive rings: advance whichever ring's
  // next vertex comes first in angle; both triangle kinds are CCW in the
  // parameter plane.
  for (int r = 1; r <= rings; ++r) {
    int inner_start = RingStart(r - 1);
    int outer_start = RingStart(r);
    int n_i = r == 1 ? 1 : 6 * (r - 1);
    int n_o = 6 * r;
    if (r == 1) {
      for (int o = 0; o < n_o; ++o) {
        mesh.tris.push_back({outer_start + o, outer_start + (o + 1) % n_o, 0});
      }
      continue;
    }
    int i = 0, o = 0;
    while (i < n_i || o < n_o) {
      bool advance_outer;
      if (o >= n_o) {
        advance_outer = false;
      } else if (i >= n_i) {
        advance_outer = true;
      } else {
        advance_outer = static_cast<double>(o + 1) / n_o <=
                        static_cast<double>(i + 1) / n_i;
      }
      if (advance_outer) {
        mesh.tris.push_back({outer_start + o % n_o, outer_start + (o + 1) % n_o,
                             inner_start + i % n_i});
        ++o;
      } else {
        mesh.tris.push_back({inner_start + i % n_i, outer_start + o % n_o,
                             inner_start + (i + 1) % n_i});
        ++i;
      }
    }
  }
  int n_b = 6 * rings;
  int b_start = RingStart(rings);
  for (int j = 0; j < n_b; ++j) mesh.boundary.push_back(b_start + j);
  mesh.x.resize(mesh.uv.size());
  for (std::size_t v = 0; v < mesh.uv.size(); ++v) {
    mesh.x[v] = Vec3(mesh.uv[v].x(), mesh.uv[v].y(), 0.0);
  }
  if (!CheckDiskMesh(mesh, error)) return false;
  *out = std::move(mesh);
  return true;
}

int EulerCharacteristic(const DiskMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : mesh.tris) {
    for (int e = 0; e < 3; ++e) {
      int a = t[static_cast<std::size_t>(e)];
      int b = t[static_cast<std::size_t>((e + 1) % 3)];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return mesh.VertexCount() - static_cast<int>(edges.size()) +
         mesh.TriangleCount();
}

bool CheckDiskMesh(const DiskMesh& mesh, std::string* error) {
  if (mesh.VertexCount() == 0 || mesh.TriangleCount() == 0) {
    if (error) *error = "mesh is empty";
    return false;
  }
  for (int t = 0; t < mesh.TriangleCount(); ++t) {
    const auto& tri = mesh.tris[static_cast<std::size_t>(t)];
    for (int v : tri) {
      if (v < 0 || v >= mesh.VertexCount()) {
        if (error) {
          *error = "triangle " + std::to_string(t) + " references vertex " +
                   std::to_string(v) + " out of range";
        }
        return false;
      }
    }
    const Vec2& a = mesh.uv[static_cast<std::size_t>(tri[0])];
    const Vec2& b = mesh.uv[static_cast<std::size_t>(tri[1])];
    const Vec2& c = mesh.uv[static_cast<std::size_t>(tri[2])];
    double area2 = Cross2(b - a, c - a);
    if (!(area2 >= 2e-12)) {
      if (error) {
        *error = "triangle " + std::to_string(t) +
                 " is degenerate or misoriented in the parameter plane "
                 "(signed area " + std::to_string(0.5 * area2) + ")";
      }
      return false;
    }
  }
  if (EulerCharacteristic(mesh) != 1) {
    if (error) {
      *error = "mesh is not a disk (Euler characteristic " +
               std::to_string(EulerCharacteristic(mesh)) + ")";
    }
    return false;
  }
  // Boundary edges = edges used by exactly one triangle.
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : mesh.tris) {
    for (int e = 0; e < 3; ++e) {
      int a = t[static_cast<std::size_t>(e)];
      int b = t[static_cast<std::size_t>((e + 1) % 3)];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::set<std::pair<int, int>> boundary_edges;
  for (const auto& [edge, uses] : edge_use) {
    if (uses == 1) boundary_edges.insert(edge);
  }
  int nb = mesh.BoundaryCount();
  if (nb < 3) {
    if (error) *error = "boundary loop has fewer than 3 vertices";
    return false;
  }
  std::set<int> seen;
  for (int j = 0; j < nb; ++j) {
    int a = mesh.boundary[static_cast<std::size_t>(j)];
    int b = mesh.boundary[static_cast<std::size_t>((j + 1) % nb)];
    if (!seen.insert(a).second) {
      if (error) {
        *error = "boundary loop repeats vertex " + std::to_string(a);
      }
      return false;
    }
    if (boundary_edges.find({std::min(a, b), std::max(a, b)}) ==
        boundary_edges.end()) {
      if (error) {
        *error = "boundary loop edge (" + std::to_string(a) + "," +
                 std::to_string(b) + ") is not a mesh boundary edge";
      }
      return false;
    }
    double radius = mesh.uv[static_cast<std::size_t>(a)].norm();
    if (std::abs(radius - 1.0) > 1e-12) {
      if (error) {
        *error = "boundary vertex " + std::to_string(a) +
                 " is not on the unit circle (|uv| = " + std::to_string(radius) +
                 ")";
      }
      return false;
    }
  }
  if (static_cast<int>(boundary_edges.size()) != nb) {
    if (error) {
      *error = "boundary loop covers " + std::to_string(nb) + " of " +
               std::to_string(boundary_edges.size()) + " boundary edges";
    }
    return false;
  }
  return true;
}

std::vector<std::vector<int>> VertexNeighbors(const DiskMesh& mesh) {
  std::vector<std::set<int>> sets(static_cast<std::size_t>(mesh.VertexCount()));
  for (const auto& t : mesh.tris) {
    for (int e = 0; e < 3; ++e) {
      int a = t[static_cast<std::size_t>(e)];
      int b = t[static_cast<std::size_t>((e + 1) % 3)];
      sets[static_cast<std::size_t>(a)].insert(b);
      sets[static_cast<std::size_t>(b)].insert(a);
    }
  }
  std::vector<std::vector<int>> out(sets.size());
  for (std::size_t v = 0; v < sets.size(); ++v) {
    out[v].assign(sets[v].begin(), sets[v].end());
  }
  return out;
}

DirichletOperator MakeDirichletOperator(const DiskMesh& mesh) {
  std::map<std::pair<int, int>, double> weights;
  for (const auto& t : mesh.tris) {
    for (int corner = 0; corner < 3; ++corner) {
      int a = t[static_cast<std::size_t>(corner)];
      int b = t[static_cast<std::size_t>((corner + 1) % 3)];
      int c = t[static_cast<std::size_t>((corner + 2) % 3)];
      Vec2 u = mesh.uv[static_cast<std::size_t>(b)] - mesh.uv[static_cast<std::size_t>(a)];
      Vec2 v = mesh.uv[static_cast<std::size_t>(c)] - mesh.uv[static_cast<std::size_t>(a)];
      double cot = u.dot(v) / Cross2(u, v);
      weights[{std::min(b, c), std::max(b, c)}] += 0.5 * cot;
    }
  }
  DirichletOperator op;
  op.edges.reserve(weights.size());
  for (const auto& [edge, w] : weights) {
    op.edges.push_back({edge.first, edge.second, w});
  }
  return op;
}

double DirichletEnergy(const DirichletOperator& op, const std::vector<Vec3>& x) {
  KahanSum sum;
  for (const auto& e : op.edges) {
    sum.Add(e.w * (x[static_cast<std::size_t>(e.i)] - x[static_cast<std::size_t>(e.j)]).squaredNorm());
  }
  return 0.5 * sum.Value();
}

void AddDirichletGradient(const DirichletOperator& op,
                          const std::vector<Vec3>& x, std::vector<Vec3>* grad) {
  for (const auto& e : op.edges) {
    Vec3 d = x[static_cast<std::size_t>(e.i)] - x[static_cast<std::size_t>(e.j)];
    (*grad)[static_cast<std::size_t>(e.i)] += e.w * d;
    (*grad)[static_cast<std::size_t>(e.j)] -= e.w * d;
  }
}

double ConformalityDefect(const DiskMesh& mesh) {
  KahanSum weighted;
  KahanSum total_weight;
  for (const auto& t : mesh.tris) {
    const Vec2& p0 = mesh.uv[static_cast<std::size_t>(t[0])];
    const Vec2& p1 = mesh.uv[static_cast<std::size_t>(t[1])];
    const Vec2& p2 = mesh.uv[static_cast<std::size_t>(t[2])];
    Vec2 d1 = p1 - p0, d2 = p2 - p0;
    double det = Cross2(d1, d2);
    double weight = 0.5 * std::abs(det);
    if (weight < 1e-300) continue;
    const Vec3& x0 = mesh.x[static_cast<std::size_t>(t[0])];
    Vec3 e1 = mesh.x[static_cast<std::size_t>(t[1])] - x0;
    Vec3 e2 = mesh.x[static_cast<std::size_t>(t[2])] - x0;
    // Columns of the affine Jacobian: [Xu1 Xu2] = [e1 e2] * [d1 d2]^-1.
    Vec3 xu1 = (e1 * d2.y() - e2 * d1.y()) / det;
    Vec3 xu2 = (e2 * d1.x() - e1 * d2.x()) / det;
    double a = xu1.squaredNorm(), c = xu2.squaredNorm(), b = xu1.dot(xu2);
    double denom = a + c;
    if (denom < 1e-30) continue;
    double defect = ((a - c) * (a - c) + 4.0 * b * b) / (denom * denom);
    weighted.Add(weight * defect);
    total_weight.Add(weight);
  }
  double tw = total_weight.Value();
  return tw > 0.0 ? weighted.Value() / tw : 0.0;
}

double DiscreteEuclideanArea(const DiskMesh& mesh) {
  KahanSum sum;
  for (const auto& t : mesh.tris) {
    Vec3 e1 = mesh.x[static_cast<std::size_t>(t[1])] - mesh.x[static_cast<std::size_t>(t[0])];
    Vec3 e2 = mesh.x[static_cast<std::size_t>(t[2])] - mesh.x[static_cast<std::size_t>(t[0])];
    sum.Add(0.5 * e1.cross(e2).norm());
  }
  return sum.Value();
}

bool DiscreteFinslerArea(const CartanIntegrand& ci, const DiskMesh& mesh,
                         double* out, std::string* error) {
  KahanSum sum;
  for (int t = 0; t < mesh.TriangleCount(); ++t) {
    const auto& tri = mesh.tris[static_cast<std::size_t>(t)];
    const Vec3& x0 = mesh.x[static_cast<std::size_t>(tri[0])];
    const Vec3& x1 = mesh.x[static_cast<std::size_t>(tri[1])];
    const Vec3& x2 = mesh.x[static_cast<std::size_t>(tri[2])];
    Vec3 n = (x1 - x0).cross(x2 - x0);
    if (n.norm() <= 1e-14) continue;  // degenerate triangles contribute zero
    Vec3 centroid = (x0 + x1 + x2) / 3.0;
    double a;
    std::string err;
    if (!AreaIntegrand(ci, centroid, n, &a, &err)) {
      if (error) *error = "triangle " + std::to_string(t) + ": " + err;
      return false;
    }
    sum.Add(0.5 * a);
  }
  *out = sum.Value();
  return true;
}

double MinTriangleNormal(const DiskMesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : mesh.tris) {
    Vec3 e1 = mesh.x[static_cast<std::size_t>(t[1])] - mesh.x[static_cast<std::size_t>(t[0])];
    Vec3 e2 = mesh.x[static_cast<std::size_t>(t[2])] - mesh.x[static_cast<std::size_t>(t[0])];
    best = std::min(best, e1.cross(e2).norm());
  }
  return best;
}

}  // namespace finsler
