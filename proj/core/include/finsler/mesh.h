#pragma once

#include "finsler/cartan.h"
#include "finsler/types.h"

#include <array>
#include <string>
#include <vector>

namespace finsler {

// Triangulated disk: parametric vertices in the closed unit disk plus spatial
// positions, with a counterclockwise outer boundary loop.  Built as rings of
// 6r vertices around a center vertex (rings = r gives 1 + 3r(r+1) vertices
// and 6r^2 triangles); the triangulation has Euler characteristic 1 and a
// simple boundary covering the unit circle.
struct DiskMesh {
  int rings = 0;
  std::vector<Vec2> uv;                   // parametric positions
  std::vector<Vec3> x;                    // spatial positions
  std::vector<std::array<int, 3>> tris;   // CCW in the parameter plane
  std::vector<int> boundary;              // ordered outer loop (CCW)

  int VertexCount() const { return static_cast<int>(uv.size()); }
  int TriangleCount() const { return static_cast<int>(tris.size()); }
  int BoundaryCount() const { return static_cast<int>(boundary.size()); }
};

// rings >= 1 (a single ring gives the hexagonal fan; >= 2 recommended for
// solver use).  Spatial positions are initialized to the flat parametric
// embedding (z = 0).
bool GenerateDiskMesh(int rings, DiskMesh* out, std::string* error);

// V - E + F over the unique undirected edge set (1 for a disk).
int EulerCharacteristic(const DiskMesh& mesh);

// Structural validation: Euler characteristic 1, positively oriented
// parametric triangles with area >= 1e-12, and a simple closed boundary loop
// that covers every boundary edge and lies on the unit circle.
bool CheckDiskMesh(const DiskMesh& mesh, std::string* error);

// One-neighborhoods (undirected adjacency).
std::vector<std::vector<int>> VertexNeighbors(const DiskMesh& mesh);

// ---------------------------------------------------------------------------
// Discrete functionals.  All weights come from the FIXED parametric mesh, so
// the Dirichlet energy is a convex quadratic in the spatial positions.

struct DirichletOperator {
  struct Edge {
    int i = 0, j = 0;
    double w = 0.0;  // half sum of the two opposite cotangents
  };
  std::vector<Edge> edges;
};

// Cotangent weights of the parametric triangulation.
DirichletOperator MakeDirichletOperator(const DiskMesh& mesh);

// E_D(X) = 1/2 sum_(ij) w_ij |X_i - X_j|^2; >= euclidean area of the image,
// with equality exactly at conformal maps.
double DirichletEnergy(const DirichletOperator& op, const std::vector<Vec3>& x);

// Accumulates dE_D/dX_i = sum_j w_ij (X_i - X_j) into grad.
void AddDirichletGradient(const DirichletOperator& op,
                          const std::vector<Vec3>& x, std::vector<Vec3>* grad);

// Area-weighted mean over triangles of
//   ((|X_u1|^2 - |X_u2|^2)^2 + 4 (X_u1 . X_u2)^2) / (|X_u1|^2 + |X_u2|^2)^2,
// the normalized squared conformality residual of the parametric-to-spatial
// Jacobian (0 exactly for conformal maps, bounded by 1).
double ConformalityDefect(const DiskMesh& mesh);

// Sum of unsigned euclidean triangle areas of the spatial mesh.
double DiscreteEuclideanArea(const DiskMesh& mesh);

// Sum over triangles of A(centroid, E1 x E2)/2 with the one-point centroid
// rule; triangles with |E1 x E2| <= 1e-14 contribute zero.  Fails with the
// offending triangle id if the integrand is singular there.
bool DiscreteFinslerArea(const CartanIntegrand& ci, const DiskMesh& mesh,
                         double* out, std::string* error);

// Smallest triangle normal magnitude |E1 x E2| (degeneration diagnostic;
// near-zero normals on an interior triangle flag potential branch points,
// which are reported, not corrected).
double MinTriangleNormal(const DiskMesh& mesh);

}  // namespace finsler
