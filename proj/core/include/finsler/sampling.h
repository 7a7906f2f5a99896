#pragma once

#include "finsler/types.h"

#include <functional>
#include <vector>

namespace finsler {

// Quasi-uniform unit directions on the sphere via the Fibonacci (golden-angle)
// lattice.  seed != 0 applies a seeded random rotation to the whole lattice;
// seed == 0 keeps the canonical orientation.  Deterministic either way.
std::vector<Vec3> FibonacciSphere(int count, std::uint64_t seed = 0);

// Uniformly spaced angles on the circle with precomputed direction cosines.
// The composite trapezoid rule on a periodic integrand reduces to the plain
// node average, so these nodes carry equal weight 2*pi/count.
struct CircleNodes {
  std::vector<double> cosines;
  std::vector<double> sines;

  int Count() const { return static_cast<int>(cosines.size()); }
};
CircleNodes MakeCircleNodes(int count);

// Deterministic orthonormal basis {f1, f2} of the plane orthogonal to z with
// f1 x f2 = z/|z|.  The construction picks the coordinate axis least aligned
// with z and Gram-Schmidts it, so the basis depends only on z (no RNG).
bool OrthonormalBasis(const Vec3& z, Vec3* f1, Vec3* f2, std::string* error);

// Rotation matrix drawn uniformly from SO(3) (quaternion method).
Mat3 RandomRotation(SplitMix64* rng);

// Unit vector drawn uniformly from the sphere.
Vec3 RandomUnitVector(SplitMix64* rng);

// Central finite differences with the conventional step choices:
// first derivatives use h = cbrt(eps)*max(1,|y|), second derivatives
// h = eps^(1/4)*max(1,|y|).
double FdStepGradient(const Vec3& y);
double FdStepHessian(const Vec3& y);

// Gradient and Hessian of a scalar field by central differences.
Vec3 FdGradient(const std::function<double(const Vec3&)>& f, const Vec3& y);
Mat3 FdHessian(const std::function<double(const Vec3&)>& f, const Vec3& y);

// Locally refines a minimizer of f over the unit sphere starting from the
// direction `start`, using a deterministic compass/pattern search in spherical
// coordinates with step halving.  Returns the refined direction and writes the
// refined value to *value.  Used to sharpen coarse lattice scans whose sampled
// minimum is biased high by O(spacing^2).
Vec3 RefineSphereMinimum(const std::function<double(const Vec3&)>& f,
                         const Vec3& start, double* value,
                         double initial_step = 0.2, double min_step = 1e-8);

}  // namespace finsler
