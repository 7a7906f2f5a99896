#pragma once

#include "finsler/metric.h"
#include "finsler/types.h"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace finsler {

// Closed C^2 boundary curve gamma: [0,1) -> R^3 (arguments are taken mod 1)
// with its derivative and the three fixed anchor parameters of the discrete
// three-point normalization.
struct BoundaryCurve {
  std::string name;
  std::function<Vec3(double)> position;
  std::function<Vec3(double)> derivative;
  std::array<double, 3> anchors = {0.0, 1.0 / 3.0, 2.0 / 3.0};
};

BoundaryCurve MakeCircleCurve(double radius = 1.0);
BoundaryCurve MakeEllipseCurve(double semi_a = 1.2, double semi_b = 0.8);

// Periodic C^2 cubic interpolant through the given corner points (smoothed
// planar polygon when the corners are planar).
bool MakeSmoothedPolygonCurve(const std::vector<Vec3>& corners,
                              BoundaryCurve* out, std::string* error);

// Helical arc (radius, pitch to `height` over 0 <= t <= 0.8) closed smoothly
// by the periodic cubic interpolant through its samples.
bool MakeHelicalArcCurve(double radius, double height, BoundaryCurve* out,
                         std::string* error);

// Periodic cubic interpolant through points listed in a file (one "x y z" per
// line, '#' comments, >= 3 points).
bool MakeCurveFromSamplesFile(const std::string& path, BoundaryCurve* out,
                              std::string* error);

// Named curve ("circle", "ellipse", "polygon", "helix") or, when the name
// matches no built-in, a sample-file path.
bool MakeNamedCurve(const std::string& name_or_path, BoundaryCurve* out,
                    std::string* error);

// |gamma(0) - gamma(1^-)|; closed curves stay below 1e-12.
double CurveClosureResidual(const BoundaryCurve& curve);

// Finsler length by the trapezoid rule on N >= 64 uniform parameter nodes:
// L = (1/N) sum F(gamma(t_j), gamma'(t_j)).  A vanishing derivative at a node
// is a domain error (the integrand is undefined there).
bool FinslerLength(const MetricSpec& metric, const BoundaryCurve& curve, int n,
                   double* out, std::string* error);

// ---------------------------------------------------------------------------
// Periodic cubic spline machinery (exposed for reuse and tests).

// C^2 periodic cubic interpolant through points at uniform parameters k/n.
struct PeriodicCubicSpline {
  std::vector<Vec3> points;
  std::vector<Vec3> second_derivs;

  Vec3 Position(double t) const;
  Vec3 Derivative(double t) const;
};

bool MakePeriodicCubicSpline(const std::vector<Vec3>& points,
                             PeriodicCubicSpline* out, std::string* error);

// Solves the cyclic tridiagonal system with constant sub/super diagonal 1,
// main diagonal 4, and unit corner entries (the periodic-spline system).
void SolveCyclicSplineSystem(std::vector<double>* rhs);

}  // namespace finsler
