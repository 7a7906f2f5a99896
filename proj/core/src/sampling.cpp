#include "finsler/sampling.h"

#include <cmath>
#include <limits>

namespace finsler {

std::uint64_t HashConfigString(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string HashToHex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::vector<Vec3> FibonacciSphere(int count, std::uint64_t seed) {
  std::vector<Vec3> pts;
  if (count <= 0) return pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double dz = 2.0 / count;
  const double dtheta = M_PI * (std::sqrt(5.0) + 1.0);
  for (int i = 0; i < count; ++i) {
    double z = -1.0 + 0.5 * dz + i * dz;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double theta = i * dtheta;
    pts.emplace_back(r * std::cos(theta), r * std::sin(theta), z);
  }
  if (seed != 0) {
    SplitMix64 rng(seed);
    Mat3 rot = RandomRotation(&rng);
    for (Vec3& p : pts) p = rot * p;
  }
  return pts;
}

CircleNodes MakeCircleNodes(int count) {
  CircleNodes nodes;
  if (count <= 0) return nodes;
  nodes.cosines.resize(static_cast<std::size_t>(count));
  nodes.sines.resize(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    double theta = 2.0 * M_PI * j / count;
    nodes.cosines[static_cast<std::size_t>(j)] = std::cos(theta);
    nodes.sines[static_cast<std::size_t>(j)] = std::sin(theta);
  }
  return nodes;
}

bool OrthonormalBasis(const Vec3& z, Vec3* f1, Vec3* f2, std::string* error) {
  double n = z.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    if (error) *error = "cannot build a basis orthogonal to the zero vector";
    return false;
  }
  Vec3 zh = z / n;
  // Axis least aligned with z keeps the Gram-Schmidt step well conditioned.
  int axis = 0;
  double best = std::abs(zh[0]);
  for (int i = 1; i < 3; ++i) {
    double a = std::abs(zh[i]);
    if (a < best) {
      best = a;
      axis = i;
    }
  }
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  Vec3 u = e - e.dot(zh) * zh;
  u.normalize();
  Vec3 v = zh.cross(u);  // ensures u x v = zh
  *f1 = u;
  *f2 = v;
  return true;
}

Mat3 RandomRotation(SplitMix64* rng) {
  // Uniform quaternion (Shoemake's method).
  double u1 = rng->NextDouble();
  double u2 = rng->NextDouble();
  double u3 = rng->NextDouble();
  double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  double qx = a * std::sin(2.0 * M_PI * u2);
  double qy = a * std::cos(2.0 * M_PI * u2);
  double qz = b * std::sin(2.0 * M_PI * u3);
  double qw = b * std::cos(2.0 * M_PI * u3);
  Eigen::Quaterniond q(qw, qx, qy, qz);
  return q.normalized().toRotationMatrix();
}

Vec3 RandomUnitVector(SplitMix64* rng) {
  double z = rng->NextInRange(-1.0, 1.0);
  double phi = rng->NextInRange(0.0, 2.0 * M_PI);
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

double FdStepGradient(const Vec3& y) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, y.norm());
}

double FdStepHessian(const Vec3& y) {
  static const double h0 = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  return h0 * std::max(1.0, y.norm());
}

Vec3 FdGradient(const std::function<double(const Vec3&)>& f, const Vec3& y) {
  double h = FdStepGradient(y);
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    g[i] = (f(y + e) - f(y - e)) / (2.0 * h);
  }
  return g;
}

Mat3 FdHessian(const std::function<double(const Vec3&)>& f, const Vec3& y) {
  double h = FdStepHessian(y);
  Mat3 m;
  double f0 = f(y);
  for (int i = 0; i < 3; ++i) {
    Vec3 ei = Vec3::Zero();
    ei[i] = h;
    m(i, i) = (f(y + ei) - 2.0 * f0 + f(y - ei)) / (h * h);
    for (int j = i + 1; j < 3; ++j) {
      Vec3 ej = Vec3::Zero();
      ej[j] = h;
      double v = (f(y + ei + ej) - f(y + ei - ej) - f(y - ei + ej) + f(y - ei - ej)) /
                 (4.0 * h * h);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

Vec3 RefineSphereMinimum(const std::function<double(const Vec3&)>& f,
                         const Vec3& start, double* value, double initial_step,
                         double min_step) {
  Vec3 dir = start.normalized();
  // Spherical coordinates around the running best point; re-centering each
  // improvement keeps the parametrization away from its poles.
  double best = f(dir);
  double step = initial_step;
  while (step > min_step) {
    Vec3 f1, f2;
    std::string err;
    if (!OrthonormalBasis(dir, &f1, &f2, &err)) break;
    bool improved = false;
    const double ca = std::cos(step), sa = std::sin(step);
    const Vec3 cands[4] = {ca * dir + sa * f1, ca * dir - sa * f1,
                           ca * dir + sa * f2, ca * dir - sa * f2};
    for (const Vec3& c : cands) {
      double v = f(c);
      if (v < best) {
        best = v;
        dir = c;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  if (value) *value = best;
  return dir;
}

}  // namespace finsler
