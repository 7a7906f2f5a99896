#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "finsler/cartan.h"
#include "finsler/curve.h"
#include "finsler/gacheck.h"
#include "finsler/mesh.h"
#include "finsler/metric.h"
#include "finsler/plateau.h"
#include "finsler/radon.h"
#include "finsler/sampling.h"

using namespace finsler;

namespace {

MetricSpec RandersSpec() {
  MetricSpec s;
  s.family = MetricFamily::kRanders;
  s.b = Vec3(0.3, 0.1, -0.05);
  return s;
}

MetricSpec MatsumotoSpec() {
  MetricSpec s;
  s.family = MetricFamily::kAlphaBeta;
  s.phi = PhiFamily::kMatsumoto;
  s.b = Vec3(0.3, 0.0, 0.0);
  return s;
}

std::vector<Vec3> Directions(int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0));
  }
  return out;
}

void BM_EvalMetricRanders(benchmark::State& state) {
  MetricSpec spec = RandersSpec();
  std::vector<Vec3> ys = Directions(256, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EvalMetricFast(spec, Vec3::Zero(), ys[i++ & 255]));
  }
}
BENCHMARK(BM_EvalMetricRanders);

void BM_EvalMetricMatsumoto(benchmark::State& state) {
  MetricSpec spec = MatsumotoSpec();
  std::vector<Vec3> ys = Directions(256, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EvalMetricFast(spec, Vec3::Zero(), ys[i++ & 255]));
  }
}
BENCHMARK(BM_EvalMetricMatsumoto);

void BM_AreaIntegrandQuadrature(benchmark::State& state) {
  CartanIntegrand ci;
  std::string err;
  MakeCartanIntegrand(RandersSpec(), static_cast<int>(state.range(0)), &ci,
                      &err, /*use_closed_form=*/false);
  std::vector<Vec3> zs = Directions(256, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AreaIntegrandFast(ci, Vec3::Zero(), zs[i++ & 255]));
  }
}
BENCHMARK(BM_AreaIntegrandQuadrature)->Arg(64)->Arg(256);

void BM_AreaIntegrandClosedForm(benchmark::State& state) {
  CartanIntegrand ci;
  std::string err;
  MakeCartanIntegrand(RandersSpec(), 256, &ci, &err, /*use_closed_form=*/true);
  std::vector<Vec3> zs = Directions(256, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AreaIntegrandFast(ci, Vec3::Zero(), zs[i++ & 255]));
  }
}
BENCHMARK(BM_AreaIntegrandClosedForm);

void BM_RadonTransform(benchmark::State& state) {
  MetricSpec spec = RandersSpec();
  HomogeneousFunction g;
  int m = spec.m;
  g.eval = [spec, m](const Vec3& y) {
    return std::pow(EvalMetricFast(spec, Vec3::Zero(), y), -m);
  };
  g.degree = -m;
  std::vector<Vec3> zs = Directions(256, 5);
  std::size_t i = 0;
  std::string err;
  for (auto _ : state) {
    double r;
    RadonTransform(g, zs[i++ & 255], static_cast<int>(state.range(0)), &r, &err);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_RadonTransform)->Arg(64)->Arg(256);

void BM_SymmetrizedTensorScan(benchmark::State& state) {
  MetricSpec spec = RandersSpec();
  for (auto _ : state) {
    GaDirectReport report;
    std::string err;
    GaDirect(spec, &report, &err, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(report.min_eig);
  }
}
BENCHMARK(BM_SymmetrizedTensorScan)->Arg(100)->Arg(500);

void BM_MeshAreaAndGradient(benchmark::State& state) {
  CartanIntegrand ci;
  std::string err;
  MakeCartanIntegrand(RandersSpec(), 64, &ci, &err, /*use_closed_form=*/false);
  BoundaryCurve helix;
  MakeHelicalArcCurve(1.0, 0.4, &helix, &err);
  PlateauProblem problem;
  PlateauProblem::Create(ci, helix, static_cast<int>(state.range(0)), 0.05,
                         &problem, &err);
  std::vector<double> dof;
  problem.PackDof(&dof);
  for (auto _ : state) {
    double energy;
    std::vector<double> grad;
    bool valid;
    problem.EnergyAndGradient(dof, &energy, &grad, &valid, &err);
    benchmark::DoNotOptimize(energy);
  }
}
BENCHMARK(BM_MeshAreaAndGradient)->Arg(4)->Arg(8);

void BM_ThresholdScan(benchmark::State& state) {
  for (auto _ : state) {
    ThresholdResult result;
    std::string err;
    ThresholdScan(PhiFamily::kRanders, 0.4, 0.8, 0.002, &result, &err, 5, 200);
    benchmark::DoNotOptimize(result.critical_b);
  }
}
BENCHMARK(BM_ThresholdScan);

}  // namespace

BENCHMARK_MAIN();
