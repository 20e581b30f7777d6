#include <benchmark/benchmark.h>

#include "arcrte/csie.hpp"
#include "arcrte/forward.hpp"
#include "arcrte/phantom.hpp"
#include "arcrte/reconstruct.hpp"

using namespace arcrte;
using reconstruct::Location;
using reconstruct::ModeTrace;

namespace {

const geometry::Disk kUnit{0.0, 1.0};

ModeTrace random_trace(Location loc, int lo, int hi, int nodes) {
  ModeTrace J(loc, lo, hi, nodes);
  J.values = Eigen::MatrixXcd::Random(nodes, hi - lo + 1);
  return J;
}

std::vector<cplx> interior_points(const geometry::FanMesh& fm) {
  std::vector<cplx> pts;
  for (int v = 0; v < fm.tri.num_vertices(); ++v)
    if (fm.tri.kinds()[v] == geometry::VertexKind::Interior) pts.push_back(fm.tri.vertices()[v]);
  return pts;
}

}  // namespace

// Chord right-hand sides: P^- at N nodes for modes M..S-2.
static void BM_ChordRhs(benchmark::State& st) {
  const int S = static_cast<int>(st.range(0)), K = 314, N = 500, M = 4;
  const geometry::Arc arc(kUnit, 0.0, kPi, K);
  const geometry::Chord ch(1.0, N);
  const auto J = random_trace(Location::Arc, M, S, K);
  for (auto _ : st) benchmark::DoNotOptimize(reconstruct::chord_rhs(J, arc, ch, M, S).data());
  st.SetItemsProcessed(st.iterations() * int64_t(K) * N * (S - M));
}
BENCHMARK(BM_ChordRhs)->Arg(25)->Arg(175)->Unit(benchmark::kMillisecond);

// Factor once, solve all chord modes.
static void BM_ChordSolve(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const auto sys = csie::CsieSystem::cutoff(N, 0.0);
  const Eigen::MatrixXcd R = Eigen::MatrixXcd::Random(N, 170);
  for (auto _ : st) benchmark::DoNotOptimize(sys.solve(R).data());
}
BENCHMARK(BM_ChordSolve)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_CsieFactor(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(csie::CsieSystem::cutoff(N, 0.0).size());
}
BENCHMARK(BM_CsieFactor)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

// Interior values on a desk-scale mesh.
static void BM_InteriorJ(benchmark::State& st) {
  const int S = static_cast<int>(st.range(0)), K = 314, N = 500, M = 4;
  const geometry::Arc arc(kUnit, 0.0, kPi, K);
  const geometry::Chord ch(1.0, N);
  const auto pts = interior_points(geometry::fan_mesh(arc, ch, 8000));
  const auto Ja = random_trace(Location::Arc, M, S, K);
  const auto Jc = random_trace(Location::Chord, M, S - 2, N);
  for (auto _ : st) benchmark::DoNotOptimize(reconstruct::interior_J(Ja, Jc, arc, ch, pts, M, S).values.data());
  st.counters["points"] = static_cast<double>(pts.size());
}
BENCHMARK(BM_InteriorJ)->Arg(25)->Arg(175)->Unit(benchmark::kMillisecond);

static void BM_IntegratingFactorTables(benchmark::State& st) {
  const auto ph = harness::standard_phantom();
  const auto arc = ph.arc(314);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        transforms::integrating_factor_modes(ph.medium, arc.points(), 360, 175, -1, 100).data());
}
BENCHMARK(BM_IntegratingFactorTables)->Unit(benchmark::kMillisecond);

static void BM_ForwardSolve(benchmark::State& st) {
  const auto ph = harness::standard_phantom();
  forward::ForwardOptions o;
  o.mesh_triangles = static_cast<int>(st.range(0));
  o.directions = 90;
  const forward::ForwardSolver s(ph.medium, geometry::disk_mesh(kUnit, o.mesh_triangles), o);
  for (auto _ : st) benchmark::DoNotOptimize(s.solve(ph.source).values.data());
}
BENCHMARK(BM_ForwardSolve)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

static void BM_FanMesh(benchmark::State& st) {
  const geometry::Arc arc(kUnit, 0.0, kPi, 314);
  const geometry::Chord ch(1.0, 500);
  for (auto _ : st) benchmark::DoNotOptimize(geometry::fan_mesh(arc, ch, 8000).tri.num_triangles());
}
BENCHMARK(BM_FanMesh)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
