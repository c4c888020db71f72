// Kernel benchmark: OpenMP paths against the serial reference.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tdwave/evolve.hpp"
#include "tdwave/spaces.hpp"

using namespace tdwave;

namespace {

double time_of(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, dt);
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4fs %10.4fs   x%.2f\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif
  std::printf("%-28s %10s %10s   %s\n", "kernel", "serial", "omp", "speedup");

  ModelConfig cfg;
  cfg.g_modes = single_mode_forcing(cfg, 1, 1.0);
  const PhaseMetric h = cfg.metric_eps1();

  {
    PointCloud a = sample_ball(h, 0.0, 2.0, 2500, 1);
    PointCloud b = sample_ball(h, 0.0, 2.0, 2500, 2);
    volatile double sink = 0.0;
    const double ts = time_of([&] { sink = hausdorff_semidist_serial(a, b); });
    const double tp = time_of([&] { sink = hausdorff_semidist(a, b); });
    (void)sink;
    row("hausdorff 2500x2500", ts, tp);
    if (hausdorff_semidist_serial(a, b) != hausdorff_semidist(a, b)) {
      std::printf("MISMATCH between serial and parallel hausdorff\n");
      return 1;
    }
  }

  {
    PointCloud cloud = sample_ball(h, 0.0, 2.0, 4000, 3);
    volatile std::size_t sink = 0;
    const double ts = time_of([&] { sink = greedy_net_serial(cloud, 0.25).size(); });
    const double tp = time_of([&] { sink = greedy_net(cloud, 0.25).size(); });
    (void)sink;
    row("greedy net 4000 pts", ts, tp);
    if (greedy_net_serial(cloud, 0.25).size() != greedy_net(cloud, 0.25).size()) {
      std::printf("MISMATCH between serial and parallel nets\n");
      return 1;
    }
  }

  {
    EvolutionSpec spec;
    spec.dt_base = 1e-2;
    PointCloud ball = sample_ball(h, -4.0, 2.0, 16, 4);
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double ts = time_of([&] { evolve_cloud(ball, 0.0, cfg, spec); }, 1);
    omp_set_num_threads(max_threads);
#else
    const double ts = time_of([&] { evolve_cloud(ball, 0.0, cfg, spec); }, 1);
#endif
    const double tp = time_of([&] { evolve_cloud(ball, 0.0, cfg, spec); }, 1);
    row("ensemble evolve 16 traj", ts, tp);
  }
  return 0;
}
