// Timing comparison of the serial reference path (threads = 1) against the
// OpenMP kernels for the two cell-parallel workloads: basin labeling and the
// dilution-rate sweep. Also verifies that the results agree exactly.

#include <chrono>
#include <cstdio>
#include <string>

#include "syntro/basins.hpp"
#include "syntro/bifurcation.hpp"
#include "syntro/parallel.hpp"

using namespace syntro;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::duration<double>>(
               std::chrono::steady_clock::now() - start)
        .count();
}

template <class F>
double timed(F&& work) {
    const auto start = std::chrono::steady_clock::now();
    work();
    return seconds_since(start);
}

}  // namespace

int main(int argc, char** argv) {
    int resolution = 96;
    int sweep_samples = 560;
    if (argc > 1) resolution = std::stoi(argv[1]);
    if (argc > 2) sweep_samples = std::stoi(argv[2]);

    const GrowthModel model = GrowthModel::monod_product({8.0, 1.0, 2.0, 4.0, 2.0, 1.0});
    ChemostatConfig config;
    config.D = 0.95;
    config.s1_in = 3.0;
    config.s2_in = 3.0;

    const int threads = resolve_threads(0);
    std::printf("workload                      serial      %2d threads   speedup\n", threads);

    {
        BasinGrid serial_grid, parallel_grid;
        const double t_serial = timed([&] {
            serial_grid = classify_basins(model, config, 0.95, resolution, resolution, 1);
        });
        const double t_parallel = timed([&] {
            parallel_grid = classify_basins(model, config, 0.95, resolution, resolution, 0);
        });
        const bool same = serial_grid.labels == parallel_grid.labels;
        std::printf("basins %4dx%-4d        %8.3f s   %8.3f s   %6.2fx   results %s\n",
                    resolution, resolution, t_serial, t_parallel, t_serial / t_parallel,
                    same ? "identical" : "DIFFER");
    }
    {
        BranchDiagram serial_diagram, parallel_diagram;
        const double t_serial = timed([&] {
            serial_diagram = sweep(model, config, 0.1, 1.5, sweep_samples, 1);
        });
        const double t_parallel = timed([&] {
            parallel_diagram = sweep(model, config, 0.1, 1.5, sweep_samples, 0);
        });
        bool same = serial_diagram.events.size() == parallel_diagram.events.size();
        for (std::size_t k = 0; same && k < serial_diagram.events.size(); ++k) {
            same = serial_diagram.events[k].D == parallel_diagram.events[k].D;
        }
        std::printf("sweep %5d samples      %8.3f s   %8.3f s   %6.2fx   results %s\n",
                    sweep_samples, t_serial, t_parallel, t_serial / t_parallel,
                    same ? "identical" : "DIFFER");
    }
    return 0;
}
