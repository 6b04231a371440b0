// Benchmark of the OpenMP kernels against the serial reference
// implementations: redistancing, normals, curvature, and batched inference.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "curvex/field_ops.hpp"
#include "curvex/neural.hpp"
#include "curvex/parallel.hpp"
#include "curvex/rng.hpp"

using namespace curvex;

namespace {

double time_best(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-22s %10.4f ms %10.4f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel);
}

} // namespace

int main(int argc, char** argv) {
    configure_threads_from_env();
    const int eta = argc > 1 ? std::atoi(argv[1]) : 8;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

    const Grid grid = Grid::from_eta(eta);
    const RoseShape rose(0.120, 0.305, 5);
    const double extent = rose.a() + rose.b() + (grid.band_half_width + 1.0) * grid.h;
    const ScalarField band = evaluate(grid, rose, Box2::centered({0, 0}, extent));
    const ScalarField sdf = reinitialize(band, 10);

    std::printf("eta=%d  band nodes=%zu  workers=%d  (best of %d)\n\n", eta,
                band.count_present(), worker_count(), reps);
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    row("reinitialize nu=10", time_best([&] { ref::reinitialize(band, 10); }, reps),
        time_best([&] { reinitialize(band, 10); }, reps));
    row("normals", time_best([&] { ref::normals(sdf); }, reps),
        time_best([&] { normals(sdf); }, reps));
    row("curvature", time_best([&] { ref::curvature(sdf); }, reps),
        time_best([&] { curvature(sdf); }, reps));

    // batched inference vs a per-sample loop
    const ErrorNet net = make_net(18, {130, 130, 130, 130}, eta, grid.h, 1);
    Rng rng(2);
    const std::size_t n = 20000;
    std::vector<double> X(n * 18), hks(n);
    for (double& v : X) v = rng.uniform(-2, 2);
    for (double& v : hks) v = rng.uniform(-0.6, -0.004);
    const double serial_fwd = time_best(
        [&] {
            double sink = 0.0;
            std::vector<double> x(18);
            for (std::size_t s = 0; s < n; ++s) {
                std::copy(X.begin() + static_cast<std::ptrdiff_t>(s * 18),
                          X.begin() + static_cast<std::ptrdiff_t>((s + 1) * 18), x.begin());
                sink += forward(net, x, hks[s]);
            }
            volatile double keep = sink;
            (void)keep;
        },
        reps);
    const double batch_fwd = time_best([&] { batch_forward(net, X, n, hks); }, reps);
    row("inference (20k rows)", serial_fwd, batch_fwd);
    const double batch_f32 = time_best([&] { batch_forward_f32(net, X, n, hks); }, reps);
    row("inference f32 batch", serial_fwd, batch_f32);
    return 0;
}
