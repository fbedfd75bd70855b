// Benchmark of the transform-based kernel engine against the direct
// transcription, and of the parallel paths against single-threaded runs.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "megn/kernels.hpp"
#include "megn/kernels_reference.hpp"
#include "megn/ssfm.hpp"

using namespace megn;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace

int main() {
    LinkConfig link;
    link.num_spans = 10;
    PulseShape pulse;

    std::printf("%-46s %10s %12s\n", "workload", "time [s]", "value");

    // direct transcription: every kernel at one (tau, f), small mesh
    {
        const int n = 101;
        refkernels::Mesh mesh(n, 0.5 * pulse.symbol_rate_hz);
        auto t0 = clk::now();
        double acc = 0.0;
        for (int tau : {1, 5, 20}) {
            acc += refkernels::chi1(tau, 0.0, pulse, link, mesh);
            acc += refkernels::chi2(tau, 0.0, pulse, link, mesh);
            acc += refkernels::chi3(tau, 0.0, pulse, link, mesh);
            acc += refkernels::xi1(tau, 0.0, pulse, link, mesh);
            acc += refkernels::psi1(tau, 0.0, pulse, link, mesh);
            acc += refkernels::psi2(tau, 0.0, pulse, link, mesh);
        }
        std::printf("%-46s %10.3f %12.4e\n", "reference transcription, 18 kernels @101^2",
                    seconds_since(t0), acc);
    }

    // shared-grid engine: same work plus the full delay table
    for (int threads : {1, 0}) {
        set_threads(threads == 0 ? 8 : 1);
        const char* label = threads == 1 ? "engine table M=50 @101^2, 1 thread"
                                         : "engine table M=50 @101^2, all threads";
        QuadratureConfig q;
        q.points_per_axis = 101;
        auto t0 = clk::now();
        auto grid = std::make_shared<const KernelGrid>(build_kernel_grid(0.0, pulse, link, q));
        KernelTable t = compute_kernel_table(grid, 50, false);
        std::printf("%-46s %10.3f %12.4e\n", label, seconds_since(t0), t.at(t.chi1, 5));
    }

    // production-resolution table with the double-delay kernels
    {
        QuadratureConfig q;
        auto t0 = clk::now();
        auto grid = std::make_shared<const KernelGrid>(build_kernel_grid(0.0, pulse, link, q));
        KernelTable t = compute_kernel_table(grid, 50, true);
        std::printf("%-46s %10.3f %12.4e\n", "engine table M=50 @401^2 with double sums",
                    seconds_since(t0), t.at2(t.psi3, 3, 7));
    }

    // one split-step span
    {
        ShapingScheme scheme;
        scheme.composition = make_composition({0.4, 0.3, 0.2, 0.1}, {1, 3, 5, 7}, 100);
        scheme.mapping_h = 4;
        scheme.power_w = 1e-3;
        SimConfig sim;
        sim.num_symbols = 1 << 16;
        // power-of-two sample counts keep the transforms on FFTW's fast path
        SymbolStream stream = generate_stream(scheme, sim.num_symbols / 25 + 1, 1);
        stream.x_pol.resize(sim.num_symbols);
        stream.y_pol.resize(sim.num_symbols);
        Waveform wave = transmit(stream, sim, pulse);
        auto t0 = clk::now();
        propagate_span(wave, link, sim);
        std::printf("%-46s %10.3f %12.4e\n", "split-step span, 2^17 samples, 0.1 km steps",
                    seconds_since(t0), wave.mean_power_x());
    }
    return 0;
}
