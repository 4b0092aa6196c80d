#include <benchmark/benchmark.h>

#include "zrange/birman_schwinger.hpp"
#include "zrange/effective_operator.hpp"
#include "zrange/free_resolvent.hpp"
#include "zrange/konno_kuroda.hpp"
#include "zrange/spectrum.hpp"
#include "zrange/three_body_2d.hpp"

using namespace zrange;

namespace {

RadialGrid log_grid(int n) { return build_grid(n, 100.0, Spacing::logarithmic, 1e-4); }

void BM_KineticRoot(benchmark::State& st) {
    const auto g = log_grid(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kinetic_root(g, 3, 1.0).sigma.data());
}
BENCHMARK(BM_KineticRoot)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ContactImageSpectrum(benchmark::State& st) {
    const auto g = log_grid(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        const auto op = effective_operator(ImageKind::contact_image, 2.8, 3, g);
        benchmark::DoNotOptimize(eig_spectrum(op.entries).count_negative);
    }
}
BENCHMARK(BM_ContactImageSpectrum)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BsMatrix(benchmark::State& st) {
    const auto g = build_grid(static_cast<int>(st.range(0)), 12.0, Spacing::linear);
    const auto h0 = discretize_h0(g, 3).entries;
    const auto vd = potential_diagonal(scale_potential({Profile::gaussian, 2.0, 1.0}, ScalingLaw::unscaled(3)), g, 3);
    for (auto _ : st) benchmark::DoNotOptimize(bs_matrix(vd, h0, z_min).data());
}
BENCHMARK(BM_BsMatrix)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_KonnoKuroda(benchmark::State& st) {
    const auto g = build_grid(static_cast<int>(st.range(0)), 6.0, Spacing::linear);
    const auto v = scale_potential({Profile::gaussian, 3.0, 1.0}, ScalingLaw::unscaled(3));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_resolvent_diff(v, 1.0, g).min_singular);
}
BENCHMARK(BM_KonnoKuroda)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_HyperradialReduce(benchmark::State& st) {
    std::vector<double> r;
    for (int k = 0; k <= 16; ++k) r.push_back(0.01 * std::pow(10.0, k / 4.0));
    for (auto _ : st) benchmark::DoNotOptimize(hyperradial_reduce({}, r).exponent);
}
BENCHMARK(BM_HyperradialReduce)->Unit(benchmark::kMillisecond);

void BM_MassSweep(benchmark::State& st) {
    const auto g = log_grid(241);
    for (auto _ : st) benchmark::DoNotOptimize(mass_sweep_2d({1, 2, 4, 8, 16}, 1.0, g).dilation_error);
}
BENCHMARK(BM_MassSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
