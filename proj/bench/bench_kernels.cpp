#include <benchmark/benchmark.h>

#include "gpq/evolution.hpp"
#include "gpq/grid.hpp"
#include "gpq/solitons.hpp"

using namespace gpq;

namespace {

CVec field(std::size_t n) {
    CVec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = {std::tanh(1e-3 * double(i) - 2.0), 0.1 * std::sin(1e-2 * double(i))};
    return u;
}

template <Exec E>
void BM_quintic(benchmark::State& st) {
    ExecScope s(E);
    const auto n = static_cast<std::size_t>(st.range(0));
    CVec a = field(n), b = field(n), out(n);
    for (auto _ : st) {
        kernels::quintic_midpoint(a.data(), b.data(), out.data(), n);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Exec E>
void BM_d2(benchmark::State& st) {
    ExecScope s(E);
    const auto n = static_cast<std::size_t>(st.range(0));
    CVec a = field(n), out(n);
    for (auto _ : st) {
        kernels::d2_interior(a.data(), out.data(), n, 1e-2);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Exec E>
void BM_simpson(benchmark::State& st) {
    ExecScope s(E);
    const auto n = static_cast<std::size_t>(st.range(0));
    RVec f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-1e-6 * double(i * i));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::simpson(f.data(), n, 1e-2));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Exec E>
void BM_cn_step(benchmark::State& st) {
    ExecScope s(E);
    const Grid1D g = make_grid(30.0, static_cast<int>(st.range(0)));
    SchemeConfig cfg;
    Stepper stepper(g, cfg);
    CVec u = dark_profile(g, black_params());
    double t = 0.0;
    for (auto _ : st) {
        stepper.step(u, t);
        t += cfg.dt;
    }
    st.counters["picard"] = stepper.last_iterations();
}

}  // namespace

BENCHMARK(BM_quintic<Exec::serial>)->Arg(4097)->Arg(65537);
BENCHMARK(BM_quintic<Exec::parallel>)->Arg(4097)->Arg(65537);
BENCHMARK(BM_d2<Exec::serial>)->Arg(4097)->Arg(65537);
BENCHMARK(BM_d2<Exec::parallel>)->Arg(4097)->Arg(65537);
BENCHMARK(BM_simpson<Exec::serial>)->Arg(4097)->Arg(65537);
BENCHMARK(BM_simpson<Exec::parallel>)->Arg(4097)->Arg(65537);
BENCHMARK(BM_cn_step<Exec::serial>)->Arg(4097);
BENCHMARK(BM_cn_step<Exec::parallel>)->Arg(4097);

BENCHMARK_MAIN();
