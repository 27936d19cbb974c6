#include <benchmark/benchmark.h>

#include "sweeplink/linksim.hpp"
#include "sweeplink/ofdm.hpp"
#include "sweeplink/overlap.hpp"
#include "sweeplink/planner.hpp"
#include "sweeplink/spectrum.hpp"

#include <cmath>
#include <vector>

using namespace sweeplink;

namespace {

OverlapSpec default_spec()
{
    OverlapSpec spec;
    spec.f_upper_hz = 125e6;
    spec.lock_guard_hz = 100e6;
    spec.deviation_hz = 1.55e9;
    return spec;
}

SweepWaveform default_sweep()
{
    SweepWaveform w;
    w.deviation_hz = 1.55e9;
    w.sweep_freq_hz = optimal_sweep_frequency(round_trip_delay(4300.0, 1.4682));
    return w;
}

Scenario default_scenario()
{
    Scenario sc;
    sc.odn.reflections = {{4300.0, 0.0}};
    sc.sweep = default_sweep();
    return sc;
}

void overlap_analytic(benchmark::State& state)
{
    SweepWaveform w = default_sweep();
    OverlapSpec spec = default_spec();
    double delay = round_trip_delay(4300.0, 1.4682);
    for (auto _ : state)
        benchmark::DoNotOptimize(overlap_probability_analytic(w, delay, spec));
}
BENCHMARK(overlap_analytic);

void overlap_oracle(benchmark::State& state)
{
    SweepWaveform w = default_sweep();
    OverlapSpec spec = default_spec();
    double delay = round_trip_delay(4300.0, 1.4682);
    auto n = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(overlap_probability_oracle(w, delay, spec, n));
}
BENCHMARK(overlap_oracle)->Arg(4096)->Arg(65536);

void usable_interval_scan(benchmark::State& state)
{
    OverlapSpec spec = default_spec();
    double delay = round_trip_delay(4300.0, 1.4682);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            sweep_frequency_range(delay, spec, 0.0, 1.0 / 32.0, 1e3, 45e3, 50.0));
}
BENCHMARK(usable_interval_scan)->Unit(benchmark::kMillisecond);

void common_plan(benchmark::State& state)
{
    OdnProfile odn;
    odn.reflections = {{4300.0, 0.0}, {7000.0, 0.0}};
    ScanGrid grid{1e3, 45e3, 50.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            plan_common_sweep(odn, default_spec(), 0.0, 1.0 / 32.0, grid, 4096));
}
BENCHMARK(common_plan)->Unit(benchmark::kMillisecond);

void ofdm_roundtrip(benchmark::State& state)
{
    OfdmConfig cfg;
    auto n_symbols = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        OfdmFrame frame = ofdm_modulate(cfg, 4e9, n_symbols, 1);
        std::vector<double> rf(frame.envelope.size());
        for (std::size_t i = 0; i < rf.size(); ++i) rf[i] = frame.envelope[i].real();
        benchmark::DoNotOptimize(ofdm_demodulate_evm(frame, rf));
    }
}
BENCHMARK(ofdm_roundtrip)->Arg(16)->Arg(92)->Unit(benchmark::kMillisecond);

void link_case(benchmark::State& state)
{
    Scenario sc = default_scenario();
    sc.duration_periods = 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(run_single_case(sc, 1));
}
BENCHMARK(link_case)->Unit(benchmark::kMillisecond);

void welch_estimate(benchmark::State& state)
{
    std::vector<double> x(1 << 20);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::cos(0.1 * static_cast<double>(i));
    for (auto _ : state) benchmark::DoNotOptimize(welch_psd(x, 4e9, 4096));
}
BENCHMARK(welch_estimate)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
