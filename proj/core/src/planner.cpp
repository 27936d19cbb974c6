#include "sweeplink/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sweeplink {

namespace {

std::vector<double> make_grid(const ScanGrid& g)
{
    if (!(g.f_lo_hz > 0.0 && g.f_hi_hz > g.f_lo_hz && g.f_step_hz > 0.0))
        throw std::invalid_argument("ScanGrid: need 0 < f_lo < f_hi and f_step > 0");
    std::vector<double> grid;
    for (double f = g.f_lo_hz; f < g.f_hi_hz; f += g.f_step_hz) grid.push_back(f);
    grid.push_back(g.f_hi_hz);
    return grid;
}

double cell_probability(double delay_s, const OverlapSpec& spec, double ramp_fraction, double f_hz,
                        std::uint32_t oracle_samples)
{
    SweepWaveform w{spec.deviation_hz, f_hz, ramp_fraction, 0.0};
    if (ramp_fraction == 0.0) return overlap_probability_analytic(w, delay_s, spec).probability;
    return overlap_probability_oracle(w, delay_s, spec, oracle_samples).probability;
}

std::vector<FrequencyInterval> tidy(std::vector<FrequencyInterval> xs, double merge_tol)
{
    std::sort(xs.begin(), xs.end(),
              [](const FrequencyInterval& p, const FrequencyInterval& q) { return p.lo_hz < q.lo_hz; });
    std::vector<FrequencyInterval> out;
    for (const auto& iv : xs) {
        if (!out.empty() && iv.lo_hz - out.back().hi_hz < merge_tol)
            out.back().hi_hz = std::max(out.back().hi_hz, iv.hi_hz);
        else
            out.push_back(iv);
    }
    std::erase_if(out, [&](const FrequencyInterval& iv) { return iv.width() <= merge_tol; });
    return out;
}

} // namespace

void validate(const OdnProfile& odn)
{
    if (odn.reflections.empty())
        throw std::invalid_argument("OdnProfile: at least one reflection required");
    if (!(odn.group_index >= 1.0))
        throw std::invalid_argument("OdnProfile: group_index must be >= 1");
    for (std::size_t i = 0; i < odn.reflections.size(); ++i) {
        const auto& r = odn.reflections[i];
        if (!(r.reach_m > 0.0))
            throw std::invalid_argument("OdnProfile: reflections[" + std::to_string(i) +
                                        "].reach_m must be > 0");
        if (!(r.reflectance_db <= 0.0))
            throw std::invalid_argument("OdnProfile: reflections[" + std::to_string(i) +
                                        "].reflectance_db must be <= 0");
    }
}

std::vector<FrequencyInterval> intersect_intervals(const std::vector<FrequencyInterval>& a,
                                                   const std::vector<FrequencyInterval>& b,
                                                   double merge_tol)
{
    std::vector<FrequencyInterval> raw;
    std::size_t i = 0, j = 0;
    auto as = tidy(a, 0.0);
    auto bs = tidy(b, 0.0);
    while (i < as.size() && j < bs.size()) {
        const double lo = std::max(as[i].lo_hz, bs[j].lo_hz);
        const double hi = std::min(as[i].hi_hz, bs[j].hi_hz);
        if (hi > lo) raw.push_back({lo, hi});
        if (as[i].hi_hz < bs[j].hi_hz)
            ++i;
        else
            ++j;
    }
    return tidy(std::move(raw), merge_tol);
}

double effective_upper_frequency(double bandwidth_hz, double lock_guard_hz)
{
    if (!(bandwidth_hz >= 0.0 && lock_guard_hz >= 0.0))
        throw std::invalid_argument("effective_upper_frequency: arguments must be >= 0");
    return bandwidth_hz + lock_guard_hz;
}

SweepPlan plan_common_sweep(const OdnProfile& odn, const OverlapSpec& spec, double ramp_fraction,
                            double threshold, const ScanGrid& grid, std::uint32_t oracle_samples)
{
    validate(odn);
    validate(spec);

    SweepPlan plan;
    const double merge_tol = grid.f_step_hz / 100.0;
    bool first = true;
    for (const auto& refl : odn.reflections) {
        PerReflectionPlan p;
        p.reach_m = refl.reach_m;
        p.delay_s = round_trip_delay(refl.reach_m, odn.group_index);
        p.f_opt_hz = optimal_sweep_frequency(p.delay_s);
        p.sfr = sweep_frequency_range(p.delay_s, spec, ramp_fraction, threshold, grid.f_lo_hz,
                                      grid.f_hi_hz, grid.f_step_hz, oracle_samples);
        plan.max_required_sweep_freq_hz = std::max(plan.max_required_sweep_freq_hz, p.f_opt_hz);
        plan.common = first ? p.sfr : intersect_intervals(plan.common, p.sfr, merge_tol);
        first = false;
        plan.per_reflection.push_back(std::move(p));
    }

    if (!plan.common.empty()) {
        const auto widest =
            std::max_element(plan.common.begin(), plan.common.end(),
                             [](const FrequencyInterval& p, const FrequencyInterval& q) {
                                 if (p.width() != q.width()) return p.width() < q.width();
                                 return p.lo_hz > q.lo_hz; // tie: prefer the lower band
                             });
        const double kappa = 0.5 * (widest->lo_hz + widest->hi_hz);
        plan.kappa_hz = kappa;
        double worst = 0.0;
        SweepWaveform w{spec.deviation_hz, kappa, ramp_fraction, 0.0};
        for (const auto& p : plan.per_reflection)
            worst = std::max(
                worst, overlap_probability_oracle(w, p.delay_s, spec, oracle_samples).probability);
        plan.worst_overlap = worst;
    }
    return plan;
}

OverlapMap overlap_map_pi(const OdnProfile& odn, const OverlapSpec& spec,
                          const std::vector<double>& pi_values, const ScanGrid& grid,
                          double ramp_fraction, std::uint32_t oracle_samples)
{
    validate(odn);
    validate(spec);
    if (pi_values.empty()) throw std::invalid_argument("overlap_map_pi: pi_values empty");

    OverlapMap map;
    map.axis = MapAxis::pi_eff;
    map.f_hz = make_grid(grid);
    map.axis_values = pi_values;
    std::vector<double> delays;
    for (const auto& r : odn.reflections)
        delays.push_back(round_trip_delay(r.reach_m, odn.group_index));

    for (double pi : pi_values) {
        if (!(pi >= 0.0)) throw std::invalid_argument("overlap_map_pi: pi values must be >= 0");
        OverlapSpec row = spec;
        row.f_upper_hz = pi * spec.deviation_hz; // guard folded into the row's share
        row.lock_guard_hz = 0.0;
        row.crosstalk_bandwidth_hz = -1.0;
        std::vector<double> cells;
        cells.reserve(map.f_hz.size());
        for (double f : map.f_hz) {
            double worst = 0.0;
            for (double d : delays)
                worst = std::max(worst, cell_probability(d, row, ramp_fraction, f, oracle_samples));
            cells.push_back(worst);
        }
        map.probability.push_back(std::move(cells));
    }
    return map;
}

OverlapMap overlap_map_reach(const std::vector<double>& reaches_m, double group_index,
                             const OverlapSpec& spec, const ScanGrid& grid, double ramp_fraction,
                             std::uint32_t oracle_samples)
{
    validate(spec);
    if (reaches_m.empty()) throw std::invalid_argument("overlap_map_reach: reaches empty");

    OverlapMap map;
    map.axis = MapAxis::reach;
    map.f_hz = make_grid(grid);
    map.axis_values = reaches_m;
    for (double reach : reaches_m) {
        const double d = round_trip_delay(reach, group_index);
        std::vector<double> cells;
        cells.reserve(map.f_hz.size());
        for (double f : map.f_hz)
            cells.push_back(cell_probability(d, spec, ramp_fraction, f, oracle_samples));
        map.probability.push_back(std::move(cells));
    }
    return map;
}

} // namespace sweeplink
