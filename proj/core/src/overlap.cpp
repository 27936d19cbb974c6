#include "sweeplink/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sweeplink {

namespace {

double frac(double x)
{
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

bool collides(double dv, const OverlapSpec& spec)
{
    return dv > -spec.threshold_below() && dv < spec.threshold_above();
}

} // namespace

void validate(const OverlapSpec& s)
{
    if (!(s.f_upper_hz >= 0.0))
        throw std::invalid_argument("OverlapSpec: f_upper_hz must be >= 0");
    if (!(s.lock_guard_hz >= 0.0))
        throw std::invalid_argument("OverlapSpec: lock_guard_hz must be >= 0");
    if (!(s.deviation_hz > 0.0))
        throw std::invalid_argument("OverlapSpec: deviation_hz must be > 0");
}

double round_trip_delay(double reach_m, double group_index)
{
    if (!(reach_m > 0.0))
        throw std::invalid_argument("round_trip_delay: reach_m must be > 0, got " +
                                    std::to_string(reach_m));
    if (!(group_index >= 1.0))
        throw std::invalid_argument("round_trip_delay: group_index must be >= 1, got " +
                                    std::to_string(group_index));
    return 2.0 * reach_m * group_index / kSpeedOfLight;
}

double displacement(const SweepWaveform& w, double delay_s, double t_s)
{
    return instantaneous_frequency(w, t_s - delay_s) - instantaneous_frequency(w, t_s);
}

double optimal_sweep_frequency(double delay_s)
{
    if (!(delay_s > 0.0))
        throw std::invalid_argument("optimal_sweep_frequency: delay must be > 0");
    return 1.0 / (2.0 * delay_s);
}

OverlapResult overlap_probability_analytic(const SweepWaveform& w, double delay_s,
                                           const OverlapSpec& spec)
{
    validate(w);
    validate(spec);
    if (w.ramp_fraction != 0.0)
        throw std::invalid_argument(
            "overlap_probability_analytic: closed form requires ramp_fraction == 0");
    if (!(delay_s >= 0.0))
        throw std::invalid_argument("overlap_probability_analytic: delay must be >= 0");

    const double dev = w.deviation_hz;
    const double delta = frac(delay_s * w.sweep_freq_hz);

    OverlapResult res;
    if (delta == 0.0) {
        // Replica coincides with the signal for the whole period.
        res.min_displacement = 0.0;
        res.max_displacement = 0.0;
        res.probability = collides(0.0, spec) ? 1.0 : 0.0;
    } else {
        const double below = dev * delta;         // |dv| while both copies ride one ramp
        const double above = dev * (1.0 - delta); // |dv| across the flyback
        res.min_displacement = std::min(below, above);
        res.max_displacement = std::max(below, above);
        res.probability = (1.0 - delta) * (below < spec.threshold_below() ? 1.0 : 0.0) +
                          delta * (above < spec.threshold_above() ? 1.0 : 0.0);
    }

    // Insufficient swing: no delay clears both branches, so the crosstalk
    // cannot be held outside the band at any sweep frequency.
    const double mean_threshold = 0.5 * (spec.threshold_below() + spec.threshold_above());
    if (mean_threshold >= 0.5 * dev) res.probability = 1.0;

    return res;
}

OverlapResult overlap_probability_oracle(const SweepWaveform& w, double delay_s,
                                         const OverlapSpec& spec, std::uint32_t n_samples)
{
    validate(w);
    validate(spec);
    if (n_samples < 1024)
        throw std::invalid_argument("overlap_probability_oracle: n_samples must be >= 1024");
    if (!(delay_s >= 0.0))
        throw std::invalid_argument("overlap_probability_oracle: delay must be >= 0");

    const double period = w.period_s();
    std::uint32_t hits = 0;
    double min_abs = 0.0;
    double max_abs = 0.0;
    for (std::uint32_t i = 0; i < n_samples; ++i) {
        const double t = (i + 0.5) * period / n_samples;
        const double dv = displacement(w, delay_s, t);
        const double a = std::abs(dv);
        if (i == 0) {
            min_abs = max_abs = a;
        } else {
            min_abs = std::min(min_abs, a);
            max_abs = std::max(max_abs, a);
        }
        if (collides(dv, spec)) ++hits;
    }

    OverlapResult res;
    res.probability = static_cast<double>(hits) / n_samples;
    res.min_displacement = min_abs;
    res.max_displacement = max_abs;
    return res;
}

std::vector<FrequencyInterval> sweep_frequency_range(double delay_s, const OverlapSpec& spec,
                                                     double ramp_fraction, double threshold,
                                                     double f_lo_hz, double f_hi_hz,
                                                     double f_step_hz,
                                                     std::uint32_t oracle_samples)
{
    validate(spec);
    if (!(delay_s > 0.0))
        throw std::invalid_argument("sweep_frequency_range: delay must be > 0");
    if (!(f_lo_hz > 0.0 && f_hi_hz > f_lo_hz))
        throw std::invalid_argument("sweep_frequency_range: need 0 < f_lo < f_hi");
    if (!(f_step_hz > 0.0))
        throw std::invalid_argument("sweep_frequency_range: f_step must be > 0");
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument("sweep_frequency_range: threshold must lie in [0, 1]");

    auto probability = [&](double f) {
        SweepWaveform w{spec.deviation_hz, f, ramp_fraction, 0.0};
        if (ramp_fraction == 0.0)
            return overlap_probability_analytic(w, delay_s, spec).probability;
        return overlap_probability_oracle(w, delay_s, spec, oracle_samples).probability;
    };
    auto passes = [&](double f) { return probability(f) <= threshold; };

    std::vector<double> grid;
    for (double f = f_lo_hz; f < f_hi_hz; f += f_step_hz) grid.push_back(f);
    grid.push_back(f_hi_hz);

    const double tol = f_step_hz / 100.0;
    // Bisection between a failing and a passing frequency; returns the edge
    // to within tol.
    auto refine = [&](double f_fail, double f_pass) {
        while (std::abs(f_pass - f_fail) > tol) {
            const double mid = 0.5 * (f_fail + f_pass);
            if (passes(mid))
                f_pass = mid;
            else
                f_fail = mid;
        }
        return 0.5 * (f_fail + f_pass);
    };

    std::vector<FrequencyInterval> out;
    std::size_t i = 0;
    while (i < grid.size()) {
        if (!passes(grid[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < grid.size() && passes(grid[j + 1])) ++j;
        FrequencyInterval iv;
        iv.lo_hz = (i == 0) ? grid.front() : refine(grid[i - 1], grid[i]);
        iv.hi_hz = (j + 1 == grid.size()) ? grid.back() : refine(grid[j + 1], grid[j]);
        out.push_back(iv);
        i = j + 1;
    }
    return out;
}

} // namespace sweeplink
