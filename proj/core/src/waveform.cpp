#include "sweeplink/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sweeplink {

namespace {

double frac(double x)
{
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0; // floor rounding at exact integers
    return f;
}

// Integral of the unit-peak waveform over [0, p] within one period, p in [0, 1].
// Rising branch area grows as p^2, falling branch closes the triangle; the
// full-period value is 1/2 for every ramp_fraction.
double unit_phase_integral(double p, double r)
{
    const double rise = 1.0 - r;
    if (p <= rise) return p * p / (2.0 * rise);
    const double q = 1.0 - p; // distance to period end, in [0, r)
    return rise / 2.0 + (r * r - q * q) / (2.0 * r);
}

} // namespace

void validate(const SweepWaveform& w)
{
    if (!(w.deviation_hz > 0.0))
        throw std::invalid_argument("SweepWaveform: deviation_hz must be > 0, got " +
                                    std::to_string(w.deviation_hz));
    if (!(w.sweep_freq_hz > 0.0))
        throw std::invalid_argument("SweepWaveform: sweep_freq_hz must be > 0, got " +
                                    std::to_string(w.sweep_freq_hz));
    if (!(w.ramp_fraction >= 0.0 && w.ramp_fraction < 0.5))
        throw std::invalid_argument("SweepWaveform: ramp_fraction must lie in [0, 0.5), got " +
                                    std::to_string(w.ramp_fraction));
    if (!(w.phase_offset >= 0.0 && w.phase_offset < 1.0))
        throw std::invalid_argument("SweepWaveform: phase_offset must lie in [0, 1), got " +
                                    std::to_string(w.phase_offset));
}

double instantaneous_frequency(const SweepWaveform& w, double t_s)
{
    const double p = frac(t_s * w.sweep_freq_hz + w.phase_offset);
    const double r = w.ramp_fraction;
    if (p < 1.0 - r) return w.deviation_hz * p / (1.0 - r);
    return w.deviation_hz * (1.0 - p) / r;
}

double accumulated_phase(const SweepWaveform& w, double t0_s, double t1_s)
{
    if (t1_s < t0_s)
        throw std::invalid_argument("accumulated_phase: t1 must be >= t0");
    const double r = w.ramp_fraction;
    // Antiderivative as a function of unwrapped period position x:
    // whole periods contribute 1/2 each, the remainder via the unit integral.
    auto antiderivative = [&](double x) {
        return 0.5 * std::floor(x) + unit_phase_integral(frac(x), r);
    };
    const double x0 = t0_s * w.sweep_freq_hz + w.phase_offset;
    const double x1 = t1_s * w.sweep_freq_hz + w.phase_offset;
    return w.deviation_hz * w.period_s() * (antiderivative(x1) - antiderivative(x0));
}

} // namespace sweeplink
