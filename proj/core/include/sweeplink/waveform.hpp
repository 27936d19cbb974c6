#pragma once

// Periodic asymmetric-triangle (sawtooth) optical frequency sweep.
//
// The instantaneous frequency rises linearly from 0 to deviation_hz over the
// first (1 - ramp_fraction) of each period and falls back to 0 over the
// remaining ramp_fraction. ramp_fraction = 0 degenerates to the ideal
// sawtooth with an instantaneous flyback.

namespace sweeplink {

inline constexpr double kSpeedOfLight = 299792458.0; // vacuum, m/s

struct SweepWaveform {
    double deviation_hz = 0.0;  // peak-to-peak frequency swing, > 0
    double sweep_freq_hz = 0.0; // repetition rate 1/T_per, > 0
    double ramp_fraction = 0.0; // falling-ramp share of the period, [0, 0.5)
    double phase_offset = 0.0;  // start position within the period, [0, 1)

    double period_s() const { return 1.0 / sweep_freq_hz; }
};

// Throws std::invalid_argument when any field is out of range.
void validate(const SweepWaveform& w);

// Frequency above the sweep floor at time t, in [0, deviation_hz].
// Defined for all t (the waveform is periodic on the whole axis).
double instantaneous_frequency(const SweepWaveform& w, double t_s);

// Integral of instantaneous_frequency over [t0, t1], in cycles.
// Piecewise-analytic (no quadrature); exact additivity over subintervals.
// Requires t1 >= t0.
double accumulated_phase(const SweepWaveform& w, double t0_s, double t1_s);

} // namespace sweeplink
