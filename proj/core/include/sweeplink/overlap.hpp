#pragma once

#include "sweeplink/waveform.hpp"

#include <cstdint>
#include <vector>

// Spectral-overlap statistics between a swept carrier and its delayed
// replica returning from a fiber reflection.
//
// The replica is physically delayed: nu_FR(t) = nu_S(t - delay). Over one
// period of an ideal sawtooth the signed displacement nu_FR - nu_S takes two
// values, -deviation*delta for a fraction (1 - delta) of the period and
// +deviation*(1 - delta) for a fraction delta, with delta = frac(delay/T).

namespace sweeplink {

struct ReflectionPoint {
    double reach_m = 0.0;         // distance between swept source and reflector, > 0
    double reflectance_db = 0.0;  // return loss, <= 0
};

struct OverlapSpec {
    double f_upper_hz = 0.0;            // uppermost signal frequency above the carrier, > 0
    double lock_guard_hz = 0.0;         // extra band protecting injection locking, >= 0
    double deviation_hz = 0.0;          // sweep swing the displacement is compared against, > 0
    double crosstalk_bandwidth_hz = -1; // crosstalk spectral width; < 0 means "same as f_upper"

    double crosstalk_width() const
    {
        return crosstalk_bandwidth_hz < 0.0 ? f_upper_hz : crosstalk_bandwidth_hz;
    }
    // One-sided clearance thresholds. Crosstalk below the signal collides when
    // the displacement magnitude stays under f_x + guard, above it when under
    // f_u + guard; both collapse to f_upper + lock_guard at the default width.
    double threshold_below() const { return crosstalk_width() + lock_guard_hz; }
    double threshold_above() const { return f_upper_hz + lock_guard_hz; }
};

void validate(const OverlapSpec& s);

struct OverlapResult {
    double probability = 0.0;      // time fraction of one period spent overlapped
    double min_displacement = 0.0; // smallest |nu_FR - nu_S| observed, Hz
    double max_displacement = 0.0; // largest |nu_FR - nu_S| observed, Hz
};

struct FrequencyInterval {
    double lo_hz = 0.0;
    double hi_hz = 0.0;
    double width() const { return hi_hz - lo_hz; }
};

// 2 * reach * group_index / c. reach > 0, group_index >= 1.
double round_trip_delay(double reach_m, double group_index);

// Signed spectral displacement nu_S(t - delay) - nu_S(t) at time t.
double displacement(const SweepWaveform& w, double delay_s, double t_s);

// Sweep frequency maximizing the worst-case displacement over a period
// (delta = 1/2, both branches at deviation/2).
double optimal_sweep_frequency(double delay_s);

// Closed-form overlap statistics for the ideal sawtooth (ramp_fraction must
// be 0, otherwise throws). In the insufficient-swing regime, where no delay
// can clear both branches (mean one-sided threshold >= deviation/2), the
// probability is reported as 1: the swing cannot push the crosstalk past the
// signal band at any sweep frequency.
OverlapResult overlap_probability_analytic(const SweepWaveform& w, double delay_s,
                                           const OverlapSpec& spec);

// Brute-force estimate on a deterministic midpoint grid over one period.
// Valid for any ramp_fraction. n_samples >= 1024.
OverlapResult overlap_probability_oracle(const SweepWaveform& w, double delay_s,
                                         const OverlapSpec& spec, std::uint32_t n_samples);

// All maximal sweep-frequency intervals inside [f_lo, f_hi] where the overlap
// probability stays <= threshold. Grid scan at f_step followed by bisection
// refinement of each edge to f_step/100. ramp_fraction 0 evaluates the closed
// form; otherwise the oracle with oracle_samples points.
std::vector<FrequencyInterval> sweep_frequency_range(double delay_s, const OverlapSpec& spec,
                                                     double ramp_fraction, double threshold,
                                                     double f_lo_hz, double f_hi_hz,
                                                     double f_step_hz,
                                                     std::uint32_t oracle_samples = 65536);

} // namespace sweeplink
