#pragma once

#include "sweeplink/overlap.hpp"

#include <cstdint>
#include <optional>
#include <vector>

// Plans one sweep frequency that keeps the reflected crosstalk of every
// reflector in a distribution network out of the signal band at once.

namespace sweeplink {

struct OdnProfile {
    std::vector<ReflectionPoint> reflections; // at least one entry
    double group_index = 1.4682;              // fiber group index, >= 1
};

void validate(const OdnProfile& odn);

struct ScanGrid {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
    double f_step_hz = 0.0;
};

struct PerReflectionPlan {
    double reach_m = 0.0;
    double delay_s = 0.0;
    double f_opt_hz = 0.0;
    std::vector<FrequencyInterval> sfr; // sweep frequencies with overlap <= threshold
};

struct SweepPlan {
    std::vector<PerReflectionPlan> per_reflection;
    std::vector<FrequencyInterval> common;     // intersection across reflections
    std::optional<double> kappa_hz;            // chosen sweep frequency, absent when common empty
    double worst_overlap = 0.0;                // max oracle probability at kappa across reflections
    double max_required_sweep_freq_hz = 0.0;   // largest per-reflection f_opt (closest reflector)
};

// Intersection of two interval lists (half-open semantics); fragments
// narrower than merge_tol are dropped and near-touching pieces fused.
std::vector<FrequencyInterval> intersect_intervals(const std::vector<FrequencyInterval>& a,
                                                   const std::vector<FrequencyInterval>& b,
                                                   double merge_tol);

// bandwidth + guard; divide by the sweep deviation for the effective band
// share the planner compares against 1/2.
double effective_upper_frequency(double bandwidth_hz, double lock_guard_hz);

// Per-reflection sweep-frequency ranges, their intersection, and kappa at the
// midpoint of the widest common interval (ties resolved toward the lowest
// frequency). worst_overlap is evaluated at kappa with the sampling oracle.
SweepPlan plan_common_sweep(const OdnProfile& odn, const OverlapSpec& spec, double ramp_fraction,
                            double threshold, const ScanGrid& grid,
                            std::uint32_t oracle_samples = 65536);

enum class MapAxis { pi_eff, reach };

struct OverlapMap {
    MapAxis axis = MapAxis::pi_eff;
    std::vector<double> f_hz;     // sweep-frequency grid (columns)
    std::vector<double> axis_values; // Pi_eff or reach_m (rows)
    std::vector<std::vector<double>> probability; // [row][column]
};

// Overlap probability across a sweep-frequency grid; rows vary the effective
// band share Pi_eff (f_upper scaled to pi * deviation, guard folded in). For
// multi-reflection profiles each cell takes the worst case across reflectors.
OverlapMap overlap_map_pi(const OdnProfile& odn, const OverlapSpec& spec,
                          const std::vector<double>& pi_values, const ScanGrid& grid,
                          double ramp_fraction, std::uint32_t oracle_samples = 4096);

// Rows vary reach at a fixed OverlapSpec.
OverlapMap overlap_map_reach(const std::vector<double>& reaches_m, double group_index,
                             const OverlapSpec& spec, const ScanGrid& grid, double ramp_fraction,
                             std::uint32_t oracle_samples = 4096);

} // namespace sweeplink
