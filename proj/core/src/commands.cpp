#include "sweeplink/commands.hpp"

#include "sweeplink/csv.hpp"
#include "sweeplink/spectrum.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <stdexcept>

namespace sweeplink {

namespace {

std::string join_path(const std::string& dir, const char* name)
{
    return (std::filesystem::path(dir) / name).string();
}

void log_line(const CommandContext& ctx, const std::string& line)
{
    if (ctx.log) *ctx.log << line << "\n";
}

// The case the scenario's own reflection/mitigation settings correspond to,
// so single-run artifacts line up with the matching experiment row.
LinkCase configured_case(const Scenario& sc)
{
    bool with_fr = !sc.odn.reflections.empty();
    if (with_fr) return sc.mitigation_enabled ? LinkCase::fr_swept : LinkCase::fr_static;
    return sc.mitigation_enabled ? LinkCase::nofr_swept : LinkCase::nofr_static;
}

void write_summary_csv(const CommandContext& ctx, const std::vector<CasePoint>& points)
{
    CsvTable t({"case", "osrr_db", "budget_db", "evm_avg_pct", "penalty_pct",
                "lock_fraction"});
    for (const CasePoint& p : points)
        t.add_row({case_name(p.kase), csv_number(p.osrr_db), csv_number(p.budget_db),
                   csv_number(p.evm_avg_pct), csv_number(p.penalty_pct),
                   csv_number(p.lock_fraction)});
    write_text_file(join_path(ctx.out_dir, "summary.csv"), t.str());
}

void log_summary(const CommandContext& ctx, const std::vector<CasePoint>& points,
                 const RunConfig& cfg)
{
    double limit = cfg.ofdm_constellation == Constellation::qam16
                       ? cfg.link_evm_limit_qam16_pct
                       : cfg.link_evm_limit_qpsk_pct;
    for (const CasePoint& p : points) {
        std::string line = std::string(case_name(p.kase)) + " osrr=" +
                           csv_number(p.osrr_db) + " dB budget=" + csv_number(p.budget_db) +
                           " dB";
        if (p.failed) {
            line += " demodulation failed: " + p.evm.failure_reason;
        } else {
            line += " evm_avg=" + csv_number(p.evm_avg_pct) + "% penalty=" +
                    csv_number(p.penalty_pct) + " pts lock=" + csv_number(p.lock_fraction);
            line += p.evm_avg_pct <= limit ? " (within " : " (exceeds ";
            line += csv_number(limit) + "% limit)";
        }
        log_line(ctx, line);
    }
}

} // namespace

int cmd_plan(const CommandContext& ctx)
{
    OdnProfile odn = make_odn(ctx.cfg);
    OverlapSpec spec = make_overlap_spec(ctx.cfg);
    ScanGrid grid = make_scan_grid(ctx.cfg);
    SweepPlan plan = plan_common_sweep(odn, spec, ctx.cfg.sweep_ramp_fraction,
                                       ctx.cfg.overlap_threshold, grid,
                                       ctx.cfg.scan_oracle_samples);

    // Common-interval columns repeat the interval holding the chosen
    // frequency on every row; they stay empty when no interval survives.
    FrequencyInterval chosen{};
    bool has_common = plan.kappa_hz.has_value();
    if (has_common)
        for (const FrequencyInterval& iv : plan.common)
            if (*plan.kappa_hz >= iv.lo_hz && *plan.kappa_hz <= iv.hi_hz) chosen = iv;

    CsvTable t({"reach_m", "f_opt_hz", "sfr_lo_hz", "sfr_hi_hz", "common_lo_hz",
                "common_hi_hz", "kappa_hz", "worst_overlap"});
    auto common_cells = [&](std::vector<std::string> head) {
        head.push_back(has_common ? csv_number(chosen.lo_hz) : "");
        head.push_back(has_common ? csv_number(chosen.hi_hz) : "");
        head.push_back(has_common ? csv_number(*plan.kappa_hz) : "");
        head.push_back(has_common ? csv_number(plan.worst_overlap) : "");
        return head;
    };
    for (const PerReflectionPlan& pr : plan.per_reflection) {
        if (pr.sfr.empty()) {
            t.add_row(common_cells(
                {csv_number(pr.reach_m), csv_number(pr.f_opt_hz), "", ""}));
            continue;
        }
        for (const FrequencyInterval& iv : pr.sfr)
            t.add_row(common_cells({csv_number(pr.reach_m), csv_number(pr.f_opt_hz),
                                    csv_number(iv.lo_hz), csv_number(iv.hi_hz)}));
    }
    write_text_file(join_path(ctx.out_dir, "plan.csv"), t.str());

    for (const PerReflectionPlan& pr : plan.per_reflection)
        log_line(ctx, "reach " + csv_number(pr.reach_m) + " m: f_opt=" +
                          csv_number(pr.f_opt_hz) + " Hz, " +
                          std::to_string(pr.sfr.size()) + " usable interval(s)");
    if (has_common)
        log_line(ctx, "kappa = " + csv_number(*plan.kappa_hz) + " Hz in [" +
                          csv_number(chosen.lo_hz) + ", " + csv_number(chosen.hi_hz) +
                          "] Hz, worst overlap " + csv_number(plan.worst_overlap));
    else
        log_line(ctx, "no sweep frequency clears every reflection in [" +
                          csv_number(grid.f_lo_hz) + ", " + csv_number(grid.f_hi_hz) +
                          "] Hz");
    return has_common ? kExitOk : kExitNoPlan;
}

int cmd_map(const CommandContext& ctx)
{
    OdnProfile odn = make_odn(ctx.cfg);
    OverlapSpec spec = make_overlap_spec(ctx.cfg);
    ScanGrid grid = make_scan_grid(ctx.cfg);
    if (ctx.cfg.map_pi_values.empty())
        throw std::runtime_error("config: map.pi_values must not be empty");
    OverlapMap map =
        overlap_map_pi(odn, spec, ctx.cfg.map_pi_values, grid, ctx.cfg.sweep_ramp_fraction);

    CsvTable t({"f_hz", "pi_eff", "overlap_prob"});
    for (std::size_t row = 0; row < map.axis_values.size(); ++row)
        for (std::size_t col = 0; col < map.f_hz.size(); ++col)
            t.add_row({csv_number(map.f_hz[col]), csv_number(map.axis_values[row]),
                       csv_number(map.probability[row][col])});
    write_text_file(join_path(ctx.out_dir, "map.csv"), t.str());
    log_line(ctx, "map: " + std::to_string(map.axis_values.size()) + " band shares x " +
                      std::to_string(map.f_hz.size()) + " sweep frequencies");
    return kExitOk;
}

int cmd_sfr(const CommandContext& ctx)
{
    OdnProfile odn = make_odn(ctx.cfg);
    OverlapSpec spec = make_overlap_spec(ctx.cfg);
    ScanGrid grid = make_scan_grid(ctx.cfg);

    CsvTable t({"reach_m", "sfr_lo_hz", "sfr_hi_hz"});
    for (const ReflectionPoint& rp : odn.reflections) {
        double delay = round_trip_delay(rp.reach_m, odn.group_index);
        std::vector<FrequencyInterval> sfr = sweep_frequency_range(
            delay, spec, ctx.cfg.sweep_ramp_fraction, ctx.cfg.overlap_threshold,
            grid.f_lo_hz, grid.f_hi_hz, grid.f_step_hz, ctx.cfg.scan_oracle_samples);
        if (sfr.empty()) {
            t.add_row({csv_number(rp.reach_m), "", ""});
            log_line(ctx, "reach " + csv_number(rp.reach_m) + " m: no usable interval");
            continue;
        }
        for (const FrequencyInterval& iv : sfr)
            t.add_row({csv_number(rp.reach_m), csv_number(iv.lo_hz), csv_number(iv.hi_hz)});
        log_line(ctx, "reach " + csv_number(rp.reach_m) + " m: " +
                          std::to_string(sfr.size()) + " usable interval(s), widest " +
                          csv_number(std::max_element(sfr.begin(), sfr.end(),
                                                      [](const FrequencyInterval& a,
                                                         const FrequencyInterval& b) {
                                                          return a.width() < b.width();
                                                      })
                                         ->width()) +
                          " Hz");
    }
    write_text_file(join_path(ctx.out_dir, "sfr.csv"), t.str());
    return kExitOk;
}

int cmd_simulate(const CommandContext& ctx)
{
    Scenario sc = make_scenario(ctx.cfg);
    std::vector<CasePoint> points = run_link_experiment(sc, ScanKind::single, {});
    write_summary_csv(ctx, points);
    log_summary(ctx, points, ctx.cfg);

    // Per-subcarrier detail and detected spectrum for the configured case,
    // on the same noise substream as its summary row.
    LinkResult detail =
        run_single_case(sc, case_noise_seed(sc.payload_seed, 0, configured_case(sc)));
    CsvTable evm({"subcarrier", "evm_pct"});
    for (std::size_t k = 0; k < detail.evm.per_subcarrier_pct.size(); ++k)
        evm.add_row({csv_number(static_cast<long long>(k + 1)),
                     csv_number(detail.evm.per_subcarrier_pct[k])});
    write_text_file(join_path(ctx.out_dir, "evm.csv"), evm.str());

    Psd psd = welch_psd(detail.photocurrent, sc.sample_rate_hz, 4096);
    CsvTable spec({"freq_hz", "power_db"});
    for (std::size_t i = 0; i < psd.freq_hz.size(); ++i)
        spec.add_row({csv_number(psd.freq_hz[i]), csv_number(psd.power_db[i])});
    write_text_file(join_path(ctx.out_dir, "spectrum.csv"), spec.str());
    return kExitOk;
}

namespace {

int run_scan(const CommandContext& ctx, ScanKind kind, const std::vector<double>& values,
             const char* what)
{
    if (values.empty())
        throw std::runtime_error(std::string("config: ") + what + " must not be empty");
    Scenario sc = make_scenario(ctx.cfg);
    std::vector<CasePoint> points = run_link_experiment(sc, kind, values);
    write_summary_csv(ctx, points);
    log_summary(ctx, points, ctx.cfg);
    return kExitOk;
}

} // namespace

int cmd_osrr_scan(const CommandContext& ctx)
{
    return run_scan(ctx, ScanKind::osrr, ctx.cfg.osrr_scan_values, "osrr_scan.values");
}

int cmd_budget_scan(const CommandContext& ctx)
{
    return run_scan(ctx, ScanKind::budget, ctx.cfg.budget_scan_values,
                    "budget_scan.values");
}

int cmd_pilot(const CommandContext& ctx)
{
    Scenario sc = make_scenario(ctx.cfg);
    PilotConfig pc = make_pilot(ctx.cfg);
    PilotResult res = pilot_beat_spectrum(sc, pc, sc.payload_seed ^ 0x70696c6fULL);

    CsvTable track({"t_s", "f_peak_hz"});
    for (const TrackPoint& p : res.track)
        track.add_row({csv_number(p.t_s), csv_number(p.f_peak_hz)});
    write_text_file(join_path(ctx.out_dir, "pilot_track.csv"), track.str());

    CsvTable spec({"freq_hz", "power_db"});
    for (std::size_t i = 0; i < res.spectrum.freq_hz.size(); ++i)
        spec.add_row({csv_number(res.spectrum.freq_hz[i]),
                      csv_number(res.spectrum.power_db[i])});
    write_text_file(join_path(ctx.out_dir, "spectrum.csv"), spec.str());

    double lo = res.track.front().f_peak_hz;
    double hi = lo;
    for (const TrackPoint& p : res.track) {
        lo = std::min(lo, p.f_peak_hz);
        hi = std::max(hi, p.f_peak_hz);
    }
    log_line(ctx, std::string("pilot mode ") +
                      (pc.mode == PilotMode::homodyne ? "homodyne" : "reference") +
                      ": track spread " + csv_number(hi - lo) + " Hz over " +
                      std::to_string(res.track.size()) + " segments, lock fraction " +
                      csv_number(res.lock_fraction));
    return kExitOk;
}

int run_command(const std::string& name, const CommandContext& ctx)
{
    std::filesystem::create_directories(ctx.out_dir);
    write_text_file(join_path(ctx.out_dir, "resolved.cfg"), dump_config(ctx.cfg));
    if (name == "plan") return cmd_plan(ctx);
    if (name == "map") return cmd_map(ctx);
    if (name == "sfr") return cmd_sfr(ctx);
    if (name == "simulate") return cmd_simulate(ctx);
    if (name == "osrr-scan") return cmd_osrr_scan(ctx);
    if (name == "budget-scan") return cmd_budget_scan(ctx);
    if (name == "pilot") return cmd_pilot(ctx);
    throw std::invalid_argument("unknown command '" + name + "'");
}

} // namespace sweeplink
