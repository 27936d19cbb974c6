#include "sweeplink/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sweeplink {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s)
{
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("expected a number");
    return v;
}

long long parse_integer(std::string_view s)
{
    long long v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("expected an integer");
    return v;
}

bool parse_bool(std::string_view s)
{
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::runtime_error("expected true or false");
}

std::vector<double> parse_list(std::string_view s)
{
    std::vector<double> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string_view item =
            trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (item.empty()) throw std::runtime_error("empty list element");
        out.push_back(parse_double(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

struct KeyEntry {
    const char* key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

KeyEntry entry_double(const char* key, double RunConfig::*m)
{
    return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_double(v); },
            [m](const RunConfig& c) { return format_double(c.*m); }};
}

KeyEntry entry_list(const char* key, std::vector<double> RunConfig::*m)
{
    return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_list(v); },
            [m](const RunConfig& c) { return format_list(c.*m); }};
}

KeyEntry entry_int(const char* key, int RunConfig::*m)
{
    return {key, [m](RunConfig& c, std::string_view v) {
                c.*m = static_cast<int>(parse_integer(v));
            },
            [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

KeyEntry entry_u32(const char* key, std::uint32_t RunConfig::*m)
{
    return {key,
            [m](RunConfig& c, std::string_view v) {
                long long raw = parse_integer(v);
                if (raw < 0) throw std::runtime_error("expected a non-negative integer");
                c.*m = static_cast<std::uint32_t>(raw);
            },
            [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

KeyEntry entry_u64(const char* key, std::uint64_t RunConfig::*m)
{
    return {key,
            [m](RunConfig& c, std::string_view v) {
                std::uint64_t raw{};
                auto res = std::from_chars(v.data(), v.data() + v.size(), raw);
                if (res.ec != std::errc() || res.ptr != v.data() + v.size())
                    throw std::runtime_error("expected a non-negative integer");
                c.*m = raw;
            },
            [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

KeyEntry entry_bool(const char* key, bool RunConfig::*m)
{
    return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_bool(v); },
            [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

KeyEntry entry_constellation(const char* key, Constellation RunConfig::*m)
{
    return {key,
            [m](RunConfig& c, std::string_view v) {
                if (v == "qpsk")
                    c.*m = Constellation::qpsk;
                else if (v == "qam16")
                    c.*m = Constellation::qam16;
                else
                    throw std::runtime_error("expected qpsk or qam16");
            },
            [m](const RunConfig& c) {
                return std::string(c.*m == Constellation::qpsk ? "qpsk" : "qam16");
            }};
}

KeyEntry entry_pilot_mode(const char* key, PilotMode RunConfig::*m)
{
    return {key,
            [m](RunConfig& c, std::string_view v) {
                if (v == "homodyne")
                    c.*m = PilotMode::homodyne;
                else if (v == "reference")
                    c.*m = PilotMode::reference;
                else
                    throw std::runtime_error("expected homodyne or reference");
            },
            [m](const RunConfig& c) {
                return std::string(c.*m == PilotMode::homodyne ? "homodyne" : "reference");
            }};
}

const std::vector<KeyEntry>& key_table()
{
    static const std::vector<KeyEntry> table = {
        entry_list("odn.reaches_m", &RunConfig::odn_reaches_m),
        entry_list("odn.reflectances_db", &RunConfig::odn_reflectances_db),
        entry_double("odn.group_index", &RunConfig::odn_group_index),
        entry_double("sweep.deviation_hz", &RunConfig::sweep_deviation_hz),
        entry_double("sweep.freq_hz", &RunConfig::sweep_freq_hz),
        entry_double("sweep.ramp_fraction", &RunConfig::sweep_ramp_fraction),
        entry_double("sweep.phase_offset", &RunConfig::sweep_phase_offset),
        entry_double("overlap.f_upper_hz", &RunConfig::overlap_f_upper_hz),
        entry_double("overlap.lock_guard_hz", &RunConfig::overlap_lock_guard_hz),
        entry_double("overlap.crosstalk_bandwidth_hz",
                     &RunConfig::overlap_crosstalk_bandwidth_hz),
        entry_double("overlap.threshold", &RunConfig::overlap_threshold),
        entry_double("scan.f_lo_hz", &RunConfig::scan_f_lo_hz),
        entry_double("scan.f_hi_hz", &RunConfig::scan_f_hi_hz),
        entry_double("scan.f_step_hz", &RunConfig::scan_f_step_hz),
        entry_u32("scan.oracle_samples", &RunConfig::scan_oracle_samples),
        entry_list("map.pi_values", &RunConfig::map_pi_values),
        entry_int("ofdm.n_subcarriers", &RunConfig::ofdm_n_subcarriers),
        entry_double("ofdm.bandwidth_hz", &RunConfig::ofdm_bandwidth_hz),
        entry_constellation("ofdm.constellation", &RunConfig::ofdm_constellation),
        entry_double("ofdm.cyclic_prefix_fraction", &RunConfig::ofdm_cyclic_prefix_fraction),
        entry_int("ofdm.pilot_symbol_period", &RunConfig::ofdm_pilot_symbol_period),
        entry_double("ofdm.center_offset_hz", &RunConfig::ofdm_center_offset_hz),
        entry_double("link.sample_rate_hz", &RunConfig::link_sample_rate_hz),
        entry_double("link.duration_periods", &RunConfig::link_duration_periods),
        entry_double("link.osrr_db", &RunConfig::link_osrr_db),
        entry_double("link.loss_budget_db", &RunConfig::link_loss_budget_db),
        entry_double("link.carrier_signal_ratio_db",
                     &RunConfig::link_carrier_signal_ratio_db),
        entry_double("link.noise_rms", &RunConfig::link_noise_rms),
        entry_double("link.lo_deviation_mismatch_hz",
                     &RunConfig::link_lo_deviation_mismatch_hz),
        entry_double("link.sweep_phase_error", &RunConfig::link_sweep_phase_error),
        entry_bool("link.mitigation", &RunConfig::link_mitigation),
        entry_double("link.locking_range_hz", &RunConfig::link_locking_range_hz),
        entry_u64("link.payload_seed", &RunConfig::link_payload_seed),
        entry_double("link.evm_limit_qpsk_pct", &RunConfig::link_evm_limit_qpsk_pct),
        entry_double("link.evm_limit_qam16_pct", &RunConfig::link_evm_limit_qam16_pct),
        entry_list("osrr_scan.values", &RunConfig::osrr_scan_values),
        entry_list("budget_scan.values", &RunConfig::budget_scan_values),
        entry_double("pilot.freq_hz", &RunConfig::pilot_freq_hz),
        entry_pilot_mode("pilot.mode", &RunConfig::pilot_mode),
        entry_double("pilot.reference_offset_hz", &RunConfig::pilot_reference_offset_hz),
        entry_u32("pilot.window", &RunConfig::pilot_window),
        entry_u32("pilot.hop", &RunConfig::pilot_hop),
        entry_double("pilot.track_f_lo_hz", &RunConfig::pilot_track_f_lo_hz),
        entry_double("pilot.track_f_hi_hz", &RunConfig::pilot_track_f_hi_hz),
    };
    return table;
}

const KeyEntry* find_entry(std::string_view key)
{
    for (const KeyEntry& e : key_table())
        if (key == e.key) return &e;
    return nullptr;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& msg)
{
    throw std::runtime_error("config line " + std::to_string(line_no) + ": " + msg);
}

} // namespace

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            fail_line(line_no, "expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) fail_line(line_no, "empty key");

        const KeyEntry* entry = find_entry(key);
        if (!entry) fail_line(line_no, "unknown key '" + key + "'");
        if (!seen.insert(key).second) fail_line(line_no, "duplicate key '" + key + "'");
        try {
            entry->set(cfg, value);
        } catch (const std::exception& e) {
            fail_line(line_no, "invalid value for '" + key + "': " + e.what());
        }
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg)
{
    std::string out;
    for (const KeyEntry& e : key_table()) {
        out += e.key;
        out += " = ";
        out += e.get(cfg);
        out += "\n";
    }
    return out;
}

OdnProfile make_odn(const RunConfig& cfg)
{
    if (cfg.odn_reaches_m.empty())
        throw std::runtime_error("config: odn.reaches_m must list at least one reach");
    if (!cfg.odn_reflectances_db.empty() &&
        cfg.odn_reflectances_db.size() != cfg.odn_reaches_m.size())
        throw std::runtime_error(
            "config: odn.reflectances_db must match odn.reaches_m in length");
    OdnProfile odn;
    odn.group_index = cfg.odn_group_index;
    odn.reflections.reserve(cfg.odn_reaches_m.size());
    for (std::size_t i = 0; i < cfg.odn_reaches_m.size(); ++i) {
        ReflectionPoint p;
        p.reach_m = cfg.odn_reaches_m[i];
        p.reflectance_db = cfg.odn_reflectances_db.empty() ? 0.0 : cfg.odn_reflectances_db[i];
        odn.reflections.push_back(p);
    }
    validate(odn);
    return odn;
}

SweepWaveform make_sweep(const RunConfig& cfg)
{
    SweepWaveform w;
    w.deviation_hz = cfg.sweep_deviation_hz;
    w.sweep_freq_hz = cfg.sweep_freq_hz;
    w.ramp_fraction = cfg.sweep_ramp_fraction;
    w.phase_offset = cfg.sweep_phase_offset;
    if (w.sweep_freq_hz <= 0.0) {
        OdnProfile odn = make_odn(cfg);
        double delay = round_trip_delay(odn.reflections.front().reach_m, odn.group_index);
        w.sweep_freq_hz = optimal_sweep_frequency(delay);
    }
    validate(w);
    return w;
}

OverlapSpec make_overlap_spec(const RunConfig& cfg)
{
    OverlapSpec s;
    s.f_upper_hz =
        cfg.overlap_f_upper_hz < 0.0 ? cfg.ofdm_bandwidth_hz : cfg.overlap_f_upper_hz;
    s.lock_guard_hz = cfg.overlap_lock_guard_hz < 0.0 ? cfg.link_locking_range_hz
                                                      : cfg.overlap_lock_guard_hz;
    s.crosstalk_bandwidth_hz = cfg.overlap_crosstalk_bandwidth_hz;
    s.deviation_hz = cfg.sweep_deviation_hz;
    validate(s);
    return s;
}

ScanGrid make_scan_grid(const RunConfig& cfg)
{
    ScanGrid g{cfg.scan_f_lo_hz, cfg.scan_f_hi_hz, cfg.scan_f_step_hz};
    if (!(g.f_lo_hz > 0.0) || !(g.f_hi_hz > g.f_lo_hz) || !(g.f_step_hz > 0.0))
        throw std::runtime_error("config: scan window must satisfy 0 < f_lo < f_hi, step > 0");
    return g;
}

OfdmConfig make_ofdm(const RunConfig& cfg)
{
    OfdmConfig o;
    o.n_subcarriers = cfg.ofdm_n_subcarriers;
    o.bandwidth_hz = cfg.ofdm_bandwidth_hz;
    o.constellation = cfg.ofdm_constellation;
    o.cyclic_prefix_fraction = cfg.ofdm_cyclic_prefix_fraction;
    o.pilot_symbol_period = cfg.ofdm_pilot_symbol_period;
    o.center_offset_hz = cfg.ofdm_center_offset_hz;
    validate(o);
    return o;
}

Scenario make_scenario(const RunConfig& cfg)
{
    Scenario sc;
    sc.odn = make_odn(cfg);
    sc.sweep = make_sweep(cfg);
    sc.ofdm = make_ofdm(cfg);
    sc.lock.locking_range_hz = cfg.link_locking_range_hz;
    sc.sample_rate_hz = cfg.link_sample_rate_hz;
    sc.duration_periods = cfg.link_duration_periods;
    sc.osrr_db = cfg.link_osrr_db;
    sc.loss_budget_db = cfg.link_loss_budget_db;
    sc.carrier_signal_ratio_db = cfg.link_carrier_signal_ratio_db;
    sc.noise_rms = cfg.link_noise_rms;
    sc.lo_deviation_mismatch_hz = cfg.link_lo_deviation_mismatch_hz;
    sc.sweep_phase_error = cfg.link_sweep_phase_error;
    sc.mitigation_enabled = cfg.link_mitigation;
    sc.payload_seed = cfg.link_payload_seed;
    validate(sc);
    return sc;
}

PilotConfig make_pilot(const RunConfig& cfg)
{
    PilotConfig p;
    p.freq_hz = cfg.pilot_freq_hz;
    p.mode = cfg.pilot_mode;
    p.reference_offset_hz = cfg.pilot_reference_offset_hz;
    p.window = cfg.pilot_window;
    p.hop = cfg.pilot_hop;
    p.track_f_lo_hz = cfg.pilot_track_f_lo_hz;
    p.track_f_hi_hz = cfg.pilot_track_f_hi_hz;
    return p;
}

} // namespace sweeplink
