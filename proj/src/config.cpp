/*
 * Copyright 2026 The ddrc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ddrc/error.hpp"
#include "ddrc/sim.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ddrc {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, int line, std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(key, line, "expected a number, got '" + std::string(v) + "'");
    return out;
}

std::uint64_t to_uint(const std::string& key, int line, std::string_view v)
{
    int base = 10;
    if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X'))
    {
        v.remove_prefix(2);
        base = 16;
    }
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError(key, line, "expected a non-negative integer, got '" + std::string(v) + "'");
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ControllerConfig SimConfig::controller_config() const
{
    ControllerConfig c;
    c.timing = timing;
    c.geometry = geometry;
    c.mode_register = mode_register;
    c.emrs_payload = emrs_payload;
    c.mrs_reset_payload = mrs_reset_payload.value_or(default_mrs_reset_payload(mode_register));
    c.trim = trim;
    return c;
}

MemoryConfig SimConfig::memory_config() const
{
    MemoryConfig m;
    m.timing = timing;
    m.timing.power_up_delay_ns = effective_power_up_ns();
    m.geometry = geometry;
    m.refresh_grace_factor = refresh_grace_factor;
    return m;
}

void SimConfig::validate() const
{
    try
    {
        controller_config().validate();
    }
    catch (const InvalidField& e)
    {
        throw ConfigError(e.field(), 0, e.what());
    }
    if (!(power_up_scale >= 0.0 && power_up_scale <= 1.0))
        throw ConfigError("power_up_scale", 0, "must be in [0, 1]");
    if (!(refresh_grace_factor >= 1.0))
        throw ConfigError("refresh_grace_factor", 0, "must be >= 1");
    if (max_cycles == 0)
        throw ConfigError("max_cycles", 0, "must be > 0");
    if (min_cycles(timing.refresh_interval_ns, timing.t_ck_ns) < 2)
        throw ConfigError("refresh_interval_ns", 0, "shorter than two clocks");
    // No recovery state follows c_rdata.
    const unsigned cl = mode_register.cas_latency.whole_cycles();
    if (min_cycles(timing.t_rp_ns, timing.t_ck_ns) > cl + 2)
        throw ConfigError("t_rp_ns", 0,
                          "precharge after a read takes more than CAS latency + 2 clocks; not supported");
}

SimConfig parse_config(std::string_view text)
{
    SimConfig cfg;
    std::map<std::string, int> seen;

    using Setter = std::function<void(const std::string&, int, std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters{
        {"format",
         [](const std::string& k, int l, std::string_view v) {
             if (v != "1")
                 throw ConfigError(k, l, "unsupported config format '" + std::string(v) + "'");
         }},
        {"t_ck_ns", [&](auto& k, int l, auto v) { cfg.timing.t_ck_ns = to_double(k, l, v); }},
        {"t_rp_ns", [&](auto& k, int l, auto v) { cfg.timing.t_rp_ns = to_double(k, l, v); }},
        {"t_rfc_ns", [&](auto& k, int l, auto v) { cfg.timing.t_rfc_ns = to_double(k, l, v); }},
        {"t_mrd_ns", [&](auto& k, int l, auto v) { cfg.timing.t_mrd_ns = to_double(k, l, v); }},
        {"t_rcd_ns", [&](auto& k, int l, auto v) { cfg.timing.t_rcd_ns = to_double(k, l, v); }},
        {"t_wr_ns", [&](auto& k, int l, auto v) { cfg.timing.t_wr_ns = to_double(k, l, v); }},
        {"power_up_delay_ns", [&](auto& k, int l, auto v) { cfg.timing.power_up_delay_ns = to_double(k, l, v); }},
        {"refresh_interval_ns",
         [&](auto& k, int l, auto v) { cfg.timing.refresh_interval_ns = to_double(k, l, v); }},
        {"power_up_scale", [&](auto& k, int l, auto v) { cfg.power_up_scale = to_double(k, l, v); }},
        {"refresh_grace_factor", [&](auto& k, int l, auto v) { cfg.refresh_grace_factor = to_double(k, l, v); }},
        {"row_bits", [&](auto& k, int l, auto v) { cfg.geometry.row_bits = static_cast<unsigned>(to_uint(k, l, v)); }},
        {"col_bits", [&](auto& k, int l, auto v) { cfg.geometry.col_bits = static_cast<unsigned>(to_uint(k, l, v)); }},
        {"burst_length",
         [&](auto& k, int l, auto v) {
             const auto bl = to_uint(k, l, v);
             if (bl != 2 && bl != 4 && bl != 8)
                 throw ConfigError(k, l, "burst length must be 2, 4 or 8");
             cfg.mode_register.burst_length = static_cast<unsigned>(bl);
         }},
        {"burst_type",
         [&](auto& k, int l, auto v) {
             if (v == "sequential")
                 cfg.mode_register.burst_type = BurstType::Sequential;
             else if (v == "interleaved")
                 cfg.mode_register.burst_type = BurstType::Interleaved;
             else
                 throw ConfigError(k, l, "expected sequential or interleaved");
         }},
        {"cas_latency",
         [&](auto& k, int l, auto v) {
             const double cl = to_double(k, l, v);
             if (cl != 2.0 && cl != 2.5 && cl != 3.0)
                 throw ConfigError(k, l, "CAS latency must be 2, 2.5 or 3");
             cfg.mode_register.cas_latency = CasLatency{static_cast<std::uint8_t>(cl * 2)};
         }},
        {"operating_mode",
         [&](auto& k, int l, auto v) {
             const auto m = to_uint(k, l, v);
             if (m > 0x3F)
                 throw ConfigError(k, l, "operating mode is a 6-bit field");
             cfg.mode_register.operating_mode = static_cast<unsigned>(m);
         }},
        {"emrs_payload",
         [&](auto& k, int l, auto v) {
             const auto p = to_uint(k, l, v);
             if (p & ~std::uint64_t{kAddressMask})
                 throw ConfigError(k, l, "payload wider than A0..A12");
             cfg.emrs_payload = static_cast<AddressWord>(p);
         }},
        {"mrs_reset_payload",
         [&](auto& k, int l, auto v) {
             const auto p = to_uint(k, l, v);
             if (p & ~std::uint64_t{kAddressMask})
                 throw ConfigError(k, l, "payload wider than A0..A12");
             cfg.mrs_reset_payload = static_cast<AddressWord>(p);
         }},
        {"max_cycles", [&](auto& k, int l, auto v) { cfg.max_cycles = to_uint(k, l, v); }},
        {"seed", [&](auto& k, int l, auto v) { cfg.seed = to_uint(k, l, v); }},
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(line), line_no, "expected key=value");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError(key, line_no, "unknown key");
        if (seen.count(key))
            throw ConfigError(key, line_no, "duplicate key, first set on line " + std::to_string(seen[key]));
        seen[key] = line_no;
        it->second(key, line_no, value);
    }

    try
    {
        cfg.validate();
    }
    catch (const ConfigError& e)
    {
        const auto it = seen.find(e.key());
        if (it == seen.end())
            throw;
        std::string what = e.what();
        if (const auto colon = what.find("): "); colon != std::string::npos)
            what = what.substr(colon + 3);
        throw ConfigError(e.key(), it->second, what);
    }

    if (cfg.mode_register.burst_length == 2)
        cfg.warnings.emplace_back("burst_length=2 moves 32 bits per access; the upper half of each word is dropped");
    if (cfg.mode_register.burst_length == 8)
        cfg.warnings.emplace_back("burst_length=8 masks the last four beats of every access");
    return cfg;
}

SimConfig load_config(const std::string& path)
{
    return parse_config(read_file(path));
}

std::vector<TraceEntry> load_trace(const std::string& path)
{
    return parse_trace(read_file(path));
}

} // namespace ddrc
