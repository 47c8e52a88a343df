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

// Acceptance checks, one line per criterion.

#include "ddrc/datapath.hpp"
#include "ddrc/error.hpp"
#include "ddrc/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace ddrc;

namespace {

const std::string kSrc = DDRC_SOURCE_DIR;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

unsigned waits(double t_ns, double t_ck_ns)
{
    const auto clocks = static_cast<long>(std::ceil(t_ns / t_ck_ns - 1e-9));
    return static_cast<unsigned>(std::max(0L, clocks - 1));
}

SimConfig with(const std::string& path, const std::string& extra)
{
    std::ostringstream text;
    std::ifstream in(path);
    std::string line;
    std::set<std::string> overridden;
    std::istringstream ex(extra);
    while (std::getline(ex, line))
        overridden.insert(line.substr(0, line.find('=')));
    while (std::getline(in, line))
        if (!overridden.count(line.substr(0, line.find('='))))
            text << line << '\n';
    text << extra;
    return parse_config(text.str());
}

Outcome command_table()
{
    struct Row
    {
        Command cmd;
        const char* pins;
    };
    const Row table[] = {{Command::LoadModeRegister, "LLL"}, {Command::AutoRefresh, "LLH"},
                         {Command::Precharge, "LHL"},        {Command::Active, "LHH"},
                         {Command::Write, "HLL"},            {Command::Read, "HLH"},
                         {Command::Nop, "HHH"}};
    auto lv = [](char c) { return c == 'H' ? Level::H : Level::L; };
    int rows = 0;
    for (const auto& r : table)
    {
        const auto s = encode_command(r.cmd);
        if (s.ras != lv(r.pins[0]) || s.cas != lv(r.pins[1]) || s.we != lv(r.pins[2]) || s.cs != Level::L)
            return {false, std::string("row ") + std::string(to_string(r.cmd)) + " differs"};
        ++rows;
    }
    for (const auto c : kAllCommands)
        if (decode_command(encode_command(c)) != c)
            return {false, "decode(encode(" + std::string(to_string(c)) + ")) differs"};
    int combos = 0;
    for (int bits = 0; bits < 16; ++bits)
    {
        ControlSignals s;
        s.ras = (bits & 1) ? Level::H : Level::L;
        s.cas = (bits & 2) ? Level::H : Level::L;
        s.we = (bits & 4) ? Level::H : Level::L;
        s.cs = (bits & 8) ? Level::H : Level::L;
        try
        {
            const auto c = decode_command(s);
            const auto e = encode_command(c);
            if (s.cs == Level::L && (e.ras != s.ras || e.cas != s.cas || e.we != s.we))
                return {false, "decode is not the inverse on a pin pattern"};
            if (s.cs == Level::H && c != Command::Deselect)
                return {false, "cs high must decode as DESELECT"};
        }
        catch (const UnknownCommand&)
        {
            if (!(s.cs == Level::L && s.ras == Level::H && s.cas == Level::H && s.we == Level::L))
                return {false, "unexpected UnknownCommand"};
        }
        ++combos;
    }
    return {true, std::to_string(rows) + " rows, " + std::to_string(combos) + " pin patterns"};
}

Outcome init_sequence()
{
    std::ostringstream detail;
    for (const char* cfg_name : {"ddr200.cfg", "latency.cfg"})
    {
        const auto cfg = with(kSrc + "/configs/" + cfg_name, "power_up_scale=0.01\n");
        const auto t = init_trace(cfg);
        const auto& tm = cfg.timing;
        const std::vector<std::pair<std::string, unsigned>> want{
            {"PRE_ALL", waits(tm.t_rp_ns, tm.t_ck_ns)}, {"EMRS", waits(tm.t_mrd_ns, tm.t_ck_ns)},
            {"MRS", waits(tm.t_mrd_ns, tm.t_ck_ns)},    {"PRE_ALL", waits(tm.t_rp_ns, tm.t_ck_ns)},
            {"AR", waits(tm.t_rfc_ns, tm.t_ck_ns)},     {"AR", waits(tm.t_rfc_ns, tm.t_ck_ns)},
            {"MRS", waits(tm.t_mrd_ns, tm.t_ck_ns)}};
        std::vector<std::pair<std::string, unsigned>> got;
        for (const auto& e : t.commands)
            if (e.command != Command::Nop)
                got.emplace_back(e.label, e.wait);
        if (got != want)
        {
            std::ostringstream os;
            os << cfg_name << ": got";
            for (const auto& [l, w] : got)
                os << ' ' << l << '/' << w;
            return {false, os.str()};
        }
        if (!t.violations.empty())
            return {false, std::string(cfg_name) + ": " + format_violation(t.violations.front())};
        detail << cfg_name << " waits";
        for (const auto& [l, w] : got)
            detail << ' ' << w;
        detail << "; ";
    }
    detail << "0 violations";
    return {true, detail.str()};
}

Outcome single_access_latency()
{
    const auto cfg = load_config(kSrc + "/configs/latency.cfg");
    auto single = [&](const char* line) {
        RunOptions opt;
        opt.fsm_trace = true;
        return run(cfg, parse_trace(line), opt);
    };
    const auto w = single("W SINGLE 0x1000 0x0123456789abcdef\n");
    const auto r = single("R SINGLE 0x1000\n");
    if (w.transactions.size() != 1 || r.transactions.size() != 1 || !w.clean() || !r.clean())
        return {false, "runs did not complete cleanly"};
    const unsigned rl = r.transactions[0].latency_clocks;
    const unsigned wl = w.transactions[0].latency_clocks;

    // Command order and gaps: ACT, READ/WRITE after tRCD.
    auto gaps = [](const SimReport& rep) {
        std::vector<std::pair<Command, std::uint64_t>> v;
        for (const auto& c : rep.commands)
            if (c.cycle > *rep.init_done_cycle)
                v.emplace_back(c.command, c.cycle);
        return v;
    };
    const auto rc = gaps(r);
    const auto wc = gaps(w);
    const unsigned rcd = waits(cfg.timing.t_rcd_ns, cfg.timing.t_ck_ns) + 1;
    const bool order = rc.size() == 2 && rc[0].first == Command::Active && rc[1].first == Command::Read &&
                       rc[1].second - rc[0].second == rcd && wc.size() == 2 && wc[0].first == Command::Active &&
                       wc[1].first == Command::Write && wc[1].second - wc[0].second == rcd;
    // The command is on the pins one clock after its state.
    bool skew = true;
    for (const auto* rep : {&r, &w})
        for (const auto& c : rep->commands)
        {
            const auto& prev = rep->fsm_trace.at(c.cycle - 1);
            if (prev.init_done && c.command == Command::Active && prev.cstate != CmdState::Active)
                skew = false;
        }
    std::ostringstream os;
    os << "read " << rl << " clocks, write " << wl << " clocks, ACT->CAS " << rcd << " clocks";
    return {rl == 10 && wl == 9 && order && skew, os.str()};
}

Outcome data_integrity()
{
    const auto cfg = load_config(kSrc + "/configs/ddr200.cfg");
    const auto trace = random_traffic(20260101, 10000, cfg.geometry);
    std::set<HBurst> kinds;
    for (const auto& e : trace)
        kinds.insert(e.burst);
    const auto rep = run(cfg, annotate_expected(trace, cfg.mode_register.burst_length));
    std::uint64_t checked = 0;
    for (const auto& b : rep.beats)
        checked += b.expected.has_value();
    std::ostringstream os;
    os << rep.reads + rep.writes << " transfers, " << checked << " reads compared, " << kinds.size()
       << " burst kinds, " << rep.mismatches.size() << " mismatches, " << rep.violations.size() << " violations";
    return {rep.clean() && kinds.size() == 8 && rep.reads + rep.writes == 10000 && checked == rep.reads, os.str()};
}

Outcome checker_sensitivity()
{
    const auto cfg = load_config(kSrc + "/configs/ddr200.cfg");
    const auto trace = annotate_expected(random_traffic(77, 3000, cfg.geometry), cfg.mode_register.burst_length);
    if (!run(cfg, trace).violations.empty())
        return {false, "unmutated run has violations"};
    struct Mutation
    {
        TimingParam param;
        int WaitTrim::*field;
    };
    const Mutation muts[] = {{TimingParam::tRP, &WaitTrim::rp},
                             {TimingParam::tRCD, &WaitTrim::rcd},
                             {TimingParam::tRFC, &WaitTrim::rfc},
                             {TimingParam::tMRD, &WaitTrim::mrd},
                             {TimingParam::tDAL, &WaitTrim::dal}};
    int caught = 0;
    std::ostringstream os;
    for (const auto& m : muts)
    {
        auto c = cfg;
        c.trim.*m.field = -1;
        const auto rep = run(c, trace);
        std::size_t hits = 0;
        for (const auto& v : rep.violations)
            hits += v.kind == ViolationKind::TimingViolation && v.param == m.param;
        caught += hits > 0;
        os << to_string(m.param) << '=' << hits << ' ';
    }
    os << "(" << caught << "/5 caught)";
    return {caught == 5, os.str()};
}

Outcome refresh_liveness()
{
    std::mt19937_64 rng(4242);
    int cases = 0;
    std::ostringstream os;
    for (int i = 0; i < 24; ++i)
    {
        const double interval_ns = 300.0 + static_cast<double>(rng() % 4000);
        const auto cfg =
            with(kSrc + "/configs/ddr200.cfg",
                 "power_up_scale=0.01\nrefresh_interval_ns=" + std::to_string(interval_ns) + "\n");
        const unsigned interval = min_cycles(interval_ns, cfg.timing.t_ck_ns);
        // Enough back-to-back beats for 3..12 intervals.
        const std::size_t beats = (3 + rng() % 10) * interval / 8 + 50;
        const auto rep = run(cfg, random_traffic(rng(), beats, cfg.geometry));
        const std::uint64_t elapsed = rep.total_cycles - *rep.init_done_cycle;
        if (elapsed < 3ULL * interval)
            return {false, "case " + std::to_string(i) + " ran only " + std::to_string(elapsed) + " clocks"};
        const std::uint64_t floor_n = elapsed / interval;
        if (rep.refresh_count + 1 < floor_n)
            return {false, "case " + std::to_string(i) + ": " + std::to_string(rep.refresh_count) + " refreshes in " +
                               std::to_string(elapsed) + " clocks, interval " + std::to_string(interval)};
        for (const auto& c : rep.commands)
            if (c.ref_ack &&
                (c.command == Command::Read || c.command == Command::Write || c.command == Command::Active))
                return {false, "access command at cycle " + std::to_string(c.cycle) + " during refresh"};
        if (!rep.violations.empty())
            return {false, format_violation(rep.violations.front())};
        ++cases;
    }
    os << cases << " randomized cases, refresh count >= floor(elapsed/interval) - 1, no access during ack";
    return {true, os.str()};
}

Outcome split_correctness()
{
    const auto cfg = with(kSrc + "/configs/ddr200.cfg", "power_up_scale=0.01\nrefresh_interval_ns=500\n");
    std::vector<TraceEntry> trace;
    std::mt19937_64 rng(31);
    const unsigned n = 400;
    for (unsigned i = 0; i < n; ++i)
    {
        TraceEntry e;
        e.write = true;
        e.addr = i * 64;
        e.data = {rng()};
        trace.push_back(e);
    }
    for (unsigned i = 0; i < n; ++i)
    {
        TraceEntry e;
        e.addr = i * 64;
        trace.push_back(e);
    }
    const auto rep = run(cfg, annotate_expected(trace, cfg.mode_register.burst_length));

    std::size_t write_cmds = 0;
    for (const auto& c : rep.commands)
        write_cmds += c.command == Command::Write;
    std::set<std::uint32_t> ids;
    for (const auto& t : rep.transactions)
        ids.insert(t.request_id);
    std::map<std::uint32_t, int> per_addr;
    for (const auto& b : rep.beats)
        ++per_addr[b.haddr * 2 + (b.write ? 1 : 0)];
    bool once = per_addr.size() == 2 * n;
    for (const auto& [k, v] : per_addr)
        once = once && v == 1;

    std::ostringstream os;
    os << rep.splits << " SPLIT collisions, " << write_cmds << " WRITE commands for " << n << " writes, "
       << rep.transactions.size() << " transactions, " << rep.mismatches.size() << " mismatches";
    const bool ok = rep.clean() && rep.splits >= 10 && write_cmds == n && ids.size() == rep.transactions.size() &&
                    rep.transactions.size() == 2 * n && once;
    return {ok, os.str()};
}

Outcome round_trips()
{
    std::mt19937_64 rng(8);
    const unsigned bls[] = {2, 4, 8};
    const std::uint8_t cls[] = {4, 5, 6};
    const int n = 20000;
    for (int i = 0; i < n; ++i)
    {
        ModeRegister mr;
        mr.burst_length = bls[rng() % 3];
        mr.burst_type = rng() % 2 ? BurstType::Interleaved : BurstType::Sequential;
        mr.cas_latency = CasLatency{cls[rng() % 3]};
        mr.operating_mode = static_cast<unsigned>(rng() % 64);
        if (!(decode_mode_register(encode_mode_register(mr)) == mr))
            return {false, "mode register round trip failed"};
    }
    int valid_words = 0;
    for (unsigned w = 0; w <= kAddressMask; ++w)
    {
        try
        {
            const auto mr = decode_mode_register(static_cast<AddressWord>(w));
            if (encode_mode_register(mr) != w)
                return {false, "mode word " + std::to_string(w) + " does not re-encode"};
            ++valid_words;
        }
        catch (const InvalidField&)
        {
        }
    }
    for (int i = 0; i < n; ++i)
    {
        Geometry g;
        g.row_bits = 1 + static_cast<unsigned>(rng() % 13);
        g.col_bits = 2 + static_cast<unsigned>(rng() % 9);
        const std::uint64_t lin = rng() % g.capacity_words();
        const auto a = split_address(lin, g);
        if (join_address(a, g) != lin || a.column >= (1u << g.col_bits) || a.row >= (1u << g.row_bits))
            return {false, "address round trip failed"};
    }
    for (int i = 0; i < n; ++i)
    {
        const std::uint64_t w = rng();
        if (unpack_read(pack_write(w, rng() % 100000)) != w)
            return {false, "datapath round trip failed"};
    }
    return {true, std::to_string(n) + " cases each; " + std::to_string(valid_words) +
                      " valid mode words re-encode exactly"};
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const Criterion all[] = {
        {1, "command table fidelity", 1.0, command_table},
        {2, "init sequence", 1.0, init_sequence},
        {3, "read/write latency", 5.0, single_access_latency},
        {4, "oracle data integrity", 30.0, data_integrity},
        {5, "checker sensitivity", 30.0, checker_sensitivity},
        {6, "refresh liveness and exclusivity", 10.0, refresh_liveness},
        {7, "split correctness", 10.0, split_correctness},
        {8, "round-trip properties", 10.0, round_trips},
    };
    int failed = 0;
    for (const auto& c : all)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.check();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > c.budget_s)
        {
            o.pass = false;
            o.detail += " [over time budget]";
        }
        failed += !o.pass;
        std::printf("%s criterion %d (%s): %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s);
    }
    std::printf("%d/8 criteria passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
