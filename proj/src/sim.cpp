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

#include "ddrc/sim.hpp"

#include "ddrc/datapath.hpp"
#include "ddrc/error.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

namespace ddrc {

namespace {

bool is_init_command_state(InitState s)
{
    switch (s)
    {
    case InitState::Nop:
    case InitState::Precharge:
    case InitState::LoadExtended:
    case InitState::LoadMode:
    case InitState::AutoRefresh1:
    case InitState::AutoRefresh2:
        return true;
    default:
        return false;
    }
}

bool is_init_wait_state(InitState s)
{
    return s == InitState::WaitRp || s == InitState::WaitMrd || s == InitState::WaitRfc1 ||
           s == InitState::WaitRfc2;
}

std::string hex(std::uint64_t v, int width = 0)
{
    std::ostringstream os;
    os << "0x" << std::hex << std::setfill('0') << std::setw(width) << v;
    return os.str();
}

std::uint64_t all_poison(unsigned burst_length)
{
    const std::uint64_t p = kPoison;
    if (burst_length == 2)
        return p | (p << 16);
    return p | (p << 16) | (p << 32) | (p << 48);
}

} // namespace

double SimReport::bandwidth_gbps() const noexcept
{
    const std::uint64_t start = init_done_cycle.value_or(0);
    if (total_cycles <= start || t_ck_ns <= 0.0)
        return 0.0;
    return static_cast<double>(bytes()) / (static_cast<double>(total_cycles - start) * t_ck_ns);
}

SimReport run(const SimConfig& config, const std::vector<TraceEntry>& trace, const RunOptions& options)
{
    config.validate();
    Controller ctl(config.controller_config());
    MemoryModel mem(config.memory_config());
    AhbMaster master(trace);
    SlaveState slave;
    RefreshCounter refresh;
    ControllerStatus status;

    const unsigned bl = config.mode_register.burst_length;
    const double tck = config.timing.t_ck_ns;
    const double power_up = config.effective_power_up_ns();

    SimReport rep;
    rep.t_ck_ns = tck;
    bool init_done = false;
    bool inflight_read = true;
    BeatStream wbeats;
    BeatStream capture;
    std::uint64_t drained_at = 0;
    bool draining = false;

    std::uint64_t cycle = 0;
    for (;; ++cycle)
    {
        if (cycle >= config.max_cycles)
        {
            rep.timed_out = true;
            break;
        }

        const AhbTransfer t = init_done ? master.drive() : AhbTransfer{};
        const SlaveStep step = slave_step(slave, t, status, config.geometry);
        slave = step.next;
        if (init_done)
            master.observe(step.response, cycle);

        const SystemRequest* pending =
            slave.phase == SlavePhase::AwaitTaken && slave.outstanding ? &*slave.outstanding : nullptr;
        ControllerInputs in;
        in.reset = cycle == 0;
        in.sys_dly_200us_done = static_cast<double>(cycle) * tck >= power_up;
        in.sys_adsn = !pending;
        if (pending)
        {
            in.sys_addr = pending->linear_addr;
            in.request_id = pending->request_id;
        }
        in.sys_r_wn = pending && ctl.cmd_fsm().state == CmdState::Idle ? pending->is_read : inflight_read;
        in.sys_ref_req = refresh.ref_req;

        const ControllerCycle cc = ctl.tick(in);

        ControllerStatus next_status;
        next_status.ref_ack = cc.out.sys_ref_ack;
        if (cc.request_taken && pending)
        {
            inflight_read = pending->is_read;
            if (!inflight_read)
                wbeats = write_burst(slave.write_data, bl, 0);
            next_status.taken_id = pending->request_id;
        }

        mem.clock(cycle, cc.out.pins, cc.out.ddr_addr, cc.out.ddr_bank);
        if (cc.out.command != Command::Nop && cc.out.command != Command::Deselect)
            rep.commands.push_back({cycle, cc.out.command, cc.out.ddr_addr, cc.out.ddr_bank, cc.out.sys_ref_ack});

        for (const Edge edge : {Edge::Rising, Edge::Falling})
        {
            const std::size_t idx = cc.out.data_clock * 2U + (edge == Edge::Falling ? 1U : 0U);
            std::optional<std::uint16_t> drive;
            if (cc.out.data_phase == DataPhase::WriteDrive && idx < wbeats.size() && !wbeats.beats[idx].masked)
                drive = wbeats.beats[idx].word;
            const bool cap = cc.out.data_phase == DataPhase::ReadCapture;
            const auto v = mem.data_beat(cycle, edge, drive, cap);
            if (cap)
                capture.beats.push_back(Beat{cycle, edge, v.value_or(kPoison), false});
        }

        if (cc.completed)
        {
            const auto& c = *cc.completed;
            rep.transactions.push_back({c.request.request_id, c.request.is_read, c.request.linear_addr,
                                        c.start_cycle, c.end_cycle, c.latency_clocks()});
            if (c.request.is_read)
            {
                next_status.completed_id = c.request.request_id;
                try
                {
                    next_status.read_data = read_burst_word(capture, bl);
                }
                catch (const MalformedStream&)
                {
                    next_status.read_data = all_poison(bl);
                }
                capture.beats.clear();
            }
        }
        status = next_status;

        refresh = init_done ? refresh_counter_step(refresh, cc.out.sys_ref_ack, config.timing) : RefreshCounter{};
        mem.refresh_audit(cycle);

        if (options.fsm_trace)
            rep.fsm_trace.push_back({cycle, cc.istate, cc.cstate, cc.out.command, cc.out.ddr_addr, cc.out.ddr_bank,
                                     cc.out.sys_init_done, in.sys_ref_req, cc.out.sys_ref_ack, in.sys_adsn});

        if (cc.out.sys_init_done && !init_done)
        {
            init_done = true;
            rep.init_done_cycle = cycle;
            if (options.stop_after_init)
                break;
        }

        const bool drained = init_done && master.done() && slave.phase == SlavePhase::Ready && !ctl.busy();
        if (drained)
        {
            if (!draining)
                drained_at = cycle;
            draining = true;
        }
        if (draining && drained && cycle - drained_at >= options.idle_tail)
            break;
    }

    rep.total_cycles = rep.timed_out ? config.max_cycles : cycle + 1;
    rep.violations = mem.violations();
    rep.beats = master.results();
    rep.splits = master.split_count();
    for (const auto& b : rep.beats)
    {
        if (b.resp == HResp::Error)
        {
            ++rep.errors;
            continue;
        }
        if (b.write)
            ++rep.writes;
        else
            ++rep.reads;
        if (!b.write && b.expected && *b.expected != b.data)
            rep.mismatches.push_back({b.haddr, *b.expected, b.data, b.cycle});
    }
    for (const auto& c : rep.commands)
        if (c.command == Command::AutoRefresh && rep.init_done_cycle && c.cycle > *rep.init_done_cycle)
            ++rep.refresh_count;
    return rep;
}

nlohmann::json report_json(const SimReport& r)
{
    using nlohmann::json;
    json j;
    j["total_cycles"] = r.total_cycles;
    j["init_done_cycle"] = r.init_done_cycle ? json(*r.init_done_cycle) : json(nullptr);
    j["reads"] = r.reads;
    j["writes"] = r.writes;
    j["errors"] = r.errors;
    j["splits"] = r.splits;
    j["refresh_count"] = r.refresh_count;
    j["bytes"] = r.bytes();
    j["bandwidth_gbps"] = r.bandwidth_gbps();
    j["timed_out"] = r.timed_out;

    for (const bool read : {true, false})
    {
        unsigned lo = 0;
        unsigned hi = 0;
        std::uint64_t sum = 0;
        std::uint64_t n = 0;
        for (const auto& t : r.transactions)
        {
            if (t.is_read != read)
                continue;
            lo = n == 0 ? t.latency_clocks : std::min(lo, t.latency_clocks);
            hi = std::max(hi, t.latency_clocks);
            sum += t.latency_clocks;
            ++n;
        }
        json lat;
        lat["count"] = n;
        lat["min"] = lo;
        lat["max"] = hi;
        lat["mean"] = n ? static_cast<double>(sum) / static_cast<double>(n) : 0.0;
        j["latency_clocks"][read ? "read" : "write"] = lat;
    }

    json v = json::array();
    for (const auto& x : r.violations)
        v.push_back({{"cycle", x.cycle}, {"kind", x.kind_name()}, {"detail", x.detail}});
    j["violations"] = v;
    json m = json::array();
    for (const auto& x : r.mismatches)
        m.push_back({{"haddr", hex(x.haddr)}, {"expected", hex(x.expected, 16)}, {"actual", hex(x.actual, 16)},
                     {"cycle", x.cycle}});
    j["data_mismatches"] = m;
    return j;
}

std::string format_report(const SimReport& r)
{
    std::ostringstream os;
    os << "cycles          " << r.total_cycles << '\n';
    os << "init done       ";
    if (r.init_done_cycle)
        os << "cycle " << *r.init_done_cycle << '\n';
    else
        os << "never\n";
    os << "transfers       " << r.reads << " read, " << r.writes << " write, " << r.errors << " error, "
       << r.splits << " split\n";
    os << "refreshes       " << r.refresh_count << '\n';
    os << "bandwidth       " << std::fixed << std::setprecision(4) << r.bandwidth_gbps() << " GB/s\n";
    for (const bool read : {true, false})
    {
        unsigned lo = 0;
        unsigned hi = 0;
        std::uint64_t n = 0;
        for (const auto& t : r.transactions)
        {
            if (t.is_read != read)
                continue;
            lo = n == 0 ? t.latency_clocks : std::min(lo, t.latency_clocks);
            hi = std::max(hi, t.latency_clocks);
            ++n;
        }
        os << (read ? "read latency    " : "write latency   ");
        if (n)
            os << lo << ".." << hi << " clocks\n";
        else
            os << "-\n";
    }
    os << "violations      " << r.violations.size() << '\n';
    for (const auto& v : r.violations)
        os << "  " << format_violation(v) << '\n';
    os << "mismatches      " << r.mismatches.size() << '\n';
    for (const auto& m : r.mismatches)
        os << "  cycle=" << m.cycle << " haddr=" << hex(m.haddr) << " expected=" << hex(m.expected, 16)
           << " actual=" << hex(m.actual, 16) << '\n';
    if (r.timed_out)
        os << "TIMEOUT after " << r.total_cycles << " cycles\n";
    return os.str();
}

std::string format_fsm_trace(const std::vector<FsmTraceEntry>& trace)
{
    std::ostringstream os;
    os << "# cycle istate cstate cmd addr ba init_done ref_req ref_ack adsn\n";
    for (const auto& e : trace)
        os << e.cycle << ' ' << to_string(e.istate) << ' ' << to_string(e.cstate) << ' ' << to_string(e.command)
           << ' ' << hex(e.addr, 4) << ' ' << e.bank << ' ' << e.init_done << ' ' << e.ref_req << ' ' << e.ref_ack
           << ' ' << e.adsn << '\n';
    return os.str();
}

InitTrace init_trace(const SimConfig& config)
{
    RunOptions opt;
    opt.fsm_trace = true;
    opt.stop_after_init = true;
    const SimReport rep = run(config, {}, opt);
    if (!rep.init_done_cycle)
        throw Error("initialization did not finish within " + std::to_string(config.max_cycles) + " cycles");

    InitTrace out;
    out.init_done_cycle = *rep.init_done_cycle;
    out.violations = rep.violations;
    const auto& f = rep.fsm_trace;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
    {
        if (!is_init_command_state(f[i].istate))
            continue;
        const auto& bus = f[i + 1];
        InitTraceEntry e;
        e.cycle = bus.cycle;
        e.command = bus.command;
        e.addr = bus.addr;
        e.bank = bus.bank;
        e.state = f[i].istate;
        for (std::size_t k = i + 1; k < f.size() && is_init_wait_state(f[k].istate); ++k)
            ++e.wait;
        switch (bus.command)
        {
        case Command::Precharge:
            e.label = (bus.addr & kA10) ? "PRE_ALL" : "PRE";
            break;
        case Command::LoadModeRegister:
            e.label = bus.bank == 1 ? "EMRS" : "MRS";
            break;
        default:
            e.label = std::string(to_string(bus.command));
            break;
        }
        out.commands.push_back(e);
    }
    return out;
}

std::string format_init_trace(const InitTrace& t)
{
    std::ostringstream os;
    os << "format=1\n";
    for (const auto& e : t.commands)
        os << "cycle=" << e.cycle << " cmd=" << e.label << " addr=" << hex(e.addr, 4) << " ba=" << e.bank
           << " state=" << to_string(e.state) << " wait=" << e.wait << '\n';
    os << "init_done cycle=" << t.init_done_cycle << '\n';
    for (const auto& v : t.violations)
        os << "violation " << format_violation(v) << '\n';
    return os.str();
}

void ReferenceMemory::write(std::uint32_t haddr, std::uint64_t word)
{
    words_[haddr] = burst_length_ == 2 ? (word & 0xFFFFFFFFULL) : word;
}

std::uint64_t ReferenceMemory::read(std::uint32_t haddr) const
{
    const auto it = words_.find(haddr);
    return it == words_.end() ? unwritten() : it->second;
}

std::uint64_t ReferenceMemory::unwritten() const noexcept
{
    return all_poison(burst_length_);
}

std::vector<TraceEntry> random_traffic(std::uint64_t seed, std::size_t transfers, const Geometry& geometry)
{
    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::uint64_t n) { return n == 0 ? 0 : rng() % n; };

    constexpr std::array<HBurst, 8> kinds{HBurst::Single, HBurst::Incr,  HBurst::Wrap4, HBurst::Incr4,
                                          HBurst::Wrap8,  HBurst::Incr8, HBurst::Wrap16, HBurst::Incr16};
    const std::uint64_t words = geometry.capacity_words() / Geometry::words_per_system_word;
    const std::uint64_t top = std::min<std::uint64_t>(words * kSystemBytes, std::uint64_t{1} << 32);

    std::vector<TraceEntry> out;
    std::vector<std::size_t> written;
    std::size_t beats = 0;
    while (beats < transfers)
    {
        TraceEntry e;
        const bool read = !written.empty() && pick(2) == 0;
        if (!read)
        {
            e.write = true;
            e.burst = kinds[pick(kinds.size())];
            unsigned n = burst_beats(e.burst);
            if (n == 0)
                n = 1 + static_cast<unsigned>(pick(8));
            n = static_cast<unsigned>(std::min<std::size_t>(n, transfers - beats));
            if (burst_beats(e.burst) > n)
                e.burst = n == 1 ? HBurst::Single : HBurst::Incr;
            std::uint32_t addr = static_cast<std::uint32_t>(pick(top / kSystemBytes) * kSystemBytes);
            if (!is_wrapping(e.burst))
            {
                const std::uint32_t block = addr & ~1023U;
                const std::uint32_t room = 1024U / kSystemBytes - n + 1;
                addr = block + static_cast<std::uint32_t>(pick(room)) * kSystemBytes;
                if (addr + n * kSystemBytes > top)
                    addr = static_cast<std::uint32_t>(top - n * kSystemBytes) & ~1023U;
            }
            e.addr = addr;
            for (unsigned i = 0; i < n; ++i)
                e.data.emplace_back(rng());
            written.push_back(out.size());
        }
        else
        {
            const TraceEntry& w = out[written[pick(written.size())]];
            const unsigned wn = w.beats();
            const bool whole = wn <= transfers - beats && pick(2) == 0;
            if (whole)
            {
                e.burst = w.burst;
                e.addr = w.addr;
                if (burst_beats(w.burst) == 0)
                    e.data.assign(wn, std::nullopt);
            }
            else
            {
                const auto addrs = beat_addresses(w.burst, w.addr, wn);
                e.burst = HBurst::Single;
                e.addr = addrs[pick(addrs.size())];
            }
        }
        beats += e.beats();
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<TraceEntry> annotate_expected(std::vector<TraceEntry> trace, unsigned burst_length)
{
    ReferenceMemory ref(burst_length);
    for (auto& e : trace)
    {
        const auto addrs = beat_addresses(e.burst, e.addr, e.beats());
        if (e.write)
        {
            for (std::size_t i = 0; i < addrs.size(); ++i)
                ref.write(addrs[i], e.data[i].value_or(0));
            continue;
        }
        e.data.resize(addrs.size());
        for (std::size_t i = 0; i < addrs.size(); ++i)
            e.data[i] = ref.read(addrs[i]);
    }
    return trace;
}

} // namespace ddrc
