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

#include "ddrc/ahb.hpp"

#include "ddrc/error.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace ddrc {

namespace {

struct BurstName
{
    HBurst burst;
    std::string_view name;
};

constexpr std::array<BurstName, 8> kBurstNames{{
    {HBurst::Single, "SINGLE"},
    {HBurst::Incr, "INCR"},
    {HBurst::Wrap4, "WRAP4"},
    {HBurst::Incr4, "INCR4"},
    {HBurst::Wrap8, "WRAP8"},
    {HBurst::Incr8, "INCR8"},
    {HBurst::Wrap16, "WRAP16"},
    {HBurst::Incr16, "INCR16"},
}};

constexpr std::uint32_t kBoundary = 1024;

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::uint64_t> parse_hex(std::string_view s)
{
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);
    if (s.empty() || s.size() > 16)
        return std::nullopt;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::vector<std::string_view> tokens(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size())
    {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string hex(std::uint64_t v)
{
    std::ostringstream os;
    os << "0x" << std::hex << v;
    return os.str();
}

} // namespace

std::string_view to_string(HBurst b) noexcept
{
    for (const auto& n : kBurstNames)
        if (n.burst == b)
            return n.name;
    return "?";
}

std::string_view to_string(HResp r) noexcept
{
    switch (r)
    {
    case HResp::Okay:
        return "OKAY";
    case HResp::Error:
        return "ERROR";
    case HResp::Split:
        return "SPLIT";
    }
    return "?";
}

std::optional<HBurst> parse_burst(std::string_view s) noexcept
{
    for (const auto& n : kBurstNames)
        if (n.name == s)
            return n.burst;
    return std::nullopt;
}

unsigned burst_beats(HBurst b) noexcept
{
    switch (b)
    {
    case HBurst::Single:
        return 1;
    case HBurst::Incr:
        return 0;
    case HBurst::Wrap4:
    case HBurst::Incr4:
        return 4;
    case HBurst::Wrap8:
    case HBurst::Incr8:
        return 8;
    case HBurst::Wrap16:
    case HBurst::Incr16:
        return 16;
    }
    return 0;
}

bool is_wrapping(HBurst b) noexcept
{
    return b == HBurst::Wrap4 || b == HBurst::Wrap8 || b == HBurst::Wrap16;
}

unsigned TraceEntry::beats() const noexcept
{
    const unsigned fixed = burst_beats(burst);
    if (fixed != 0)
        return fixed;
    return data.empty() ? 1U : static_cast<unsigned>(data.size());
}

std::vector<std::uint32_t> beat_addresses(HBurst burst, std::uint32_t start, unsigned beats)
{
    std::vector<std::uint32_t> out;
    out.reserve(beats);
    if (is_wrapping(burst))
    {
        const std::uint32_t window = beats * kSystemBytes;
        const std::uint32_t base = start & ~(window - 1);
        for (unsigned i = 0; i < beats; ++i)
            out.push_back(base + ((start - base + i * kSystemBytes) % window));
    }
    else
    {
        for (unsigned i = 0; i < beats; ++i)
            out.push_back(start + i * kSystemBytes);
    }
    return out;
}

std::vector<TraceEntry> parse_trace(std::string_view text)
{
    std::vector<TraceEntry> out;
    int line_no = 0;
    bool seen_content = false;
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
        if (line.substr(0, 7) == "format=")
        {
            if (seen_content)
                throw TraceFormatError(line_no, "format line must come first");
            if (trim(line.substr(7)) != "1")
                throw TraceFormatError(line_no, "unsupported trace format '" + std::string(line.substr(7)) + "'");
            seen_content = true;
            continue;
        }
        seen_content = true;

        const auto tok = tokens(line);
        if (tok.size() < 3)
            throw TraceFormatError(line_no, "expected <R|W> <KIND> <addr> [data...]");
        TraceEntry e;
        e.line = line_no;
        if (tok[0] == "W")
            e.write = true;
        else if (tok[0] != "R")
            throw TraceFormatError(line_no, "direction must be R or W, got '" + std::string(tok[0]) + "'");
        const auto burst = parse_burst(tok[1]);
        if (!burst)
            throw TraceFormatError(line_no, "unknown burst kind '" + std::string(tok[1]) + "'");
        e.burst = *burst;
        const auto addr = parse_hex(tok[2]);
        if (!addr || *addr > 0xFFFFFFFFULL)
            throw TraceFormatError(line_no, "bad address '" + std::string(tok[2]) + "'");
        e.addr = static_cast<std::uint32_t>(*addr);
        if (e.addr % kSystemBytes != 0)
            throw TraceFormatError(line_no, "address " + hex(e.addr) + " is not 8-byte aligned");

        for (std::size_t i = 3; i < tok.size(); ++i)
        {
            if (tok[i] == "-" && !e.write)
            {
                e.data.emplace_back(std::nullopt);
                continue;
            }
            const auto v = parse_hex(tok[i]);
            if (!v)
                throw TraceFormatError(line_no, "bad data word '" + std::string(tok[i]) + "'");
            e.data.emplace_back(*v);
        }

        const unsigned fixed = burst_beats(e.burst);
        if (e.write)
        {
            if (fixed != 0 && e.data.size() != fixed)
                throw TraceFormatError(line_no, std::string(to_string(e.burst)) + " write needs " +
                                                    std::to_string(fixed) + " data words, got " +
                                                    std::to_string(e.data.size()));
            if (fixed == 0 && e.data.empty())
                throw TraceFormatError(line_no, "INCR write needs at least one data word");
        }
        else if (fixed != 0 && !e.data.empty() && e.data.size() != fixed)
        {
            throw TraceFormatError(line_no, std::string(to_string(e.burst)) + " read lists " +
                                                std::to_string(e.data.size()) + " expected words, want 0 or " +
                                                std::to_string(fixed));
        }

        if (!is_wrapping(e.burst))
        {
            const std::uint64_t last = static_cast<std::uint64_t>(e.addr) + (e.beats() - 1ULL) * kSystemBytes;
            if (last > 0xFFFFFFFFULL || e.addr / kBoundary != last / kBoundary)
                throw TraceFormatError(line_no, "burst at " + hex(e.addr) + " crosses a 1 KB boundary");
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string format_trace(const std::vector<TraceEntry>& trace)
{
    std::ostringstream os;
    os << "format=1\n";
    for (const auto& e : trace)
    {
        os << (e.write ? 'W' : 'R') << ' ' << to_string(e.burst) << ' ' << hex(e.addr);
        for (const auto& d : e.data)
        {
            if (d)
                os << ' ' << hex(*d);
            else
                os << " -";
        }
        os << '\n';
    }
    return os.str();
}

std::vector<AhbTransfer> master_replay(const TraceEntry& entry)
{
    const auto addrs = beat_addresses(entry.burst, entry.addr, entry.beats());
    std::vector<AhbTransfer> out;
    out.reserve(addrs.size());
    for (std::size_t i = 0; i < addrs.size(); ++i)
    {
        AhbTransfer t;
        t.htrans = i == 0 ? HTrans::NonSeq : HTrans::Seq;
        t.haddr = addrs[i];
        t.hwrite = entry.write;
        t.hsize = kSystemHsize;
        t.hburst = entry.burst;
        if (entry.write)
            t.hwdata = entry.data[i].value_or(0);
        out.push_back(t);
    }
    return out;
}

SlaveStep slave_step(const SlaveState& state, const AhbTransfer& transfer, const ControllerStatus& status,
                     const Geometry& geometry)
{
    SlaveStep s{state, {}, std::nullopt};
    auto& next = s.next;
    auto& resp = s.response;

    switch (state.phase)
    {
    case SlavePhase::Ready: {
        if (state.split_pending && !status.ref_ack)
        {
            resp.hsplit = true;
            next.split_pending = false;
        }
        if (transfer.htrans != HTrans::NonSeq && transfer.htrans != HTrans::Seq)
            break;
        const std::uint64_t linear = linear_from_haddr(transfer.haddr);
        const bool bad = transfer.hsize != kSystemHsize || transfer.haddr % kSystemBytes != 0 ||
                         linear + 3 >= geometry.capacity_words();
        if (bad)
        {
            resp.hready = false;
            resp.hresp = HResp::Error;
            next.phase = SlavePhase::ErrorTail;
        }
        else if (status.ref_ack)
        {
            resp.hready = false;
            resp.hresp = HResp::Split;
            next.phase = SlavePhase::SplitTail;
            next.split_pending = true;
            resp.hsplit = false;
        }
        else
        {
            SystemRequest req;
            req.linear_addr = linear;
            req.is_read = !transfer.hwrite;
            req.beat_count = 1;
            req.request_id = state.next_id;
            next.next_id = state.next_id + 1;
            next.outstanding = req;
            next.write_data = transfer.hwdata;
            next.phase = SlavePhase::AwaitTaken;
            resp.hready = false;
            s.request = req;
        }
        break;
    }
    case SlavePhase::AwaitTaken:
        resp.hready = false;
        if (status.taken_id && state.outstanding && *status.taken_id == state.outstanding->request_id)
        {
            if (state.outstanding->is_read)
            {
                next.phase = SlavePhase::AwaitData;
            }
            else
            {
                resp.hready = true;
                next.phase = SlavePhase::Ready;
                next.outstanding.reset();
            }
        }
        break;
    case SlavePhase::AwaitData:
        resp.hready = false;
        if (status.completed_id && state.outstanding && *status.completed_id == state.outstanding->request_id)
        {
            resp.hready = true;
            resp.hrdata = status.read_data;
            next.phase = SlavePhase::Ready;
            next.outstanding.reset();
        }
        break;
    case SlavePhase::ErrorTail:
        resp.hready = true;
        resp.hresp = HResp::Error;
        next.phase = SlavePhase::Ready;
        break;
    case SlavePhase::SplitTail:
        resp.hready = true;
        resp.hresp = HResp::Split;
        next.phase = SlavePhase::Ready;
        break;
    }
    return s;
}

AhbMaster::AhbMaster(std::vector<TraceEntry> trace) : trace_(std::move(trace))
{
    load_entry();
}

void AhbMaster::load_entry()
{
    beats_.clear();
    beat_ = 0;
    if (entry_ < trace_.size())
        beats_ = master_replay(trace_[entry_]);
}

AhbTransfer AhbMaster::drive() const
{
    if (done() || awaiting_grant_)
        return AhbTransfer{};
    AhbTransfer t = beats_[beat_];
    if (restart_)
        t.htrans = HTrans::NonSeq;
    return t;
}

void AhbMaster::observe(const AhbResponse& resp, std::uint64_t cycle)
{
    if (awaiting_grant_)
    {
        if (resp.hsplit)
        {
            awaiting_grant_ = false;
            restart_ = true;
            ++retries_;
        }
        return;
    }
    if (done() || !resp.hready)
        return;

    const auto& entry = trace_[entry_];
    const auto& t = beats_[beat_];
    if (resp.hresp == HResp::Split)
    {
        awaiting_grant_ = true;
        ++splits_;
        return;
    }

    BeatResult r;
    r.entry = entry_;
    r.haddr = t.haddr;
    r.write = t.hwrite;
    r.data = t.hwrite ? t.hwdata : resp.hrdata;
    r.resp = resp.hresp;
    r.cycle = cycle;
    if (!t.hwrite && beat_ < entry.data.size())
        r.expected = entry.data[beat_];
    results_.push_back(r);
    restart_ = false;

    if (resp.hresp == HResp::Error || ++beat_ >= beats_.size())
    {
        ++entry_;
        load_entry();
    }
}

} // namespace ddrc
