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

#pragma once

#include "ddrc/controller.hpp"
#include "ddrc/protocol.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddrc {

// AHB side of the core: a slave that turns bus beats into controller
// requests, and the trace-driven master model used as stimulus.
//
// The bus model keeps address and data of a beat together: the master holds
// a transfer until the slave completes it with hready high.

enum class HTrans : std::uint8_t
{
    Idle,
    Busy,
    NonSeq,
    Seq,
};

enum class HBurst : std::uint8_t
{
    Single,
    Incr,
    Wrap4,
    Incr4,
    Wrap8,
    Incr8,
    Wrap16,
    Incr16,
};

enum class HResp : std::uint8_t
{
    Okay,
    Error,
    Split,
};

std::string_view to_string(HBurst b) noexcept;
std::string_view to_string(HResp r) noexcept;
std::optional<HBurst> parse_burst(std::string_view s) noexcept;

/// Beats in a fixed-length burst; 0 for INCR.
unsigned burst_beats(HBurst b) noexcept;
bool is_wrapping(HBurst b) noexcept;

/// Only 64-bit transfers are supported.
inline constexpr unsigned kSystemHsize = 3;
inline constexpr unsigned kSystemBytes = 8;

struct AhbTransfer
{
    HTrans htrans = HTrans::Idle;
    std::uint32_t haddr = 0;
    bool hwrite = false;
    unsigned hsize = kSystemHsize;
    HBurst hburst = HBurst::Single;
    std::uint64_t hwdata = 0;

    bool operator==(const AhbTransfer&) const = default;
};

struct AhbResponse
{
    bool hready = true;
    HResp hresp = HResp::Okay;
    std::uint64_t hrdata = 0;
    /// Re-grant for a master that was answered SPLIT.
    bool hsplit = false;

    bool operator==(const AhbResponse&) const = default;
};

/// One trace line. For writes `data` holds the values; for reads it holds
/// optional expected values (nullopt = not checked).
struct TraceEntry
{
    bool write = false;
    HBurst burst = HBurst::Single;
    std::uint32_t addr = 0;
    std::vector<std::optional<std::uint64_t>> data;
    int line = 0;

    unsigned beats() const noexcept;
    bool operator==(const TraceEntry& o) const
    {
        return write == o.write && burst == o.burst && addr == o.addr && data == o.data;
    }
};

/// `<R|W> <KIND> <hex addr> [<hex data>...]`, `#` comments, optional leading
/// `format=1`. A `-` data token on a read line stands for an unchecked beat.
std::vector<TraceEntry> parse_trace(std::string_view text);
std::string format_trace(const std::vector<TraceEntry>& trace);

/// Byte addresses of every beat, with INCR/WRAP arithmetic for 8-byte beats.
std::vector<std::uint32_t> beat_addresses(HBurst burst, std::uint32_t start, unsigned beats);

/// NONSEQ then SEQ transfers for one trace entry.
std::vector<AhbTransfer> master_replay(const TraceEntry& entry);

/// Device-word index addressed by a byte address.
inline std::uint64_t linear_from_haddr(std::uint32_t haddr) noexcept { return haddr >> 1; }

struct ControllerStatus
{
    bool ref_ack = false;
    std::optional<std::uint32_t> taken_id;
    std::optional<std::uint32_t> completed_id;
    std::uint64_t read_data = 0;
};

enum class SlavePhase : std::uint8_t
{
    Ready,
    AwaitTaken,
    AwaitData,
    ErrorTail,
    SplitTail,
};

struct SlaveState
{
    SlavePhase phase = SlavePhase::Ready;
    /// Accepted request the controller has not taken yet, or the read in
    /// flight.
    std::optional<SystemRequest> outstanding;
    std::uint64_t write_data = 0;
    std::uint32_t next_id = 1;
    bool split_pending = false;
};

struct SlaveStep
{
    SlaveState next;
    AhbResponse response;
    std::optional<SystemRequest> request;
};

/// One bus clock of the slave. Writes complete once the controller takes
/// them; reads once the data is back. A beat presented while the controller
/// is in a refresh cycle is answered SPLIT and re-granted afterwards.
SlaveStep slave_step(const SlaveState& state, const AhbTransfer& transfer, const ControllerStatus& status,
                     const Geometry& geometry);

struct BeatResult
{
    std::size_t entry = 0;
    std::uint32_t haddr = 0;
    bool write = false;
    std::uint64_t data = 0;
    HResp resp = HResp::Okay;
    std::uint64_t cycle = 0;
    std::optional<std::uint64_t> expected;
};

/// Trace-driven bus master. Replays entries in order, retrying SPLIT beats
/// once re-granted and dropping the rest of a burst after ERROR.
class AhbMaster
{
public:
    explicit AhbMaster(std::vector<TraceEntry> trace);

    /// Transfer on the bus this clock.
    AhbTransfer drive() const;
    /// Slave response for the same clock.
    void observe(const AhbResponse& resp, std::uint64_t cycle);

    bool done() const noexcept { return entry_ >= trace_.size(); }
    const std::vector<BeatResult>& results() const noexcept { return results_; }
    std::uint64_t split_count() const noexcept { return splits_; }
    std::uint64_t retry_count() const noexcept { return retries_; }

private:
    void load_entry();

    std::vector<TraceEntry> trace_;
    std::size_t entry_ = 0;
    std::vector<AhbTransfer> beats_;
    std::size_t beat_ = 0;
    bool awaiting_grant_ = false;
    bool restart_ = false;
    std::vector<BeatResult> results_;
    std::uint64_t splits_ = 0;
    std::uint64_t retries_ = 0;
};

} // namespace ddrc
