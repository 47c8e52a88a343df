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

#include "ddrc/ahb.hpp"
#include "ddrc/controller.hpp"
#include "ddrc/memory_model.hpp"
#include "ddrc/protocol.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ddrc {

struct SimConfig
{
    TimingConfig timing;
    Geometry geometry;
    ModeRegister mode_register;
    AddressWord emrs_payload = 0;
    /// Unset: derived from the mode register with the DLL reset bit.
    std::optional<AddressWord> mrs_reset_payload;
    double power_up_scale = 1.0;
    double refresh_grace_factor = 2.0;
    std::uint64_t max_cycles = 10'000'000;
    std::uint64_t seed = 1;
    /// Per-parameter wait trims, used for fault injection only.
    WaitTrim trim;
    std::vector<std::string> warnings;

    ControllerConfig controller_config() const;
    MemoryConfig memory_config() const;
    /// Power-up wait actually simulated.
    double effective_power_up_ns() const noexcept { return timing.power_up_delay_ns * power_up_scale; }
    /// Throws ConfigError.
    void validate() const;
};

/// `key=value` lines with `#` comments. Throws ConfigError naming the key and
/// line for unknown keys and bad values.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);
std::vector<TraceEntry> load_trace(const std::string& path);

struct RunOptions
{
    bool fsm_trace = false;
    bool stop_after_init = false;
    /// Clocks to keep running once the trace is drained; the run then ends at
    /// the first clock the controller is idle.
    std::uint64_t idle_tail = 0;
};

struct TransactionRecord
{
    std::uint32_t request_id = 0;
    bool is_read = true;
    std::uint64_t linear_addr = 0;
    std::uint64_t start_cycle = 0;
    std::uint64_t end_cycle = 0;
    unsigned latency_clocks = 0;
};

struct CommandRecord
{
    std::uint64_t cycle = 0;
    Command command = Command::Nop;
    AddressWord addr = 0;
    unsigned bank = 0;
    bool ref_ack = false;
};

struct FsmTraceEntry
{
    std::uint64_t cycle = 0;
    InitState istate = InitState::Idle;
    CmdState cstate = CmdState::Idle;
    Command command = Command::Nop;
    AddressWord addr = 0;
    unsigned bank = 0;
    bool init_done = false;
    bool ref_req = false;
    bool ref_ack = false;
    bool adsn = true;
};

struct DataMismatch
{
    std::uint32_t haddr = 0;
    std::uint64_t expected = 0;
    std::uint64_t actual = 0;
    std::uint64_t cycle = 0;
};

struct SimReport
{
    std::uint64_t total_cycles = 0;
    std::optional<std::uint64_t> init_done_cycle;
    std::vector<TransactionRecord> transactions;
    std::vector<CommandRecord> commands;
    std::vector<FsmTraceEntry> fsm_trace;
    std::vector<BeatResult> beats;
    std::vector<Violation> violations;
    std::vector<DataMismatch> mismatches;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t errors = 0;
    std::uint64_t splits = 0;
    std::uint64_t refresh_count = 0;
    double t_ck_ns = 0.0;
    bool timed_out = false;

    std::uint64_t bytes() const noexcept { return (reads + writes) * kSystemBytes; }
    /// Bytes per nanosecond, i.e. GB/s.
    double bandwidth_gbps() const noexcept;
    bool clean() const noexcept { return violations.empty() && mismatches.empty() && !timed_out; }
};

SimReport run(const SimConfig& config, const std::vector<TraceEntry>& trace, const RunOptions& options = {});

nlohmann::json report_json(const SimReport& report);
std::string format_report(const SimReport& report);
std::string format_fsm_trace(const std::vector<FsmTraceEntry>& trace);

struct InitTraceEntry
{
    std::uint64_t cycle = 0;
    std::string label;
    Command command = Command::Nop;
    AddressWord addr = 0;
    unsigned bank = 0;
    InitState state = InitState::Idle;
    /// Delay states spent after the command state.
    unsigned wait = 0;
};

struct InitTrace
{
    std::vector<InitTraceEntry> commands;
    std::uint64_t init_done_cycle = 0;
    std::vector<Violation> violations;
};

InitTrace init_trace(const SimConfig& config);
std::string format_init_trace(const InitTrace& trace);

/// Flat word-addressed reference memory.
class ReferenceMemory
{
public:
    explicit ReferenceMemory(unsigned burst_length = 4) : burst_length_(burst_length) {}

    void write(std::uint32_t haddr, std::uint64_t word);
    std::uint64_t read(std::uint32_t haddr) const;
    /// What the controller returns for a word never written.
    std::uint64_t unwritten() const noexcept;

private:
    unsigned burst_length_;
    std::unordered_map<std::uint32_t, std::uint64_t> words_;
};

/// Deterministic mixed traffic: all burst kinds, every read covers words
/// already written.
std::vector<TraceEntry> random_traffic(std::uint64_t seed, std::size_t transfers, const Geometry& geometry);
/// Fill in expected read data from the reference memory.
std::vector<TraceEntry> annotate_expected(std::vector<TraceEntry> trace, unsigned burst_length);

} // namespace ddrc
