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

#include "ddrc/protocol.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace ddrc {

// Main control module: the initialization FSM, the command FSM, the refresh
// counter and the registered address/command generation that drives the
// DDR pins.

/// Request handed from the bus front end to the controller.
struct SystemRequest
{
    /// Device-word index of the first column (see split_address).
    std::uint64_t linear_addr = 0;
    bool is_read = true;
    /// 64-bit system words carried; the front end issues one per bus beat.
    unsigned beat_count = 1;
    std::uint32_t request_id = 0;

    bool operator==(const SystemRequest&) const = default;
};

enum class InitState : std::uint8_t
{
    Idle,
    Nop,
    Precharge,
    WaitRp,
    LoadExtended,
    LoadMode,
    WaitMrd,
    AutoRefresh1,
    WaitRfc1,
    AutoRefresh2,
    WaitRfc2,
    Ready,
};

enum class CmdState : std::uint8_t
{
    Idle,
    Active,
    WaitRcd,
    ReadAuto,
    CasLatency,
    ReadData,
    WriteAuto,
    WriteData,
    WaitDal,
    AutoRefresh,
    WaitRfc,
};

/// State names as they appear in traces ("i_tRP", "c_READA", ...).
std::string_view to_string(InitState s) noexcept;
std::string_view to_string(CmdState s) noexcept;

struct InitFsm
{
    InitState state = InitState::Idle;
    /// Clocks left in the current delay state, this one included.
    unsigned remaining = 0;
    /// Where the current delay state leads.
    InitState after_wait = InitState::Idle;
    /// Set once the DLL-reset load is done: the second PRECHARGE ALL and the
    /// final mode load follow.
    bool second_pass = false;

    bool operator==(const InitFsm&) const = default;
};

struct CmdFsm
{
    CmdState state = CmdState::Idle;
    /// Clocks left in the current state, this one included.
    unsigned remaining = 0;
    /// Clocks the current c_cl/c_rdata/c_wdata/delay state lasts in total.
    unsigned span = 0;
    std::optional<SystemRequest> request;
    /// Request sampled together with a refresh request; it runs as soon as
    /// the refresh cycle is over.
    bool deferred = false;
    /// Read/write direction was fixed when the request was latched rather
    /// than sampled from sys_r_wn at the end of tRCD.
    bool rw_latched = false;

    bool operator==(const CmdFsm&) const = default;
};

struct ControllerInputs
{
    bool reset = false;
    bool sys_dly_200us_done = false;
    /// Active low request strobe.
    bool sys_adsn = true;
    /// High for read.
    bool sys_r_wn = true;
    bool sys_ref_req = false;
    std::uint64_t sys_addr = 0;
    std::uint32_t request_id = 0;
};

enum class DataPhase : std::uint8_t
{
    None,
    ReadCapture,
    WriteDrive,
};

struct ControllerOutputs
{
    Command command = Command::Nop;
    ControlSignals pins = encode_command(Command::Nop);
    AddressWord ddr_addr = 0;
    unsigned ddr_bank = 0;
    bool sys_init_done = false;
    bool sys_ref_ack = false;
    DataPhase data_phase = DataPhase::None;
    /// Clock within the burst (0-based) for the current data phase.
    unsigned data_clock = 0;
};

/// Per-parameter adjustment of the wait-state counts, for checker mutation
/// tests. Zero in normal use.
struct WaitTrim
{
    int rp = 0;
    int rcd = 0;
    int rfc = 0;
    int mrd = 0;
    int dal = 0;
};

struct ControllerConfig
{
    TimingConfig timing;
    Geometry geometry;
    ModeRegister mode_register;
    AddressWord emrs_payload = 0;
    AddressWord mrs_reset_payload = 0;
    WaitTrim trim;

    /// Wait states following the command state that starts `p`.
    unsigned wait_cycles(TimingParam p) const noexcept;
    void validate() const;
};

/// Default DLL-reset load: the operating mode register with A8 set.
AddressWord default_mrs_reset_payload(const ModeRegister& mr);

InitFsm init_step(const InitFsm& fsm, const ControllerInputs& in, const ControllerConfig& cfg);

CmdFsm cmd_step(const CmdFsm& fsm, bool init_done, const ControllerInputs& in, const ControllerConfig& cfg);

/// Command, address and bank the two FSM states call for. The controller
/// registers this, so the pins show it one clock later.
ControllerOutputs signal_generate(const InitFsm& init, const CmdFsm& cmd, const ControllerConfig& cfg);

struct RefreshCounter
{
    std::uint64_t elapsed_cycles = 0;
    bool ref_req = false;

    double elapsed_ns(double t_ck_ns) const noexcept { return static_cast<double>(elapsed_cycles) * t_ck_ns; }
    bool operator==(const RefreshCounter&) const = default;
};

/// Advances the counter by one tCK. The request rises once the refresh
/// interval has elapsed and holds until `ack`. The acknowledge clears the
/// request and takes one interval off the count; a count two intervals
/// behind restarts from zero.
RefreshCounter refresh_counter_step(const RefreshCounter& counter, bool ack, const TimingConfig& timing);

struct CompletedTransaction
{
    SystemRequest request;
    std::uint64_t start_cycle = 0;
    /// Clock at which the command FSM is back in c_idle.
    std::uint64_t end_cycle = 0;

    unsigned latency_clocks() const noexcept { return static_cast<unsigned>(end_cycle - start_cycle + 1); }
};

struct ControllerCycle
{
    std::uint64_t cycle = 0;
    InitState istate = InitState::Idle;
    CmdState cstate = CmdState::Idle;
    /// What is on the pins during this clock.
    ControllerOutputs out;
    /// The request on sys_adsn was sampled this clock.
    bool request_taken = false;
    std::optional<CompletedTransaction> completed;
};

/// Clocked wrapper around the two FSMs with the one-clock output register.
class Controller
{
public:
    explicit Controller(ControllerConfig cfg);

    ControllerCycle tick(const ControllerInputs& in);

    const InitFsm& init_fsm() const noexcept { return init_; }
    const CmdFsm& cmd_fsm() const noexcept { return cmd_; }
    const ControllerConfig& config() const noexcept { return cfg_; }
    std::uint64_t cycle() const noexcept { return cycle_; }
    /// A transaction or refresh is under way, or one is still to be reported.
    bool busy() const noexcept { return cmd_.state != CmdState::Idle || cmd_.deferred || txn_start_.has_value(); }

private:
    ControllerConfig cfg_;
    InitFsm init_;
    CmdFsm cmd_;
    ControllerOutputs registered_;
    CmdState prev_cstate_ = CmdState::Idle;
    unsigned prev_data_clock_ = 0;
    std::uint64_t cycle_ = 0;
    std::optional<std::uint64_t> txn_start_;
    SystemRequest active_request_;
};

} // namespace ddrc
