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

#include "ddrc/controller.hpp"

#include "ddrc/error.hpp"

#include <algorithm>

namespace ddrc {

std::string_view to_string(InitState s) noexcept
{
    switch (s)
    {
    case InitState::Idle: return "i_IDLE";
    case InitState::Nop: return "i_NOP";
    case InitState::Precharge: return "i_PRE";
    case InitState::WaitRp: return "i_tRP";
    case InitState::LoadExtended: return "i_EMRS";
    case InitState::LoadMode: return "i_MRS";
    case InitState::WaitMrd: return "i_tMRD";
    case InitState::AutoRefresh1: return "i_AR1";
    case InitState::WaitRfc1: return "i_tRFC1";
    case InitState::AutoRefresh2: return "i_AR2";
    case InitState::WaitRfc2: return "i_tRFC2";
    case InitState::Ready: return "i_ready";
    }
    return "?";
}

std::string_view to_string(CmdState s) noexcept
{
    switch (s)
    {
    case CmdState::Idle: return "c_idle";
    case CmdState::Active: return "c_ACTIVE";
    case CmdState::WaitRcd: return "c_tRCD";
    case CmdState::ReadAuto: return "c_READA";
    case CmdState::CasLatency: return "c_cl";
    case CmdState::ReadData: return "c_rdata";
    case CmdState::WriteAuto: return "c_WRITEA";
    case CmdState::WriteData: return "c_wdata";
    case CmdState::WaitDal: return "c_tDAL";
    case CmdState::AutoRefresh: return "c_AR";
    case CmdState::WaitRfc: return "c_tRFC";
    }
    return "?";
}

unsigned ControllerConfig::wait_cycles(TimingParam p) const noexcept
{
    int adjust = 0;
    switch (p)
    {
    case TimingParam::tRP: adjust = trim.rp; break;
    case TimingParam::tRCD: adjust = trim.rcd; break;
    case TimingParam::tRFC: adjust = trim.rfc; break;
    case TimingParam::tMRD: adjust = trim.mrd; break;
    case TimingParam::tDAL: adjust = trim.dal; break;
    default: break;
    }
    const int n = static_cast<int>(delay_cycles(timing.nanoseconds(p), timing.t_ck_ns)) + adjust;
    return static_cast<unsigned>(std::max(n, 0));
}

void ControllerConfig::validate() const
{
    timing.validate();
    geometry.validate();
    encode_mode_register(mode_register);
    if (!mode_register.cas_latency.is_integral())
        throw ConfigError("cas_latency", 0, "the command FSM runs whole-clock CAS latencies only");
    if ((emrs_payload | mrs_reset_payload) & ~kAddressMask)
        throw ConfigError("emrs_payload", 0, "payload wider than A0..A12");
}

AddressWord default_mrs_reset_payload(const ModeRegister& mr)
{
    return static_cast<AddressWord>(encode_mode_register(mr) | kDllResetBit);
}

InitFsm init_step(const InitFsm& fsm, const ControllerInputs& in, const ControllerConfig& cfg)
{
    if (in.reset)
        return InitFsm{};

    InitFsm n = fsm;
    auto then_wait = [&](InitState wait_state, TimingParam p, InitState next) {
        const unsigned w = cfg.wait_cycles(p);
        if (w == 0)
        {
            n.state = next;
            n.remaining = 0;
            return;
        }
        n.state = wait_state;
        n.remaining = w;
        n.after_wait = next;
    };

    switch (fsm.state)
    {
    case InitState::Idle:
        if (in.sys_dly_200us_done)
            n.state = InitState::Nop;
        break;
    case InitState::Nop: n.state = InitState::Precharge; break;
    case InitState::Precharge:
        then_wait(InitState::WaitRp, TimingParam::tRP,
                  fsm.second_pass ? InitState::AutoRefresh1 : InitState::LoadExtended);
        break;
    case InitState::LoadExtended: then_wait(InitState::WaitMrd, TimingParam::tMRD, InitState::LoadMode); break;
    case InitState::LoadMode:
        then_wait(InitState::WaitMrd, TimingParam::tMRD, fsm.second_pass ? InitState::Ready : InitState::Precharge);
        n.second_pass = true;
        break;
    case InitState::AutoRefresh1: then_wait(InitState::WaitRfc1, TimingParam::tRFC, InitState::AutoRefresh2); break;
    case InitState::AutoRefresh2: then_wait(InitState::WaitRfc2, TimingParam::tRFC, InitState::LoadMode); break;
    case InitState::WaitRp:
    case InitState::WaitMrd:
    case InitState::WaitRfc1:
    case InitState::WaitRfc2:
        if (fsm.remaining > 1)
        {
            --n.remaining;
        }
        else
        {
            n.state = fsm.after_wait;
            n.remaining = 0;
        }
        break;
    case InitState::Ready: break;
    }
    return n;
}

CmdFsm cmd_step(const CmdFsm& fsm, bool init_done, const ControllerInputs& in, const ControllerConfig& cfg)
{
    if (in.reset)
        return CmdFsm{};

    CmdFsm n = fsm;
    auto enter = [&](CmdState s, unsigned clocks) {
        n.state = s;
        n.remaining = clocks;
        n.span = clocks;
    };
    auto enter_or_idle = [&](CmdState s, unsigned clocks) {
        if (clocks == 0)
            enter(CmdState::Idle, 0);
        else
            enter(s, clocks);
    };
    // The direction is sampled on the clock before tRCD is satisfied.
    auto start_access = [&]() {
        const bool is_read = fsm.rw_latched ? fsm.request->is_read : in.sys_r_wn;
        n.request->is_read = is_read;
        enter(is_read ? CmdState::ReadAuto : CmdState::WriteAuto, 1);
    };
    if (fsm.state != CmdState::Idle && fsm.remaining > 1)
    {
        --n.remaining;
        return n;
    }

    const unsigned half_burst = std::max(1u, cfg.mode_register.burst_length / 2);
    switch (fsm.state)
    {
    case CmdState::Idle:
    {
        if (!init_done)
            break;
        auto latch = [&]() {
            return SystemRequest{in.sys_addr, in.sys_r_wn, 1, in.request_id};
        };
        if (in.sys_ref_req)
        {
            if (!fsm.deferred && !in.sys_adsn)
            {
                n.request = latch();
                n.deferred = true;
            }
            enter(CmdState::AutoRefresh, 1);
        }
        else if (fsm.deferred)
        {
            n.deferred = false;
            n.rw_latched = true;
            enter(CmdState::Active, 1);
        }
        else if (!in.sys_adsn)
        {
            n.request = latch();
            n.rw_latched = false;
            enter(CmdState::Active, 1);
        }
        break;
    }
    case CmdState::Active:
    {
        const unsigned w = cfg.wait_cycles(TimingParam::tRCD);
        if (w > 0)
            enter(CmdState::WaitRcd, w);
        else
            start_access();
        break;
    }
    case CmdState::WaitRcd: start_access(); break;
    case CmdState::ReadAuto:
    {
        const unsigned cl = cfg.mode_register.cas_latency.whole_cycles();
        if (cl > 0)
            enter(CmdState::CasLatency, cl);
        else
            enter(CmdState::ReadData, half_burst);
        break;
    }
    case CmdState::CasLatency: enter(CmdState::ReadData, half_burst); break;
    case CmdState::ReadData: enter(CmdState::Idle, 0); break;
    case CmdState::WriteAuto: enter(CmdState::WriteData, half_burst); break;
    case CmdState::WriteData: enter_or_idle(CmdState::WaitDal, cfg.wait_cycles(TimingParam::tDAL)); break;
    case CmdState::WaitDal: enter(CmdState::Idle, 0); break;
    case CmdState::AutoRefresh: enter_or_idle(CmdState::WaitRfc, cfg.wait_cycles(TimingParam::tRFC)); break;
    case CmdState::WaitRfc: enter(CmdState::Idle, 0); break;
    }
    return n;
}

ControllerOutputs signal_generate(const InitFsm& init, const CmdFsm& cmd, const ControllerConfig& cfg)
{
    ControllerOutputs o;
    o.sys_init_done = init.state == InitState::Ready;
    o.sys_ref_ack = cmd.state == CmdState::AutoRefresh || cmd.state == CmdState::WaitRfc;
    auto issue = [&](Command c, AddressWord addr, unsigned bank) {
        o.command = c;
        o.pins = encode_command(c);
        o.ddr_addr = addr;
        o.ddr_bank = bank;
    };

    if (init.state != InitState::Ready)
    {
        switch (init.state)
        {
        case InitState::Idle: o.pins.cke = Level::L; break;
        case InitState::Precharge: issue(Command::Precharge, kA10, 0); break;
        case InitState::LoadExtended: issue(Command::LoadModeRegister, cfg.emrs_payload, 1); break;
        case InitState::LoadMode:
            issue(Command::LoadModeRegister,
                  init.second_pass ? encode_mode_register(cfg.mode_register) : cfg.mrs_reset_payload, 0);
            break;
        case InitState::AutoRefresh1:
        case InitState::AutoRefresh2: issue(Command::AutoRefresh, 0, 0); break;
        default: break;
        }
        return o;
    }

    if (!cmd.request && cmd.state != CmdState::AutoRefresh)
        return o;
    switch (cmd.state)
    {
    case CmdState::Active:
    {
        const DdrAddress a = split_address(cmd.request->linear_addr, cfg.geometry);
        issue(Command::Active, static_cast<AddressWord>(a.row), a.bank);
        break;
    }
    case CmdState::ReadAuto:
    case CmdState::WriteAuto:
    {
        const DdrAddress a = split_address(cmd.request->linear_addr, cfg.geometry);
        issue(cmd.state == CmdState::ReadAuto ? Command::Read : Command::Write, column_word(a.column, true), a.bank);
        break;
    }
    case CmdState::AutoRefresh: issue(Command::AutoRefresh, 0, 0); break;
    default: break;
    }
    return o;
}

RefreshCounter refresh_counter_step(const RefreshCounter& counter, bool ack, const TimingConfig& timing)
{
    const std::uint64_t interval = std::max(1u, min_cycles(timing.refresh_interval_ns, timing.t_ck_ns));
    RefreshCounter n = counter;
    if (ack && n.ref_req)
    {
        n.ref_req = false;
        n.elapsed_cycles = n.elapsed_cycles >= 2 * interval ? 0 : n.elapsed_cycles - std::min(interval, n.elapsed_cycles);
        return n;
    }
    ++n.elapsed_cycles;
    if (n.elapsed_cycles >= interval)
        n.ref_req = true;
    return n;
}

Controller::Controller(ControllerConfig cfg) : cfg_(std::move(cfg))
{
    cfg_.validate();
    registered_ = signal_generate(init_, cmd_, cfg_);
}

ControllerCycle Controller::tick(const ControllerInputs& in)
{
    ControllerCycle c;
    c.cycle = cycle_;
    c.istate = init_.state;
    c.cstate = cmd_.state;

    c.out = registered_;
    c.out.sys_init_done = init_.state == InitState::Ready;
    c.out.sys_ref_ack = cmd_.state == CmdState::AutoRefresh || cmd_.state == CmdState::WaitRfc;
    if (prev_cstate_ == CmdState::WriteData)
    {
        c.out.data_phase = DataPhase::WriteDrive;
        c.out.data_clock = prev_data_clock_;
    }
    else if (cmd_.state == CmdState::ReadData)
    {
        c.out.data_phase = DataPhase::ReadCapture;
        c.out.data_clock = cmd_.span - cmd_.remaining;
    }

    if (cmd_.state == CmdState::Idle && txn_start_
        && (prev_cstate_ == CmdState::ReadData || prev_cstate_ == CmdState::WriteData
            || prev_cstate_ == CmdState::WaitDal))
    {
        c.completed = CompletedTransaction{active_request_, *txn_start_, cycle_};
        txn_start_.reset();
    }

    const InitFsm next_init = init_step(init_, in, cfg_);
    const CmdFsm next_cmd = cmd_step(cmd_, init_.state == InitState::Ready, in, cfg_);

    if (!in.reset && cmd_.state == CmdState::Idle)
    {
        c.request_taken = !cmd_.deferred && next_cmd.request
                          && (next_cmd.deferred || (next_cmd.state == CmdState::Active && !next_cmd.rw_latched));
        if (next_cmd.state == CmdState::Active)
        {
            txn_start_ = cycle_;
            active_request_ = *next_cmd.request;
        }
    }
    if (next_cmd.state == CmdState::ReadAuto || next_cmd.state == CmdState::WriteAuto)
        active_request_ = *next_cmd.request;

    registered_ = in.reset ? signal_generate(InitFsm{}, CmdFsm{}, cfg_) : signal_generate(init_, cmd_, cfg_);
    prev_data_clock_ = cmd_.state == CmdState::WriteData ? cmd_.span - cmd_.remaining : 0;
    prev_cstate_ = in.reset ? CmdState::Idle : cmd_.state;
    if (in.reset)
        txn_start_.reset();
    init_ = next_init;
    cmd_ = next_cmd;
    ++cycle_;
    return c;
}

} // namespace ddrc
