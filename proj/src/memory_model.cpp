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

#include "ddrc/memory_model.hpp"

#include "ddrc/error.hpp"

#include <algorithm>
#include <sstream>

namespace ddrc {

namespace {

std::string_view kind_label(ViolationKind k) noexcept
{
    switch (k)
    {
    case ViolationKind::TimingViolation: return "TimingViolation";
    case ViolationKind::BankNotActive: return "BankNotActive";
    case ViolationKind::BankAlreadyActive: return "BankAlreadyActive";
    case ViolationKind::NotInitialized: return "NotInitialized";
    case ViolationKind::BanksNotIdle: return "BanksNotIdle";
    case ViolationKind::RefreshOverdue: return "RefreshOverdue";
    case ViolationKind::UnknownCommand: return "UnknownCommand";
    case ViolationKind::InitOrderViolation: return "InitOrderViolation";
    case ViolationKind::InvalidModeRegister: return "InvalidModeRegister";
    case ViolationKind::BeatOverrun: return "BeatOverrun";
    }
    return "?";
}

Violation make(std::uint64_t cycle, ViolationKind kind, std::string detail,
               std::optional<TimingParam> param = std::nullopt)
{
    return Violation{cycle, kind, param, std::move(detail)};
}

// At most one violation of each kind/parameter per command.
void add(std::vector<Violation>& out, Violation v)
{
    for (const auto& e : out)
        if (e.kind == v.kind && e.param == v.param)
            return;
    out.push_back(std::move(v));
}

std::string cmd_at(Command cmd, std::uint64_t cycle)
{
    std::ostringstream os;
    os << to_string(cmd) << " at cycle " << cycle;
    return os.str();
}

} // namespace

std::string Violation::kind_name() const
{
    std::string s(kind_label(kind));
    if (param)
        s += "(" + std::string(to_string(*param)) + ")";
    return s;
}

std::string format_violation(const Violation& v)
{
    return "cycle=" + std::to_string(v.cycle) + " kind=" + v.kind_name() + " detail=" + v.detail;
}

std::string_view to_string(InitStep s) noexcept
{
    switch (s)
    {
    case InitStep::Nop: return "NOP";
    case InitStep::PrechargeAll1: return "PRECHARGE ALL";
    case InitStep::LoadExtended: return "LMR(extended)";
    case InitStep::LoadModeDllReset: return "LMR(DLL reset)";
    case InitStep::PrechargeAll2: return "PRECHARGE ALL";
    case InitStep::AutoRefresh1: return "AUTO REFRESH";
    case InitStep::AutoRefresh2: return "AUTO REFRESH";
    case InitStep::LoadMode: return "LMR";
    case InitStep::Done: return "done";
    }
    return "?";
}

MemoryModel::MemoryModel(MemoryConfig config) : config_(std::move(config))
{
    config_.timing.validate();
    config_.geometry.validate();
}

unsigned MemoryModel::cycles(TimingParam p) const
{
    return min_cycles(config_.timing.nanoseconds(p), config_.timing.t_ck_ns);
}

std::uint64_t MemoryModel::cell_key(unsigned bank, unsigned row, unsigned column) const
{
    const Geometry& g = config_.geometry;
    return (std::uint64_t{bank} << (g.row_bits + g.col_bits)) | (std::uint64_t{row} << g.col_bits) | column;
}

std::optional<std::uint16_t> MemoryModel::cell(unsigned bank, unsigned row, unsigned column) const
{
    auto it = cells_.find(cell_key(bank, row, column));
    if (it == cells_.end())
        return std::nullopt;
    return it->second;
}

std::vector<unsigned> MemoryModel::burst_columns(unsigned start, unsigned burst_length, BurstType type)
{
    const unsigned mask = burst_length - 1;
    const unsigned base = start & ~mask;
    const unsigned offset = start & mask;
    std::vector<unsigned> cols(burst_length);
    for (unsigned i = 0; i < burst_length; ++i)
        cols[i] = base | (type == BurstType::Sequential ? ((offset + i) & mask) : (offset ^ i));
    return cols;
}

void MemoryModel::settle(std::uint64_t cycle)
{
    for (auto& b : banks_)
    {
        if (b.status == BankStatus::Activating && b.last_active_cycle
            && cycle >= *b.last_active_cycle + cycles(TimingParam::tRCD))
            b.status = BankStatus::Active;
        if (b.status == BankStatus::Precharging && cycle >= b.idle_at)
        {
            b.status = BankStatus::Idle;
            b.pending_auto_precharge = false;
        }
    }
}

void MemoryModel::close_bank(unsigned bank, std::uint64_t idle_at, TimingParam param)
{
    BankState& b = banks_[bank];
    if (b.status == BankStatus::Precharging && b.idle_at >= idle_at)
        return;
    b.status = BankStatus::Precharging;
    b.idle_at = idle_at;
    b.closing_param = param;
}

void MemoryModel::require_all_idle(Command cmd, std::uint64_t cycle, std::vector<Violation>& out) const
{
    for (unsigned i = 0; i < banks_.size(); ++i)
    {
        const BankState& b = banks_[i];
        if (b.status == BankStatus::Active || b.status == BankStatus::Activating)
            add(out, make(cycle, ViolationKind::BanksNotIdle,
                          cmd_at(cmd, cycle) + " with bank " + std::to_string(i) + " open"));
        else if (b.status == BankStatus::Precharging)
            add(out, make(cycle, ViolationKind::TimingViolation,
                          cmd_at(cmd, cycle) + ", bank " + std::to_string(i) + " idle at cycle "
                              + std::to_string(b.idle_at),
                          b.closing_param));
    }
}

void MemoryModel::check_init_order(Command cmd, AddressWord addr, unsigned bank, std::uint64_t cycle,
                                   std::vector<Violation>& out)
{
    bool match = false;
    switch (init_step_)
    {
    case InitStep::Nop: match = false; break;
    case InitStep::PrechargeAll1:
    case InitStep::PrechargeAll2: match = cmd == Command::Precharge && (addr & kA10); break;
    case InitStep::LoadExtended: match = cmd == Command::LoadModeRegister && bank == 1; break;
    case InitStep::LoadModeDllReset:
    case InitStep::LoadMode: match = cmd == Command::LoadModeRegister && bank == 0; break;
    case InitStep::AutoRefresh1:
    case InitStep::AutoRefresh2: match = cmd == Command::AutoRefresh; break;
    case InitStep::Done: return;
    }
    if (!match)
    {
        std::string observed(to_string(cmd));
        if (cmd == Command::LoadModeRegister)
            observed += "(BA=" + std::to_string(bank) + ")";
        else if (cmd == Command::Precharge && !(addr & kA10))
            observed += "(single bank)";
        add(out, make(cycle, ViolationKind::InitOrderViolation,
                      "expected " + std::string(to_string(init_step_)) + ", observed " + observed));
        return;
    }
    init_step_ = static_cast<InitStep>(static_cast<unsigned>(init_step_) + 1);
}

std::vector<Violation> MemoryModel::clock(std::uint64_t cycle, const ControlSignals& pins, AddressWord addr,
                                          unsigned bank)
{
    if (pins.cke == Level::L)
        return {};
    Command cmd;
    try
    {
        cmd = decode_command(pins);
    }
    catch (const UnknownCommand& e)
    {
        std::vector<Violation> out{make(cycle, ViolationKind::UnknownCommand, e.what())};
        log_.insert(log_.end(), out.begin(), out.end());
        return out;
    }
    return apply_command(cmd, addr, bank, cycle);
}

std::vector<Violation> MemoryModel::apply_command(Command cmd, AddressWord addr, unsigned bank,
                                                  std::uint64_t cycle)
{
    std::vector<Violation> out;
    if (cmd == Command::Nop || cmd == Command::Deselect)
    {
        if (init_step_ == InitStep::Nop)
            init_step_ = InitStep::PrechargeAll1;
        return out;
    }
    bank &= Geometry::bank_count - 1;
    settle(cycle);

    if (!saw_command_)
    {
        saw_command_ = true;
        const double t = static_cast<double>(cycle) * config_.timing.t_ck_ns;
        if (t + 1e-9 < config_.timing.power_up_delay_ns)
            add(out, make(cycle, ViolationKind::TimingViolation,
                          cmd_at(cmd, cycle) + " before the power-up delay", TimingParam::PowerUp));
    }

    if (!initialized())
    {
        if (cmd == Command::Active || cmd == Command::Read || cmd == Command::Write)
        {
            add(out, make(cycle, ViolationKind::NotInitialized,
                          cmd_at(cmd, cycle) + " before initialization completed"));
            log_.insert(log_.end(), out.begin(), out.end());
            return out;
        }
        check_init_order(cmd, addr, bank, cycle, out);
    }

    for (TimingParam p : {TimingParam::tMRD, TimingParam::tRFC, TimingParam::tDAL})
    {
        const auto until = quiet_until_[static_cast<unsigned>(p)];
        if (cycle < until)
            add(out, make(cycle, ViolationKind::TimingViolation,
                          cmd_at(cmd, cycle) + ", earliest cycle " + std::to_string(until), p));
    }

    const Geometry& g = config_.geometry;
    switch (cmd)
    {
    case Command::Active:
    {
        BankState& b = banks_[bank];
        if (b.status == BankStatus::Active || b.status == BankStatus::Activating)
            add(out, make(cycle, ViolationKind::BankAlreadyActive,
                          cmd_at(cmd, cycle) + ", bank " + std::to_string(bank) + " has row "
                              + std::to_string(b.row) + " open"));
        else if (b.status == BankStatus::Precharging)
            add(out, make(cycle, ViolationKind::TimingViolation,
                          cmd_at(cmd, cycle) + ", bank " + std::to_string(bank) + " idle at cycle "
                              + std::to_string(b.idle_at),
                          b.closing_param));
        b.row = addr & ((1u << g.row_bits) - 1);
        b.last_active_cycle = cycle;
        b.pending_auto_precharge = false;
        b.status = cycles(TimingParam::tRCD) == 0 ? BankStatus::Active : BankStatus::Activating;
        break;
    }
    case Command::Read:
    case Command::Write:
    {
        const bool write = cmd == Command::Write;
        const ModeRegister mr = mode_register_.value_or(ModeRegister{});
        BankState& b = banks_[bank];
        bool valid = true;
        if (b.status == BankStatus::Idle || b.status == BankStatus::Precharging)
        {
            add(out, make(cycle, ViolationKind::BankNotActive,
                          cmd_at(cmd, cycle) + ", bank " + std::to_string(bank) + " has no open row"));
            valid = false;
        }
        else if (b.status == BankStatus::Activating)
        {
            add(out, make(cycle, ViolationKind::TimingViolation,
                          cmd_at(cmd, cycle) + ", ACT at cycle " + std::to_string(*b.last_active_cycle),
                          TimingParam::tRCD));
            valid = false;
        }

        Burst burst;
        burst.write = write;
        burst.valid = valid;
        burst.bank = bank;
        burst.row = b.row;
        burst.columns = burst_columns(addr & ((1u << g.col_bits) - 1), mr.burst_length, mr.burst_type);
        burst.first_half = write ? 2 * (cycle + 1) : 2 * cycle + mr.cas_latency.half_cycles;
        bursts_.push_back(std::move(burst));
        b.last_rw_cycle = cycle;

        if ((addr & kA10) && valid)
        {
            b.pending_auto_precharge = true;
            const unsigned half_bl = mr.burst_length / 2;
            if (write)
            {
                const std::uint64_t burst_end = cycle + 1 + half_bl;
                const std::uint64_t ready = burst_end + cycles(TimingParam::tDAL);
                b.last_precharge_cycle = burst_end + cycles(TimingParam::tWR);
                close_bank(bank, ready, TimingParam::tDAL);
                auto& q = quiet_until_[static_cast<unsigned>(TimingParam::tDAL)];
                q = std::max(q, ready);
            }
            else
            {
                b.last_precharge_cycle = cycle + half_bl;
                close_bank(bank, cycle + half_bl + cycles(TimingParam::tRP), TimingParam::tRP);
            }
        }
        break;
    }
    case Command::Precharge:
    {
        for (unsigned i = 0; i < banks_.size(); ++i)
        {
            if (!(addr & kA10) && i != bank)
                continue;
            close_bank(i, cycle + cycles(TimingParam::tRP), TimingParam::tRP);
            banks_[i].last_precharge_cycle = cycle;
        }
        break;
    }
    case Command::AutoRefresh:
    {
        require_all_idle(cmd, cycle, out);
        quiet_until_[static_cast<unsigned>(TimingParam::tRFC)] = cycle + cycles(TimingParam::tRFC);
        last_refresh_ = cycle;
        ++refresh_count_;
        refresh_deficit_ = 0;
        overdue_reported_ = false;
        break;
    }
    case Command::LoadModeRegister:
    {
        require_all_idle(cmd, cycle, out);
        if (bank == 0)
        {
            try
            {
                ModeRegister mr = decode_mode_register(addr);
                // A8 (DLL reset) clears itself once the load completes.
                mr.operating_mode &= ~(kDllResetBit >> 7);
                mode_register_ = mr;
            }
            catch (const InvalidField& e)
            {
                add(out, make(cycle, ViolationKind::InvalidModeRegister,
                              cmd_at(cmd, cycle) + ": " + e.what()));
            }
        }
        else if (bank == 1)
        {
            extended_mode_ = addr;
        }
        quiet_until_[static_cast<unsigned>(TimingParam::tMRD)] = cycle + cycles(TimingParam::tMRD);
        break;
    }
    case Command::Nop:
    case Command::Deselect: break;
    }

    log_.insert(log_.end(), out.begin(), out.end());
    return out;
}

std::optional<std::uint16_t> MemoryModel::data_beat(std::uint64_t cycle, Edge edge,
                                                    std::optional<std::uint16_t> drive, bool capture)
{
    const std::uint64_t half = 2 * cycle + (edge == Edge::Falling ? 1 : 0);
    std::erase_if(bursts_, [half](const Burst& b) { return b.first_half + b.columns.size() <= half; });

    auto it = std::find_if(bursts_.begin(), bursts_.end(), [half](const Burst& b) {
        return b.first_half <= half && half < b.first_half + b.columns.size();
    });
    const char* edge_name = edge == Edge::Rising ? "rising" : "falling";
    if (it == bursts_.end())
    {
        if (drive || capture)
            log_.push_back(make(cycle, ViolationKind::BeatOverrun,
                                std::string(drive ? "write data" : "read capture") + " on " + edge_name
                                    + " edge outside any burst"));
        return std::nullopt;
    }

    const Burst& b = *it;
    const unsigned column = b.columns[half - b.first_half];
    if (b.write)
    {
        if (capture)
            log_.push_back(make(cycle, ViolationKind::BeatOverrun,
                                std::string("read capture on ") + edge_name + " edge during a write burst"));
        if (drive && b.valid)
            cells_[cell_key(b.bank, b.row, column)] = *drive;
        return std::nullopt;
    }

    if (drive)
        log_.push_back(make(cycle, ViolationKind::BeatOverrun,
                            std::string("controller drives data on ") + edge_name + " edge during a read burst"));
    if (!b.valid)
        return kPoison;
    auto c = cells_.find(cell_key(b.bank, b.row, column));
    return c == cells_.end() ? kPoison : c->second;
}

std::vector<Violation> MemoryModel::refresh_audit(std::uint64_t cycle)
{
    std::vector<Violation> out;
    if (!initialized() || !last_refresh_ || overdue_reported_)
        return out;
    const unsigned interval = std::max(1u, min_cycles(config_.timing.refresh_interval_ns, config_.timing.t_ck_ns));
    const std::uint64_t gap = cycle - *last_refresh_;
    if (static_cast<double>(gap) >= config_.refresh_grace_factor * interval)
    {
        overdue_reported_ = true;
        refresh_deficit_ = gap / interval;
        cells_.clear();
        out.push_back(make(cycle, ViolationKind::RefreshOverdue,
                           "no AUTO REFRESH for " + std::to_string(gap) + " cycles since cycle "
                               + std::to_string(*last_refresh_) + ", stored data lost"));
        log_.insert(log_.end(), out.begin(), out.end());
    }
    return out;
}

} // namespace ddrc
