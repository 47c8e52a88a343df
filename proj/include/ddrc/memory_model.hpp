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

#include "ddrc/datapath.hpp"
#include "ddrc/protocol.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ddrc {

enum class ViolationKind : std::uint8_t
{
    TimingViolation,
    BankNotActive,
    BankAlreadyActive,
    NotInitialized,
    BanksNotIdle,
    RefreshOverdue,
    UnknownCommand,
    InitOrderViolation,
    InvalidModeRegister,
    BeatOverrun,
};

struct Violation
{
    std::uint64_t cycle = 0;
    ViolationKind kind = ViolationKind::TimingViolation;
    /// Set for TimingViolation only.
    std::optional<TimingParam> param;
    std::string detail;

    /// "TimingViolation(tRCD)", "BankNotActive", ...
    std::string kind_name() const;
};

/// `cycle=<n> kind=<k> detail=<text>`
std::string format_violation(const Violation& v);

/// Data returned for cells that were never written, lost to a missed
/// refresh, or read through an illegal command.
inline constexpr std::uint16_t kPoison = 0xDEAD;

struct MemoryConfig
{
    TimingConfig timing;
    Geometry geometry;
    /// Missed refresh intervals tolerated before data is considered lost.
    double refresh_grace_factor = 2.0;
};

enum class BankStatus : std::uint8_t
{
    Idle,
    Activating,
    Active,
    Precharging,
};

struct BankState
{
    BankStatus status = BankStatus::Idle;
    unsigned row = 0;
    std::optional<std::uint64_t> last_active_cycle;
    std::optional<std::uint64_t> last_precharge_cycle;
    std::optional<std::uint64_t> last_rw_cycle;
    /// While Precharging: first cycle the bank counts as idle, and the
    /// parameter that governs the wait.
    std::uint64_t idle_at = 0;
    TimingParam closing_param = TimingParam::tRP;
    bool pending_auto_precharge = false;
};

/// Steps of the power-up sequence the checker expects.
enum class InitStep : std::uint8_t
{
    Nop,
    PrechargeAll1,
    LoadExtended,
    LoadModeDllReset,
    PrechargeAll2,
    AutoRefresh1,
    AutoRefresh2,
    LoadMode,
    Done,
};

std::string_view to_string(InitStep s) noexcept;

/// Quad-bank DDR SDRAM device model that checks every command it latches.
/// Violations are logged and the model keeps running; undefined reads return
/// kPoison.
class MemoryModel
{
public:
    explicit MemoryModel(MemoryConfig config);

    /// Latches the pins at the rising edge of `cycle`. Call once per clock.
    std::vector<Violation> clock(std::uint64_t cycle, const ControlSignals& pins, AddressWord addr,
                                 unsigned bank);

    /// Executes a decoded non-NOP command.
    std::vector<Violation> apply_command(Command cmd, AddressWord addr, unsigned bank,
                                         std::uint64_t cycle);

    /// One half-cycle data transfer. `drive` is the controller's write data
    /// (nullopt when not driving); `capture` is set when the controller
    /// samples read data. Returns the device's read data, if any.
    std::optional<std::uint16_t> data_beat(std::uint64_t cycle, Edge edge,
                                           std::optional<std::uint16_t> drive, bool capture);

    std::vector<Violation> refresh_audit(std::uint64_t cycle);

    bool initialized() const noexcept { return init_step_ == InitStep::Done; }
    InitStep init_progress() const noexcept { return init_step_; }
    const std::optional<ModeRegister>& mode_register() const noexcept { return mode_register_; }
    std::optional<AddressWord> extended_mode_register() const noexcept { return extended_mode_; }
    const BankState& bank(unsigned i) const { return banks_.at(i); }
    const std::vector<Violation>& violations() const noexcept { return log_; }
    std::optional<std::uint16_t> cell(unsigned bank, unsigned row, unsigned column) const;
    std::size_t stored_words() const noexcept { return cells_.size(); }
    std::uint64_t refresh_count() const noexcept { return refresh_count_; }
    std::uint64_t refresh_deficit() const noexcept { return refresh_deficit_; }
    std::optional<std::uint64_t> last_refresh_cycle() const noexcept { return last_refresh_; }
    const MemoryConfig& config() const noexcept { return config_; }

    /// Column order of a burst starting at `start` for the given mode.
    static std::vector<unsigned> burst_columns(unsigned start, unsigned burst_length, BurstType type);

private:
    struct Burst
    {
        bool write = false;
        bool valid = true;
        unsigned bank = 0;
        unsigned row = 0;
        std::vector<unsigned> columns;
        std::uint64_t first_half = 0;
    };

    unsigned cycles(TimingParam p) const;
    std::uint64_t cell_key(unsigned bank, unsigned row, unsigned column) const;
    void settle(std::uint64_t cycle);
    void check_init_order(Command cmd, AddressWord addr, unsigned bank, std::uint64_t cycle,
                          std::vector<Violation>& out);
    void require_all_idle(Command cmd, std::uint64_t cycle, std::vector<Violation>& out) const;
    void close_bank(unsigned bank, std::uint64_t idle_at, TimingParam param);

    MemoryConfig config_;
    std::array<BankState, Geometry::bank_count> banks_{};
    std::unordered_map<std::uint64_t, std::uint16_t> cells_;
    std::optional<ModeRegister> mode_register_;
    std::optional<AddressWord> extended_mode_;
    InitStep init_step_ = InitStep::Nop;
    bool saw_command_ = false;
    std::array<std::uint64_t, 7> quiet_until_{};
    std::deque<Burst> bursts_;
    std::optional<std::uint64_t> last_refresh_;
    std::uint64_t refresh_count_ = 0;
    std::uint64_t refresh_deficit_ = 0;
    bool overdue_reported_ = false;
    std::vector<Violation> log_;
};

} // namespace ddrc
