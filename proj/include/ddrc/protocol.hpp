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

#include <cstdint>
#include <string>
#include <string_view>

namespace ddrc {

// Shared DDR SDRAM vocabulary: commands and their pin encodings, the mode
// register, address geometry and timing parameters.

enum class Command : std::uint8_t
{
    LoadModeRegister,
    AutoRefresh,
    Precharge,
    Active,
    Write,
    Read,
    Nop,
    Deselect,
};

inline constexpr Command kAllCommands[] = {
    Command::LoadModeRegister, Command::AutoRefresh, Command::Precharge, Command::Active,
    Command::Write,            Command::Read,        Command::Nop,       Command::Deselect,
};

std::string_view to_string(Command cmd) noexcept;

enum class Level : std::uint8_t
{
    L = 0,
    H = 1,
};

struct ControlSignals
{
    Level ras = Level::H;
    Level cas = Level::H;
    Level we = Level::H;
    Level cke = Level::H;
    Level cs = Level::L;

    bool operator==(const ControlSignals&) const = default;
};

ControlSignals encode_command(Command cmd) noexcept;

/// Maps pin levels back to a command. cs high is Deselect whatever the other
/// lines hold. The one RAS/CAS/WE combination with no command (H,H,L)
/// throws UnknownCommand.
Command decode_command(const ControlSignals& sig);

/// Value driven on A0..A12.
using AddressWord = std::uint16_t;

inline constexpr unsigned kAddressPins = 13;
inline constexpr AddressWord kAddressMask = (1u << kAddressPins) - 1;
/// A10: all-bank select on PRECHARGE, auto-precharge on READ/WRITE.
inline constexpr AddressWord kA10 = 1u << 10;
/// A8 in the base mode register: DLL reset, self-clearing.
inline constexpr AddressWord kDllResetBit = 1u << 8;

enum class BurstType : std::uint8_t
{
    Sequential,
    Interleaved,
};

/// CAS latency in half clock cycles so that CL=2.5 stays exact.
struct CasLatency
{
    std::uint8_t half_cycles = 4;

    static constexpr CasLatency from_cycles(unsigned cycles) noexcept
    {
        return CasLatency{static_cast<std::uint8_t>(cycles * 2)};
    }
    constexpr bool is_integral() const noexcept { return half_cycles % 2 == 0; }
    constexpr unsigned whole_cycles() const noexcept { return half_cycles / 2u; }
    constexpr double cycles() const noexcept { return half_cycles / 2.0; }

    bool operator==(const CasLatency&) const = default;
};

struct ModeRegister
{
    unsigned burst_length = 4;
    BurstType burst_type = BurstType::Sequential;
    CasLatency cas_latency = CasLatency::from_cycles(2);
    /// A7..A12, carried opaquely.
    unsigned operating_mode = 0;
    /// (BA1 << 1) | BA0 of the load; the base register requires 0.
    unsigned bank_select = 0;

    bool operator==(const ModeRegister&) const = default;
};

/// A0-A2 burst length, A3 burst type, A4-A6 CAS latency, A7-A12 operating
/// mode. Throws InvalidField for values with no code.
AddressWord encode_mode_register(const ModeRegister& mr);
ModeRegister decode_mode_register(AddressWord word);

struct Geometry
{
    static constexpr unsigned bank_count = 4;
    static constexpr unsigned device_data_bits = 16;
    static constexpr unsigned system_data_bits = 64;
    static constexpr unsigned words_per_system_word = system_data_bits / device_data_bits;

    unsigned row_bits = 13;
    unsigned col_bits = 9;

    /// Number of 16-bit device words addressable.
    std::uint64_t capacity_words() const noexcept
    {
        return std::uint64_t{bank_count} << (row_bits + col_bits);
    }
    /// row_bits must fit A0..A12; columns live on A0..A9 because A10 carries
    /// the auto-precharge flag.
    void validate() const;

    bool operator==(const Geometry&) const = default;
};

struct DdrAddress
{
    unsigned bank = 0;
    unsigned row = 0;
    unsigned column = 0;
    bool auto_precharge = false;

    bool operator==(const DdrAddress&) const = default;
};

/// Slices a device-word index as {row | bank | column}, MSB to LSB.
DdrAddress split_address(std::uint64_t linear, const Geometry& geom);
std::uint64_t join_address(const DdrAddress& addr, const Geometry& geom);

/// Column payload for READ/WRITE, A10 set for auto-precharge.
AddressWord column_word(unsigned column, bool auto_precharge) noexcept;

enum class TimingParam : std::uint8_t
{
    tRP,
    tRCD,
    tRFC,
    tMRD,
    tWR,
    tDAL,
    PowerUp,
};

std::string_view to_string(TimingParam p) noexcept;

struct TimingConfig
{
    double t_ck_ns = 10.0;
    double t_rp_ns = 20.0;
    double t_rfc_ns = 70.0;
    double t_mrd_ns = 15.0;
    double t_rcd_ns = 20.0;
    double t_wr_ns = 15.0;
    double power_up_delay_ns = 200'000.0;
    double refresh_interval_ns = 7'800.0;

    double t_dal_ns() const noexcept { return t_wr_ns + t_rp_ns; }
    double nanoseconds(TimingParam p) const noexcept;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Clocks a delay spans: ceil(t / tCK), never negative.
unsigned min_cycles(double t_ns, double t_ck_ns) noexcept;

/// Wait states after a command state: max(0, ceil(t / tCK) - 1). The command
/// state itself covers one clock, so a delay shorter than tCK needs none.
unsigned delay_cycles(double t_ns, double t_ck_ns) noexcept;

} // namespace ddrc
