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

#include "ddrc/protocol.hpp"

#include "ddrc/error.hpp"

#include <cmath>
#include <utility>

namespace ddrc {

std::string_view to_string(Command cmd) noexcept
{
    switch (cmd)
    {
    case Command::LoadModeRegister: return "LMR";
    case Command::AutoRefresh: return "AR";
    case Command::Precharge: return "PRE";
    case Command::Active: return "ACT";
    case Command::Write: return "WRITE";
    case Command::Read: return "READ";
    case Command::Nop: return "NOP";
    case Command::Deselect: return "DESEL";
    }
    return "?";
}

namespace {

constexpr ControlSignals lines(Level ras, Level cas, Level we) noexcept
{
    return ControlSignals{ras, cas, we, Level::H, Level::L};
}

} // namespace

ControlSignals encode_command(Command cmd) noexcept
{
    using enum Level;
    switch (cmd)
    {
    case Command::LoadModeRegister: return lines(L, L, L);
    case Command::AutoRefresh: return lines(L, L, H);
    case Command::Precharge: return lines(L, H, L);
    case Command::Active: return lines(L, H, H);
    case Command::Write: return lines(H, L, L);
    case Command::Read: return lines(H, L, H);
    case Command::Nop: return lines(H, H, H);
    case Command::Deselect: return ControlSignals{H, H, H, H, H};
    }
    return lines(H, H, H);
}

Command decode_command(const ControlSignals& sig)
{
    if (sig.cs == Level::H)
        return Command::Deselect;

    const unsigned code = (static_cast<unsigned>(sig.ras) << 2)
                          | (static_cast<unsigned>(sig.cas) << 1)
                          | static_cast<unsigned>(sig.we);
    switch (code)
    {
    case 0b000: return Command::LoadModeRegister;
    case 0b001: return Command::AutoRefresh;
    case 0b010: return Command::Precharge;
    case 0b011: return Command::Active;
    case 0b100: return Command::Write;
    case 0b101: return Command::Read;
    case 0b111: return Command::Nop;
    default: break;
    }
    throw UnknownCommand("no command for RAS/CAS/WE = H,H,L");
}

AddressWord encode_mode_register(const ModeRegister& mr)
{
    unsigned bl_code = 0;
    switch (mr.burst_length)
    {
    case 2: bl_code = 0b001; break;
    case 4: bl_code = 0b010; break;
    case 8: bl_code = 0b011; break;
    default: throw InvalidField("burst_length");
    }

    unsigned cl_code = 0;
    switch (mr.cas_latency.half_cycles)
    {
    case 4: cl_code = 0b010; break;
    case 5: cl_code = 0b110; break;
    case 6: cl_code = 0b011; break;
    default: throw InvalidField("cas_latency");
    }

    if (mr.operating_mode > 0x3F)
        throw InvalidField("operating_mode");
    if (mr.bank_select != 0)
        throw InvalidField("bank_select");

    const unsigned bt = mr.burst_type == BurstType::Interleaved ? 1u : 0u;
    return static_cast<AddressWord>(bl_code | (bt << 3) | (cl_code << 4) | (mr.operating_mode << 7));
}

ModeRegister decode_mode_register(AddressWord word)
{
    ModeRegister mr;
    switch (word & 0x7u)
    {
    case 0b001: mr.burst_length = 2; break;
    case 0b010: mr.burst_length = 4; break;
    case 0b011: mr.burst_length = 8; break;
    default: throw InvalidField("burst_length");
    }
    mr.burst_type = (word >> 3) & 1u ? BurstType::Interleaved : BurstType::Sequential;
    switch ((word >> 4) & 0x7u)
    {
    case 0b010: mr.cas_latency = CasLatency{4}; break;
    case 0b110: mr.cas_latency = CasLatency{5}; break;
    case 0b011: mr.cas_latency = CasLatency{6}; break;
    default: throw InvalidField("cas_latency");
    }
    mr.operating_mode = (word >> 7) & 0x3Fu;
    if (word & ~kAddressMask)
        throw InvalidField("operating_mode");
    return mr;
}

void Geometry::validate() const
{
    if (row_bits < 1 || row_bits > kAddressPins)
        throw ConfigError("row_bits", 0, "must be in 1..13");
    if (col_bits < 2 || col_bits > 10)
        throw ConfigError("col_bits", 0, "must be in 2..10");
}

DdrAddress split_address(std::uint64_t linear, const Geometry& geom)
{
    if (linear >= geom.capacity_words())
        throw AddressOutOfRange("linear address " + std::to_string(linear) + " beyond "
                                + std::to_string(geom.capacity_words()) + " words");
    DdrAddress a;
    a.column = static_cast<unsigned>(linear & ((1ull << geom.col_bits) - 1));
    a.bank = static_cast<unsigned>((linear >> geom.col_bits) & (Geometry::bank_count - 1));
    a.row = static_cast<unsigned>(linear >> (geom.col_bits + 2));
    return a;
}

std::uint64_t join_address(const DdrAddress& addr, const Geometry& geom)
{
    if (addr.bank >= Geometry::bank_count || addr.row >> geom.row_bits || addr.column >> geom.col_bits)
        throw AddressOutOfRange("address field outside geometry");
    return (std::uint64_t{addr.row} << (geom.col_bits + 2))
           | (std::uint64_t{addr.bank} << geom.col_bits) | addr.column;
}

AddressWord column_word(unsigned column, bool auto_precharge) noexcept
{
    return static_cast<AddressWord>((column & 0x3FFu) | (auto_precharge ? kA10 : 0u));
}

std::string_view to_string(TimingParam p) noexcept
{
    switch (p)
    {
    case TimingParam::tRP: return "tRP";
    case TimingParam::tRCD: return "tRCD";
    case TimingParam::tRFC: return "tRFC";
    case TimingParam::tMRD: return "tMRD";
    case TimingParam::tWR: return "tWR";
    case TimingParam::tDAL: return "tDAL";
    case TimingParam::PowerUp: return "power_up";
    }
    return "?";
}

double TimingConfig::nanoseconds(TimingParam p) const noexcept
{
    switch (p)
    {
    case TimingParam::tRP: return t_rp_ns;
    case TimingParam::tRCD: return t_rcd_ns;
    case TimingParam::tRFC: return t_rfc_ns;
    case TimingParam::tMRD: return t_mrd_ns;
    case TimingParam::tWR: return t_wr_ns;
    case TimingParam::tDAL: return t_dal_ns();
    case TimingParam::PowerUp: return power_up_delay_ns;
    }
    return 0.0;
}

void TimingConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(name, 0, "must be > 0");
    };
    positive(t_ck_ns, "t_ck_ns");
    positive(t_rp_ns, "t_rp_ns");
    positive(t_rfc_ns, "t_rfc_ns");
    positive(t_rcd_ns, "t_rcd_ns");
    positive(t_wr_ns, "t_wr_ns");
    positive(refresh_interval_ns, "refresh_interval_ns");
    for (const auto& [v, name] : {std::pair{t_mrd_ns, "t_mrd_ns"}, std::pair{power_up_delay_ns, "power_up_delay_ns"}})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(name, 0, "must be >= 0");
}

unsigned min_cycles(double t_ns, double t_ck_ns) noexcept
{
    if (!(t_ns > 0.0))
        return 0;
    // Tolerate representation error in ratios that are whole numbers.
    return static_cast<unsigned>(std::ceil(t_ns / t_ck_ns - 1e-9));
}

unsigned delay_cycles(double t_ns, double t_ck_ns) noexcept
{
    const unsigned n = min_cycles(t_ns, t_ck_ns);
    return n > 0 ? n - 1 : 0;
}

} // namespace ddrc
