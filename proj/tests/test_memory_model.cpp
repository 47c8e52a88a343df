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

#include <doctest.h>

#include <algorithm>

using namespace ddrc;

namespace {

MemoryConfig test_config()
{
    MemoryConfig c;
    c.timing.power_up_delay_ns = 0;
    return c;
}

constexpr AddressWord kMode = 0x022; // BL4, sequential, CL2

struct Bench
{
    MemoryModel mem{test_config()};
    std::uint64_t now = 0;

    std::vector<Violation> at(std::uint64_t cycle, Command c, AddressWord a = 0, unsigned bank = 0)
    {
        now = cycle;
        return mem.apply_command(c, a, bank, cycle);
    }

    // Legal init at tCK 10: tRP 2, tMRD 2, tRFC 7 clocks.
    std::uint64_t init(AddressWord mode = kMode)
    {
        at(0, Command::Nop);
        at(1, Command::Precharge, kA10);
        at(3, Command::LoadModeRegister, 0, 1);
        at(5, Command::LoadModeRegister, static_cast<AddressWord>(mode | kDllResetBit), 0);
        at(7, Command::Precharge, kA10);
        at(9, Command::AutoRefresh);
        at(16, Command::AutoRefresh);
        at(23, Command::LoadModeRegister, mode, 0);
        return 25;
    }

    bool has(ViolationKind k, std::optional<TimingParam> p = std::nullopt) const
    {
        const auto& v = mem.violations();
        return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k && (!p || x.param == p); });
    }
};

} // namespace

TEST_CASE("legal init is accepted")
{
    Bench b;
    b.init();
    CHECK(b.mem.initialized());
    CHECK(b.mem.violations().empty());
    REQUIRE(b.mem.mode_register());
    CHECK(b.mem.mode_register()->burst_length == 4);
    CHECK(b.mem.extended_mode_register() == AddressWord{0});
}

TEST_CASE("init ordering and timing")
{
    SUBCASE("access before init")
    {
        Bench b;
        b.at(0, Command::Nop);
        b.at(1, Command::Active, 5, 0);
        CHECK(b.has(ViolationKind::NotInitialized));
    }
    SUBCASE("refresh before the mode loads")
    {
        Bench b;
        b.at(0, Command::Nop);
        b.at(1, Command::Precharge, kA10);
        b.at(3, Command::AutoRefresh);
        CHECK(b.has(ViolationKind::InitOrderViolation));
        CHECK_FALSE(b.mem.initialized());
    }
    SUBCASE("second load inside tMRD")
    {
        Bench b;
        b.at(0, Command::Nop);
        b.at(1, Command::Precharge, kA10);
        b.at(3, Command::LoadModeRegister, 0, 1);
        b.at(4, Command::LoadModeRegister, kMode | kDllResetBit, 0);
        CHECK(b.has(ViolationKind::TimingViolation, TimingParam::tMRD));
    }
    SUBCASE("power-up wait")
    {
        auto cfg = test_config();
        cfg.timing.power_up_delay_ns = 1000;
        MemoryModel m(cfg);
        m.apply_command(Command::Nop, 0, 0, 10);
        const auto v = m.apply_command(Command::Precharge, kA10, 0, 50);
        REQUIRE(v.size() == 1);
        CHECK(v[0].param == TimingParam::PowerUp);
    }
    SUBCASE("tRFC between init refreshes")
    {
        Bench b;
        b.at(0, Command::Nop);
        b.at(1, Command::Precharge, kA10);
        b.at(3, Command::LoadModeRegister, 0, 1);
        b.at(5, Command::LoadModeRegister, kMode | kDllResetBit, 0);
        b.at(7, Command::Precharge, kA10);
        b.at(9, Command::AutoRefresh);
        b.at(15, Command::AutoRefresh);
        CHECK(b.has(ViolationKind::TimingViolation, TimingParam::tRFC));
    }
}

TEST_CASE("bank state rules")
{
    Bench b;
    const auto t = b.init();
    CHECK(b.at(t, Command::Read, kA10, 2).at(0).kind == ViolationKind::BankNotActive);
    b.at(t + 1, Command::Active, 7, 2);
    CHECK(b.at(t + 2, Command::Write, kA10, 2).at(0).param == TimingParam::tRCD);
    CHECK(b.at(t + 3, Command::Active, 9, 2).at(0).kind == ViolationKind::BankAlreadyActive);
    CHECK(b.at(t + 4, Command::AutoRefresh).at(0).kind == ViolationKind::BanksNotIdle);

    Bench c;
    const auto u = c.init();
    c.at(u, Command::Active, 7, 3);
    CHECK(c.at(u + 4, Command::LoadModeRegister, kMode, 0).at(0).kind == ViolationKind::BanksNotIdle);
}

TEST_CASE("write then read through data beats")
{
    Bench b;
    auto t = b.init();
    b.at(t, Command::Active, 3, 1);
    REQUIRE(b.at(t + 2, Command::Write, column_word(8, true), 1).empty());
    const std::uint16_t words[] = {0x1111, 0x2222, 0x3333, 0x4444};
    for (unsigned i = 0; i < 4; ++i)
        b.mem.data_beat(t + 3 + i / 2, i % 2 ? Edge::Falling : Edge::Rising, words[i], false);
    CHECK(b.mem.cell(1, 3, 8) == std::uint16_t{0x1111});
    CHECK(b.mem.cell(1, 3, 11) == std::uint16_t{0x4444});

    // tDAL (4 clocks) counts from the clock after the last beat (t+5).
    MemoryModel probe = b.mem;
    CHECK(probe.apply_command(Command::Active, 3, 1, t + 8).at(0).param == TimingParam::tDAL);
    probe = b.mem;
    CHECK(probe.apply_command(Command::Active, 3, 2, t + 8).at(0).param == TimingParam::tDAL);
    t += 9;
    REQUIRE(b.at(t, Command::Active, 3, 1).empty());
    REQUIRE(b.at(t + 2, Command::Read, column_word(10, true), 1).empty());
    std::vector<std::uint16_t> got;
    for (unsigned i = 0; i < 4; ++i)
        got.push_back(*b.mem.data_beat(t + 4 + i / 2, i % 2 ? Edge::Falling : Edge::Rising, std::nullopt, true));
    CHECK(got == std::vector<std::uint16_t>{0x3333, 0x4444, 0x1111, 0x2222});

    // Read auto precharge: idle at READ + BL/2 + tRP.
    probe = b.mem;
    CHECK(probe.apply_command(Command::Active, 0, 1, t + 5).at(0).param == TimingParam::tRP);
    CHECK(b.at(t + 6, Command::Active, 0, 1).empty());
    CHECK(b.mem.violations().empty());
}

TEST_CASE("unwritten cells read as poison")
{
    Bench b;
    const auto t = b.init();
    b.at(t, Command::Active, 100, 0);
    b.at(t + 2, Command::Read, column_word(0, true), 0);
    CHECK(b.mem.data_beat(t + 4, Edge::Rising, std::nullopt, true) == kPoison);
    CHECK(b.mem.data_beat(t + 9, Edge::Rising, std::nullopt, true) == std::nullopt);
    CHECK(b.has(ViolationKind::BeatOverrun));
}

TEST_CASE("burst column order")
{
    using V = std::vector<unsigned>;
    for (unsigned bl : {2u, 4u, 8u})
        for (unsigned s = 0; s < 16; ++s)
        {
            const auto seq = MemoryModel::burst_columns(s, bl, BurstType::Sequential);
            const auto il = MemoryModel::burst_columns(s, bl, BurstType::Interleaved);
            for (unsigned i = 0; i < bl; ++i)
            {
                const unsigned base = s - s % bl;
                CHECK(seq[i] == base + (s % bl + i) % bl);
                CHECK(il[i] == base + ((s % bl) ^ i));
            }
        }
    CHECK(MemoryModel::burst_columns(5, 8, BurstType::Interleaved) == V{5, 4, 7, 6, 1, 0, 3, 2});
    CHECK(MemoryModel::burst_columns(2, 4, BurstType::Sequential) == V{2, 3, 0, 1});
}

TEST_CASE("pin-level decode")
{
    Bench b;
    ControlSignals bad;
    bad.ras = Level::H;
    bad.cas = Level::H;
    bad.we = Level::L;
    CHECK(b.mem.clock(0, bad, 0, 0).at(0).kind == ViolationKind::UnknownCommand);

    ControlSignals off = encode_command(Command::Active);
    off.cke = Level::L;
    CHECK(b.mem.clock(1, off, 0, 0).empty());
    CHECK(b.mem.clock(2, encode_command(Command::Deselect), 0, 0).empty());
}

TEST_CASE("refresh audit")
{
    Bench b;
    const auto t = b.init(); // last AR at cycle 16
    b.at(t, Command::Active, 1, 0);
    b.at(t + 2, Command::Write, column_word(0, true), 0);
    b.mem.data_beat(t + 3, Edge::Rising, 0xBEEF, false);
    REQUIRE(b.mem.stored_words() == 1);

    const std::uint64_t interval = 780;
    CHECK(b.mem.refresh_audit(16 + 2 * interval - 1).empty());
    const auto v = b.mem.refresh_audit(16 + 2 * interval);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::RefreshOverdue);
    CHECK(b.mem.stored_words() == 0);
    CHECK(b.mem.refresh_audit(16 + 3 * interval).empty());
}

TEST_CASE("violation formatting")
{
    Violation v{12, ViolationKind::TimingViolation, TimingParam::tRCD, "x"};
    CHECK(format_violation(v) == "cycle=12 kind=TimingViolation(tRCD) detail=x");
}

TEST_CASE("mode register reload rules")
{
    Bench b;
    const auto t = b.init();
    CHECK(b.at(t, Command::LoadModeRegister, 0x000, 0).at(0).kind == ViolationKind::InvalidModeRegister);
    CHECK(b.at(t + 5, Command::LoadModeRegister, 0x033, 0).empty());
    CHECK(b.mem.mode_register()->burst_length == 8);
    CHECK(b.at(t + 6, Command::Active, 0, 0).at(0).param == TimingParam::tMRD);
}
