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

#include "ddrc/error.hpp"
#include "ddrc/protocol.hpp"

#include <doctest.h>

#include <random>

using namespace ddrc;

namespace {

struct Row
{
    Command cmd;
    char ras, cas, we;
};

// RAS/CAS/WE truth table.
constexpr Row kTable[] = {
    {Command::LoadModeRegister, 'L', 'L', 'L'}, {Command::AutoRefresh, 'L', 'L', 'H'},
    {Command::Precharge, 'L', 'H', 'L'},        {Command::Active, 'L', 'H', 'H'},
    {Command::Write, 'H', 'L', 'L'},            {Command::Read, 'H', 'L', 'H'},
    {Command::Nop, 'H', 'H', 'H'},
};

Level lv(char c) { return c == 'H' ? Level::H : Level::L; }

} // namespace

TEST_CASE("command encoding matches the truth table")
{
    for (const auto& r : kTable)
    {
        const auto s = encode_command(r.cmd);
        CHECK(s.ras == lv(r.ras));
        CHECK(s.cas == lv(r.cas));
        CHECK(s.we == lv(r.we));
        CHECK(s.cs == Level::L);
        CHECK(s.cke == Level::H);
    }
    CHECK(encode_command(Command::Deselect).cs == Level::H);
}

TEST_CASE("decode inverts encode and rejects the unused code")
{
    for (const auto c : kAllCommands)
        CHECK(decode_command(encode_command(c)) == c);

    ControlSignals s;
    s.ras = Level::H;
    s.cas = Level::H;
    s.we = Level::L;
    CHECK_THROWS_AS(decode_command(s), UnknownCommand);
    s.cs = Level::H;
    CHECK(decode_command(s) == Command::Deselect);
}

TEST_CASE("mode register fields")
{
    ModeRegister mr;
    mr.burst_length = 4;
    mr.cas_latency = CasLatency::from_cycles(2);
    CHECK(encode_mode_register(mr) == 0x022);

    mr.burst_length = 8;
    mr.burst_type = BurstType::Interleaved;
    mr.cas_latency = CasLatency{5};
    CHECK(encode_mode_register(mr) == (0x3 | 0x8 | (0x6 << 4)));

    mr.burst_length = 3;
    CHECK_THROWS_AS(encode_mode_register(mr), InvalidField);

    CHECK_THROWS_AS(decode_mode_register(0x000), InvalidField); // BL code 000
    CHECK_THROWS_AS(decode_mode_register(0x002 | (0x1 << 4)), InvalidField); // CL code 001
    CHECK(decode_mode_register(0x032).cas_latency == CasLatency::from_cycles(3));
}

TEST_CASE("mode register round trip over random valid fields")
{
    std::mt19937_64 rng(11);
    const unsigned bls[] = {2, 4, 8};
    const std::uint8_t cls[] = {4, 5, 6};
    for (int i = 0; i < 10000; ++i)
    {
        ModeRegister mr;
        mr.burst_length = bls[rng() % 3];
        mr.burst_type = rng() % 2 ? BurstType::Interleaved : BurstType::Sequential;
        mr.cas_latency = CasLatency{cls[rng() % 3]};
        mr.operating_mode = static_cast<unsigned>(rng() % 64);
        const auto w = encode_mode_register(mr);
        REQUIRE((w & ~kAddressMask) == 0);
        REQUIRE(decode_mode_register(w) == mr);
    }
}

TEST_CASE("address split against a div/mod reference")
{
    Geometry g;
    g.row_bits = 13;
    g.col_bits = 9;
    const std::uint64_t cols = 512;
    const std::uint64_t banks = 4;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; ++i)
    {
        const std::uint64_t lin = rng() % g.capacity_words();
        const auto a = split_address(lin, g);
        CHECK(a.column == lin % cols);
        CHECK(a.bank == (lin / cols) % banks);
        CHECK(a.row == lin / (cols * banks));
        REQUIRE(join_address(a, g) == lin);
    }
    CHECK_THROWS_AS(split_address(g.capacity_words(), g), AddressOutOfRange);
    CHECK_THROWS_AS(join_address(DdrAddress{4, 0, 0, false}, g), AddressOutOfRange);
}

TEST_CASE("column word puts auto precharge on A10")
{
    CHECK(column_word(0x2A, true) == (0x2A | kA10));
    CHECK(column_word(0x2A, false) == 0x2A);
    CHECK(column_word(0x3FF, true) == (0x3FF | kA10));
}

TEST_CASE("delay cycles")
{
    CHECK(delay_cycles(20.0, 10.0) == 1);
    CHECK(delay_cycles(15.0, 10.0) == 1);
    CHECK(delay_cycles(70.0, 10.0) == 6);
    CHECK(delay_cycles(5.0, 10.0) == 0);
    CHECK(delay_cycles(10.0, 10.0) == 0);
    CHECK(delay_cycles(0.0, 10.0) == 0);
    CHECK(delay_cycles(30.0, 7.5) == 3);
    CHECK(min_cycles(30.0, 7.5) == 4);
    CHECK(min_cycles(20.000000001, 10.0) == 2);
}

TEST_CASE("timing validation")
{
    TimingConfig t;
    CHECK_NOTHROW(t.validate());
    t.t_ck_ns = 0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t = TimingConfig{};
    t.t_rcd_ns = -1;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    CHECK(TimingConfig{}.t_dal_ns() == doctest::Approx(35.0));
}
