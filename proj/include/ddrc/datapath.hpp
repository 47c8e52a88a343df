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
#include <vector>

namespace ddrc {

// Width conversion between the 64-bit system bus and the 16-bit DDR data
// pins. Beats go out least-significant half-word first, one per clock edge.

enum class Edge : std::uint8_t
{
    Rising,
    Falling,
};

struct Beat
{
    std::uint64_t clock = 0;
    Edge edge = Edge::Rising;
    std::uint16_t word = 0;
    /// Not driven: the device leaves the addressed cell untouched.
    bool masked = false;

    bool operator==(const Beat&) const = default;
};

struct BeatStream
{
    std::vector<Beat> beats;

    std::size_t size() const noexcept { return beats.size(); }
    /// Clocks covered, counting both ends.
    std::uint64_t clock_span() const noexcept
    {
        return beats.empty() ? 0 : beats.back().clock - beats.front().clock + 1;
    }
};

/// Four beats on (c,R), (c,F), (c+1,R), (c+1,F).
BeatStream pack_write(std::uint64_t word, std::uint64_t start_clock);

/// Inverse of pack_write; throws MalformedStream on a wrong beat count or
/// edge/clock sequence.
std::uint64_t unpack_read(const BeatStream& stream);

/// Device burst carrying one system word. BL=2 carries only the low 32 bits;
/// BL=8 carries the word in the first four beats and masks the rest.
BeatStream write_burst(std::uint64_t word, unsigned burst_length, std::uint64_t start_clock);

/// System word from a captured read burst of burst_length beats.
std::uint64_t read_burst_word(const BeatStream& stream, unsigned burst_length);

/// Throws MalformedStream unless beats alternate Rising/Falling starting on
/// a rising edge, with the clock advancing after each falling edge.
void check_beat_sequence(const BeatStream& stream);

} // namespace ddrc
