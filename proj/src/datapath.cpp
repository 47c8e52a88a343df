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

#include "ddrc/datapath.hpp"

#include "ddrc/error.hpp"

#include <string>

namespace ddrc {

void check_beat_sequence(const BeatStream& stream)
{
    for (std::size_t i = 0; i < stream.beats.size(); ++i)
    {
        const Beat& b = stream.beats[i];
        const Edge want = i % 2 == 0 ? Edge::Rising : Edge::Falling;
        if (b.edge != want)
            throw MalformedStream("beat " + std::to_string(i) + " on wrong edge");
        const std::uint64_t want_clock = stream.beats.front().clock + i / 2;
        if (b.clock != want_clock)
            throw MalformedStream("beat " + std::to_string(i) + " at clock " + std::to_string(b.clock)
                                  + ", expected " + std::to_string(want_clock));
    }
}

BeatStream pack_write(std::uint64_t word, std::uint64_t start_clock)
{
    BeatStream s;
    s.beats.reserve(4);
    for (unsigned i = 0; i < 4; ++i)
        s.beats.push_back(Beat{start_clock + i / 2, i % 2 ? Edge::Falling : Edge::Rising,
                               static_cast<std::uint16_t>(word >> (16 * i))});
    return s;
}

std::uint64_t unpack_read(const BeatStream& stream)
{
    if (stream.size() != 4)
        throw MalformedStream("expected 4 beats, got " + std::to_string(stream.size()));
    check_beat_sequence(stream);
    std::uint64_t word = 0;
    for (unsigned i = 0; i < 4; ++i)
    {
        if (stream.beats[i].masked)
            throw MalformedStream("masked beat in read data");
        word |= std::uint64_t{stream.beats[i].word} << (16 * i);
    }
    return word;
}

BeatStream write_burst(std::uint64_t word, unsigned burst_length, std::uint64_t start_clock)
{
    BeatStream s = pack_write(word, start_clock);
    if (burst_length == 2)
    {
        s.beats.resize(2);
    }
    else if (burst_length == 8)
    {
        for (unsigned i = 4; i < 8; ++i)
            s.beats.push_back(Beat{start_clock + i / 2, i % 2 ? Edge::Falling : Edge::Rising, 0, true});
    }
    else if (burst_length != 4)
    {
        throw InvalidField("burst_length");
    }
    return s;
}

std::uint64_t read_burst_word(const BeatStream& stream, unsigned burst_length)
{
    if (stream.size() != burst_length)
        throw MalformedStream("expected " + std::to_string(burst_length) + " beats, got "
                              + std::to_string(stream.size()));
    check_beat_sequence(stream);
    if (burst_length == 2)
        return std::uint64_t{stream.beats[0].word} | (std::uint64_t{stream.beats[1].word} << 16);
    BeatStream head;
    head.beats.assign(stream.beats.begin(), stream.beats.begin() + 4);
    return unpack_read(head);
}

} // namespace ddrc
