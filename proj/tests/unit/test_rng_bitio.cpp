/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the semcom authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "semcom/bitio.hpp"
#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

using namespace semcom;

TEST_CASE("splitmix64 matches the reference stream") {
    std::uint64_t state = 0;
    CHECK_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
    CHECK_EQ(splitmix64(state), 0x6e789e6aa1b965f4ULL);
    CHECK_EQ(splitmix64(state), 0x06c45d188009454fULL);
}

TEST_CASE("fnv1a64 matches published vectors") {
    CHECK_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    CHECK_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    CHECK_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST_CASE("mix_seed separates seed and salt") {
    CHECK_EQ(mix_seed(1, 2), 18245097872048113419ULL);
    CHECK_EQ(mix_seed(2, 1), 7861790605204899666ULL);
    CHECK_NE(mix_seed(0, 0), mix_seed(0, 1));
    CHECK_NE(mix_seed(0, 0), mix_seed(1, 0));
}

TEST_CASE("Rng streams are deterministic per seed") {
    Rng a(0);
    CHECK_EQ(a.next_u64(), 11091344671253066420ULL);
    CHECK_EQ(a.next_u64(), 13793997310169335082ULL);
    CHECK_EQ(a.next_u64(), 1900383378846508768ULL);

    Rng b(42);
    CHECK_EQ(b.next_u64(), 1546998764402558742ULL);

    Rng c(42);
    for (int i = 0; i < 100; ++i) {
        Rng d = c;  // copies carry the full stream state
        CHECK_EQ(c.next_u64(), d.next_u64());
    }
}

TEST_CASE("next_double lands in [0, 1) with a sane mean") {
    Rng rng(3);
    double lo = 1.0;
    double hi = 0.0;
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.next_double();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
    }
    CHECK_GE(lo, 0.0);
    CHECK_LT(hi, 1.0);
    CHECK_LT(std::abs(sum / n - 0.5), 0.02);
}

TEST_CASE("next_gaussian has unit variance and zero mean") {
    Rng rng(7);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.next_gaussian();
        sum += x;
        sq += x * x;
    }
    CHECK_LT(std::abs(sum / n), 0.02);
    CHECK_LT(std::abs(sq / n - 1.0), 0.03);
}

TEST_CASE("BitWriter packs MSB-first") {
    BitWriter writer;
    writer.write_bits(0b101, 3);
    CHECK_EQ(writer.bit_count(), 3);
    writer.write_bits(0b01, 2);
    writer.align_to_byte();
    const auto bytes = writer.bytes();
    REQUIRE_EQ(bytes.size(), 1);
    // 101 01 padded with zeros -> 1010 1000.
    CHECK_EQ(bytes[0], 0xa8);
}

TEST_CASE("BitWriter/BitReader round-trip mixed fields") {
    const std::vector<std::uint8_t> tail{1, 2, 3};
    BitWriter writer;
    writer.write_bit(1);
    writer.write_bits(0x2b, 7);
    writer.write_u32_le(0xdeadbeef);
    writer.write_bits(0x3ff, 10);
    writer.align_to_byte();
    writer.write_bytes(tail.data(), tail.size());

    BitReader reader(writer.bytes().data(), writer.bit_count());
    CHECK_EQ(reader.read_bit(), 1);
    CHECK_EQ(reader.read_bits(7), 0x2b);
    CHECK_EQ(reader.read_u32_le(), 0xdeadbeefU);
    CHECK_EQ(reader.read_bits(10), 0x3ff);
    CHECK_EQ(reader.read_bits(6), 0);  // alignment padding
    CHECK_EQ(reader.read_bits(8), 1);
    CHECK_EQ(reader.read_bits(8), 2);
    CHECK_EQ(reader.read_bits(8), 3);
    CHECK_EQ(reader.remaining(), 0);
}

TEST_CASE("BitReader throws when exhausted") {
    BitWriter writer;
    writer.write_bits(0xff, 8);
    BitReader reader(writer.bytes().data(), writer.bit_count());
    reader.read_bits(8);
    CHECK_THROWS_AS(reader.read_bit(), MalformedPayload);
}

TEST_CASE("unaligned byte writes keep bit order") {
    const std::vector<std::uint8_t> one{0x80};
    BitWriter writer;
    writer.write_bit(1);
    writer.write_bytes(one.data(), one.size());
    writer.align_to_byte();
    const auto bytes = writer.bytes();
    REQUIRE_EQ(bytes.size(), 2);
    CHECK_EQ(bytes[0], 0xc0);  // 1 then 1000 0000 shifted by one bit
    CHECK_EQ(bytes[1], 0x00);
}
