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

#pragma once

#include <cstdint>
#include <vector>

#include "semcom/errors.hpp"

namespace semcom {

/// Append-only bit buffer. Bits are packed MSB-first within each byte, so a
/// buffer written as 0b1,0b0,0b1 reads back as byte 0b10100000 (plus the bit
/// count to mark where valid data ends).
class BitWriter {
public:
    /// Appends the low `count` bits of `value`, most significant first.
    void write_bits(std::uint64_t value, int count) {
        for (int i = count - 1; i >= 0; --i) {
            write_bit(static_cast<int>((value >> i) & 1u));
        }
    }

    void write_bit(int bit) {
        const std::size_t byte = bit_count_ / 8;
        if (byte == bytes_.size()) bytes_.push_back(0);
        if (bit) bytes_[byte] |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
        ++bit_count_;
    }

    /// Appends whole bytes. Valid at any bit offset but cheapest when the
    /// cursor is byte aligned.
    void write_bytes(const std::uint8_t* data, std::size_t len) {
        if (bit_count_ % 8 == 0) {
            bytes_.insert(bytes_.end(), data, data + len);
            bit_count_ += 8 * len;
        } else {
            for (std::size_t i = 0; i < len; ++i) write_bits(data[i], 8);
        }
    }

    /// Writes a 32-bit value as 4 little-endian bytes (byte-aligned use).
    void write_u32_le(std::uint32_t value) {
        for (int i = 0; i < 4; ++i) {
            write_bits((value >> (8 * i)) & 0xffu, 8);
        }
    }

    /// Zero-pads the buffer up to the next byte boundary.
    void align_to_byte() {
        while (bit_count_ % 8 != 0) write_bit(0);
    }

    std::uint64_t bit_count() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t> take_bytes() && { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_count_ = 0;
};

/// Sequential reader over an MSB-first packed bit buffer.
class BitReader {
public:
    BitReader(const std::uint8_t* data, std::uint64_t bit_count)
        : data_(data), bit_count_(bit_count) {}

    int read_bit() {
        if (cursor_ >= bit_count_) {
            throw MalformedPayload("bit stream exhausted");
        }
        const int bit = (data_[cursor_ / 8] >> (7 - cursor_ % 8)) & 1;
        ++cursor_;
        return bit;
    }

    std::uint64_t read_bits(int count) {
        std::uint64_t value = 0;
        for (int i = 0; i < count; ++i) {
            value = (value << 1) | static_cast<std::uint64_t>(read_bit());
        }
        return value;
    }

    std::uint32_t read_u32_le() {
        std::uint32_t value = 0;
        for (int i = 0; i < 4; ++i) {
            value |= static_cast<std::uint32_t>(read_bits(8)) << (8 * i);
        }
        return value;
    }

    std::uint64_t remaining() const { return bit_count_ - cursor_; }
    std::uint64_t cursor() const { return cursor_; }

private:
    const std::uint8_t* data_;
    std::uint64_t bit_count_;
    std::uint64_t cursor_ = 0;
};

} // namespace semcom
