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

#include "semcom/codec.hpp"
#include "semcom/ldpc.hpp"

namespace semcom {

/// Physical-link operating point for Monte-Carlo simulation.
struct LinkConfig {
    int info_block_bits = 1056;  ///< 1056 or 8448.
    CodeRate rate = CodeRate::R1_3;
    double snr_db = 0.0;         ///< Es/N0; +infinity short-circuits to an ideal link.
    int max_iterations = 20;
    std::uint64_t seed = 0;
};

/// Monte-Carlo outcome. A block error means the decoded message differs from
/// the transmitted one in any bit (regardless of the converged flag).
struct LinkResult {
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
    double bler = 0.0;
    std::uint64_t seed = 0;  ///< Echo of the stream that produced the result.
};

/// Number of K-bit blocks needed for a payload of `bit_count` bits.
std::uint64_t block_count(std::uint64_t bit_count, int k_bits);

/// Payload size after zero-padding the last block: block_count * K.
std::uint64_t padded_bits(std::uint64_t bit_count, int k_bits);

/// Splits a payload into K-bit blocks (MSB-first bit order, zero-padded
/// final block). A zero-bit payload yields no blocks.
std::vector<std::vector<std::uint8_t>> segment_payload(const SemanticPayload& payload, int k_bits);

/// Estimates BLER at the configured operating point over `num_blocks`
/// random message blocks.
///
/// Each block runs encode -> rate match -> QPSK -> AWGN -> LLR -> rate
/// recovery -> min-sum decode on an RNG stream derived from (seed, block
/// index), so results are byte-identical for any worker count. `workers`
/// <= 0 reads the SEMCOM_THREADS environment variable, defaulting to the
/// hardware concurrency.
LinkResult simulate_bler(const LinkConfig& config, std::uint64_t num_blocks, int workers = 0);

/// End-to-end payload transmission through the simulated link.
struct PayloadTransmission {
    SemanticPayload received;  ///< Reassembled payload (original bit count).
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
};

/// Segments `payload`, transmits every block at the configured operating
/// point (per-block derived noise streams), and reassembles the decoded
/// bits. An infinite snr_db bypasses the channel entirely.
PayloadTransmission transmit_payload(const SemanticPayload& payload, const LinkConfig& config);

} // namespace semcom
