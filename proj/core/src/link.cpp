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

#include "semcom/link.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "semcom/errors.hpp"
#include "semcom/modem.hpp"
#include "semcom/rng.hpp"

namespace semcom {

namespace {

void check_block_bits(int k_bits) {
    if (k_bits != 1056 && k_bits != 8448) {
        throw ConfigError("info block length must be 1056 or 8448");
    }
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("SEMCOM_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Transmits one block of message bits and decodes it. The RNG stream
/// drives only the channel noise here; message generation (when random) is
/// the caller's business.
LdpcDecodeResult send_through_channel(const LdpcCode& code, LdpcDecoder& decoder,
                                      const std::vector<std::uint8_t>& message,
                                      const LinkConfig& config, Rng& rng) {
    const std::vector<std::uint8_t> codeword = code.encode(message);
    const std::vector<std::uint8_t> tx_bits = rate_match(code, codeword, config.rate);
    const QpskSymbols tx = qpsk_modulate(tx_bits);
    const std::vector<std::complex<double>> rx = awgn_channel(tx.symbols, config.snr_db, rng);
    std::vector<double> llrs = qpsk_llr(rx, noise_variance_for_snr_db(config.snr_db));
    llrs.resize(tx_bits.size());  // drop the pad LLR if modulation padded
    const std::vector<double> full = rate_recover(code, llrs, config.rate);
    return decoder.decode(full, config.max_iterations);
}

} // namespace

std::uint64_t block_count(std::uint64_t bit_count, int k_bits) {
    check_block_bits(k_bits);
    return (bit_count + static_cast<std::uint64_t>(k_bits) - 1) /
           static_cast<std::uint64_t>(k_bits);
}

std::uint64_t padded_bits(std::uint64_t bit_count, int k_bits) {
    return block_count(bit_count, k_bits) * static_cast<std::uint64_t>(k_bits);
}

std::vector<std::vector<std::uint8_t>> segment_payload(const SemanticPayload& payload,
                                                       int k_bits) {
    check_block_bits(k_bits);
    const std::uint64_t blocks = block_count(payload.bit_count, k_bits);
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(blocks);
    for (std::uint64_t b = 0; b < blocks; ++b) {
        std::vector<std::uint8_t> block(static_cast<std::size_t>(k_bits), 0);
        for (int i = 0; i < k_bits; ++i) {
            const std::uint64_t bit = b * static_cast<std::uint64_t>(k_bits) +
                                      static_cast<std::uint64_t>(i);
            if (bit >= payload.bit_count) break;  // zero padding
            block[static_cast<std::size_t>(i)] =
                (payload.bytes[bit / 8] >> (7 - bit % 8)) & 1;
        }
        out.push_back(std::move(block));
    }
    return out;
}

LinkResult simulate_bler(const LinkConfig& config, std::uint64_t num_blocks, int workers) {
    check_block_bits(config.info_block_bits);
    LinkResult result;
    result.blocks = num_blocks;
    result.seed = config.seed;
    if (num_blocks == 0) return result;

    if (std::isinf(config.snr_db) && config.snr_db > 0.0) {
        // Ideal link: nothing to estimate, no errors by definition.
        return result;
    }

    const LdpcCode code = LdpcCode::for_info_bits(config.info_block_bits);
    const int thread_count =
        static_cast<int>(std::min<std::uint64_t>(num_blocks,
                                                 static_cast<std::uint64_t>(
                                                     resolve_workers(workers))));

    // Each block gets its own derived stream, so the tally is independent of
    // how blocks are spread over workers.
    auto run_range = [&](std::uint64_t begin, std::uint64_t stride,
                         std::uint64_t& errors_out) {
        LdpcDecoder decoder(code);
        std::vector<std::uint8_t> message(static_cast<std::size_t>(code.message_bits()));
        std::uint64_t errors = 0;
        for (std::uint64_t b = begin; b < num_blocks; b += stride) {
            Rng rng(mix_seed(config.seed, b));
            for (auto& bit : message) bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
            const LdpcDecodeResult decoded =
                send_through_channel(code, decoder, message, config, rng);
            if (decoded.message != message) ++errors;
        }
        errors_out = errors;
    };

    std::vector<std::uint64_t> per_thread_errors(static_cast<std::size_t>(thread_count), 0);
    if (thread_count == 1) {
        run_range(0, 1, per_thread_errors[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) {
            pool.emplace_back(run_range, static_cast<std::uint64_t>(t),
                              static_cast<std::uint64_t>(thread_count),
                              std::ref(per_thread_errors[static_cast<std::size_t>(t)]));
        }
        for (auto& th : pool) th.join();
    }

    for (std::uint64_t e : per_thread_errors) result.block_errors += e;
    result.bler = static_cast<double>(result.block_errors) / static_cast<double>(num_blocks);
    return result;
}

PayloadTransmission transmit_payload(const SemanticPayload& payload, const LinkConfig& config) {
    check_block_bits(config.info_block_bits);

    PayloadTransmission out;
    out.received = payload;  // copies kind, dimensions, sizes
    out.blocks = block_count(payload.bit_count, config.info_block_bits);

    if (std::isinf(config.snr_db) && config.snr_db > 0.0) {
        return out;  // ideal link: bits arrive unchanged
    }

    const LdpcCode code = LdpcCode::for_info_bits(config.info_block_bits);
    LdpcDecoder decoder(code);
    const std::vector<std::vector<std::uint8_t>> blocks =
        segment_payload(payload, config.info_block_bits);

    std::vector<std::uint8_t> bits;
    bits.reserve(blocks.size() * static_cast<std::size_t>(config.info_block_bits));
    for (std::uint64_t b = 0; b < blocks.size(); ++b) {
        Rng rng(mix_seed(config.seed, b));
        const LdpcDecodeResult decoded =
            send_through_channel(code, decoder, blocks[static_cast<std::size_t>(b)], config, rng);
        if (decoded.message != blocks[static_cast<std::size_t>(b)]) ++out.block_errors;
        bits.insert(bits.end(), decoded.message.begin(), decoded.message.end());
    }

    // Reassemble: pack decoded bits MSB-first and truncate the padding.
    std::vector<std::uint8_t> bytes((payload.bit_count + 7) / 8, 0);
    for (std::uint64_t i = 0; i < payload.bit_count; ++i) {
        if (bits[static_cast<std::size_t>(i)]) {
            bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
        }
    }
    out.received.bytes = std::move(bytes);
    out.received.bit_count = payload.bit_count;
    return out;
}

} // namespace semcom
