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

#include <cstdint>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "semcom/codec.hpp"
#include "semcom/embedding.hpp"
#include "semcom/filter.hpp"
#include "semcom/ldpc.hpp"
#include "semcom/link.hpp"
#include "semcom/modem.hpp"
#include "semcom/rng.hpp"
#include "semcom/scene.hpp"

namespace {

std::vector<std::uint8_t> random_message(int bits, std::uint64_t seed) {
    semcom::Rng rng(seed);
    std::vector<std::uint8_t> message(static_cast<std::size_t>(bits));
    for (auto& bit : message) bit = static_cast<std::uint8_t>(rng.next_u64() & 1);
    return message;
}

void bm_ldpc_encode(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const semcom::LdpcCode code = semcom::LdpcCode::for_info_bits(k);
    const auto message = random_message(k, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(code.encode(message));
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(k) / 8);
}
BENCHMARK(bm_ldpc_encode)->Arg(1056)->Arg(8448);

void bm_ldpc_decode_noiseless(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const semcom::LdpcCode code = semcom::LdpcCode::for_info_bits(k);
    const auto message = random_message(k, 2);
    const auto codeword = code.encode(message);
    std::vector<double> llrs(codeword.size());
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        llrs[i] = codeword[i] != 0 ? -4.0 : 4.0;
    }
    semcom::LdpcDecoder decoder(code);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decoder.decode(llrs, 20));
    }
}
BENCHMARK(bm_ldpc_decode_noiseless)->Arg(1056)->Arg(8448);

void bm_link_block_0db(benchmark::State& state) {
    semcom::LinkConfig config;
    config.info_block_bits = 1056;
    config.rate = semcom::CodeRate::R1_2;
    config.snr_db = 0.0;
    std::uint64_t block = 0;
    for (auto _ : state) {
        config.seed = block++;
        benchmark::DoNotOptimize(semcom::simulate_bler(config, 1, 1));
    }
}
BENCHMARK(bm_link_block_0db);

void bm_qpsk_chain(benchmark::State& state) {
    const auto bits = random_message(8448, 3);
    const double sigma2 = semcom::noise_variance_for_snr_db(6.0);
    semcom::Rng rng(4);
    for (auto _ : state) {
        const semcom::QpskSymbols symbols = semcom::qpsk_modulate(bits);
        const auto noisy = semcom::awgn_channel(symbols.symbols, 6.0, rng);
        benchmark::DoNotOptimize(semcom::qpsk_llr(noisy, sigma2));
    }
}
BENCHMARK(bm_qpsk_chain);

void bm_hash_embed(benchmark::State& state) {
    semcom::EmbedderConfig config;
    config.backend = semcom::EmbedderBackend::Hash;
    auto embedder = semcom::make_embedder(config);
    std::vector<std::string> sentences;
    for (int i = 0; i < 16; ++i) {
        sentences.push_back("subject" + std::to_string(i) + " predicate object" +
                            std::to_string(i));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(embedder->embed(sentences));
    }
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(bm_hash_embed);

void bm_residual_norm(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    semcom::Rng rng(5);
    std::vector<semcom::Embedding> vectors;
    for (int i = 0; i < count; ++i) {
        semcom::Embedding v(384);
        for (auto& x : v) x = rng.next_gaussian();
        semcom::normalize(v);
        vectors.push_back(std::move(v));
    }
    for (auto _ : state) {
        for (std::size_t k = 0; k < vectors.size(); ++k) {
            benchmark::DoNotOptimize(semcom::residual_norm(k, vectors));
        }
    }
}
BENCHMARK(bm_residual_norm)->Arg(8)->Arg(32);

void bm_feature_map_encode(benchmark::State& state) {
    const semcom::FeatureMapSpec spec = semcom::make_synthetic_feature_map(4, 64, 64, 8, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(semcom::encode_feature_map(spec, 512, 512));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.values.size()));
}
BENCHMARK(bm_feature_map_encode);

} // namespace

BENCHMARK_MAIN();
