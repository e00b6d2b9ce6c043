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

#include "semcom/modem.hpp"

#include <cmath>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

} // namespace

QpskSymbols qpsk_modulate(const std::vector<std::uint8_t>& bits) {
    QpskSymbols out;
    out.padded = bits.size() % 2 != 0;
    out.symbols.reserve((bits.size() + 1) / 2);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        const std::uint8_t b0 = bits[i];
        const std::uint8_t b1 = i + 1 < bits.size() ? bits[i + 1] : 0;
        if (b0 > 1 || b1 > 1) throw ValidationError("modulator input must be 0/1 bits");
        out.symbols.emplace_back(b0 ? -kInvSqrt2 : kInvSqrt2, b1 ? -kInvSqrt2 : kInvSqrt2);
    }
    return out;
}

std::vector<std::uint8_t> qpsk_hard_demodulate(const std::vector<std::complex<double>>& symbols) {
    std::vector<std::uint8_t> bits;
    bits.reserve(2 * symbols.size());
    for (const auto& y : symbols) {
        bits.push_back(y.real() < 0.0 ? 1 : 0);
        bits.push_back(y.imag() < 0.0 ? 1 : 0);
    }
    return bits;
}

double noise_variance_for_snr_db(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

std::vector<std::complex<double>> awgn_channel(const std::vector<std::complex<double>>& symbols,
                                               double snr_db, Rng& rng) {
    const double sigma2 = noise_variance_for_snr_db(snr_db);
    const double component_sigma = std::sqrt(sigma2 / 2.0);
    std::vector<std::complex<double>> out;
    out.reserve(symbols.size());
    for (const auto& x : symbols) {
        const double nr = component_sigma * rng.next_gaussian();
        const double ni = component_sigma * rng.next_gaussian();
        out.emplace_back(x.real() + nr, x.imag() + ni);
    }
    return out;
}

std::vector<double> qpsk_llr(const std::vector<std::complex<double>>& symbols,
                             double noise_variance) {
    if (!(noise_variance > 0.0)) {
        throw ConfigError("noise variance must be positive for LLR computation");
    }
    const double gain = 2.0 * std::sqrt(2.0) / noise_variance;
    std::vector<double> llrs;
    llrs.reserve(2 * symbols.size());
    for (const auto& y : symbols) {
        llrs.push_back(gain * y.real());
        llrs.push_back(gain * y.imag());
    }
    return llrs;
}

} // namespace semcom
