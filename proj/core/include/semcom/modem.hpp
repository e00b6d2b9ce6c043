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

#include <complex>
#include <cstdint>
#include <vector>

#include "semcom/rng.hpp"

namespace semcom {

/// QPSK symbols with unit energy. Bits map pairwise, Gray-coded: the first
/// bit selects the sign of the in-phase component and the second the
/// quadrature, 0 -> +1/sqrt(2) and 1 -> -1/sqrt(2). An odd trailing bit is
/// padded with 0 and flagged.
struct QpskSymbols {
    std::vector<std::complex<double>> symbols;
    bool padded = false;
};

QpskSymbols qpsk_modulate(const std::vector<std::uint8_t>& bits);

/// Hard decisions back to bits (two per symbol, sign-based).
std::vector<std::uint8_t> qpsk_hard_demodulate(const std::vector<std::complex<double>>& symbols);

/// Total noise variance (both components) for an Es/N0 in dB with unit
/// symbol energy: sigma^2 = 10^(-snr_db / 10).
double noise_variance_for_snr_db(double snr_db);

/// Adds circular complex Gaussian noise of total variance sigma^2 (sigma^2/2
/// per component) drawn from `rng`.
std::vector<std::complex<double>> awgn_channel(const std::vector<std::complex<double>>& symbols,
                                               double snr_db, Rng& rng);

/// Exact per-bit LLRs for Gray-mapped QPSK in AWGN: two per symbol,
/// 2 * sqrt(2) * y / sigma^2 on the in-phase then quadrature component.
/// Positive LLR favors bit 0. Throws ConfigError for non-positive variance.
std::vector<double> qpsk_llr(const std::vector<std::complex<double>>& symbols,
                             double noise_variance);

} // namespace semcom
