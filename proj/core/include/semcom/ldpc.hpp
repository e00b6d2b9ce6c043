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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace semcom {

inline constexpr int kBaseRows = 46;        ///< Check-node blocks in the base graph.
inline constexpr int kBaseCols = 68;        ///< Variable-node blocks in the base graph.
inline constexpr int kSystematicBlocks = 22;///< Leading blocks carrying the message.
inline constexpr int kCoreParityBlocks = 4; ///< Dense parity blocks solved jointly.

/// Exponent matrix of a quasi-cyclic LDPC code: entry -1 marks an absent
/// block; v >= 0 is a circulant right-shift applied modulo the lifting size.
using BaseMatrix = std::array<std::array<std::int16_t, kBaseCols>, kBaseRows>;

/// The built-in base graph (lifting-set of Zc = 3 * 2^k sizes, which covers
/// both supported info-block lengths).
const BaseMatrix& bg1_base_matrix();

/// Parses a base-matrix descriptor file: '#' comment lines, then 46 rows of
/// 68 whitespace-separated integers. Throws FormatError on any deviation.
BaseMatrix load_base_matrix_file(const std::string& path);

/// A lifted code instance: expanded connectivity for decoding plus the
/// precomputed GF(2) solve for encoding.
///
/// Geometry for lifting size Zc: K = 22 Zc message bits, codeword of
/// 68 Zc bits whose first K bits are the message, and a rate-matching
/// circular buffer holding the trailing 66 Zc bits (the first 2 Zc
/// systematic bits are always punctured).
class LdpcCode {
public:
    /// Lifts `base` by Zc. Cost is dominated by inverting the core parity
    /// submatrix (once per construction).
    LdpcCode(const BaseMatrix& base, int zc);

    /// Convenience for the two supported message lengths (1056 and 8448
    /// bits). Throws ConfigError otherwise.
    static LdpcCode for_info_bits(int k_bits);

    int zc() const { return zc_; }
    int message_bits() const { return k_bits_; }
    int codeword_bits() const { return n_bits_; }
    int buffer_bits() const { return buffer_bits_; }
    const BaseMatrix& base() const { return base_; }

    /// Expanded parity-check structure (CSR over expanded checks).
    const std::vector<std::int32_t>& edge_variables() const { return edge_var_; }
    const std::vector<std::int32_t>& check_offsets() const { return check_offset_; }
    int check_count() const { return kBaseRows * zc_; }

    /// Systematic encode; returns the full codeword. Throws LengthMismatch
    /// unless `message` has exactly message_bits() entries (each 0 or 1).
    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& message) const;

    /// True iff `codeword` satisfies every parity check.
    bool parity_ok(const std::vector<std::uint8_t>& codeword) const;

private:
    void expand_edges();
    void build_core_inverse();

    int zc_ = 0;
    int k_bits_ = 0;
    int n_bits_ = 0;
    int buffer_bits_ = 0;
    BaseMatrix base_{};

    std::vector<std::int32_t> edge_var_;
    std::vector<std::int32_t> check_offset_;

    // Bit-packed inverse of the (4 Zc)^2 core parity submatrix.
    int core_dim_ = 0;
    int core_words_ = 0;
    std::vector<std::uint64_t> core_inverse_;
};

struct LdpcDecodeResult {
    std::vector<std::uint8_t> message;  ///< Hard decisions on the systematic bits.
    bool converged = false;             ///< Parity satisfied with every posterior informative.
    int iterations = 0;                 ///< Check-update passes performed.
};

/// Iterative normalized min-sum decoder (flooding schedule, normalization
/// factor 0.75) with reusable buffers, for tight Monte-Carlo loops.
///
/// Convergence requires every posterior LLR to be nonzero in addition to
/// parity holding, so an all-zero input (no channel information) runs to the
/// iteration cap and reports converged = false rather than trivially
/// accepting the all-zero word.
class LdpcDecoder {
public:
    explicit LdpcDecoder(const LdpcCode& code);

    /// `channel_llrs` holds one LLR per codeword bit (positive favors bit
    /// 0); punctured/untransmitted positions carry 0. Throws LengthMismatch
    /// on a wrong length and ConfigError on a non-positive iteration cap.
    LdpcDecodeResult decode(const std::vector<double>& channel_llrs, int max_iterations);

private:
    const LdpcCode* code_;
    std::vector<float> channel_;
    std::vector<float> c2v_;
    std::vector<float> total_;
    std::vector<std::uint8_t> hard_;
};

/// One-shot decode (constructs a transient workspace).
LdpcDecodeResult ldpc_decode(const LdpcCode& code, const std::vector<double>& channel_llrs,
                             int max_iterations);

/// Supported code rates for rate matching.
enum class CodeRate : std::uint8_t { R1_3 = 0, R1_2 = 1, R2_3 = 2, R5_6 = 3 };

inline constexpr std::array<CodeRate, 4> kAllCodeRates = {CodeRate::R1_3, CodeRate::R1_2,
                                                          CodeRate::R2_3, CodeRate::R5_6};

double code_rate_value(CodeRate rate);
std::string to_string(CodeRate rate);
CodeRate code_rate_from_string(const std::string& token);

/// Number of transmitted bits for a K-bit message at `rate`:
/// E = 2 * round_half_up(K / (2 * rate)), computed in exact integer
/// arithmetic. Always even, so QPSK symbols never split a codeword.
int transmitted_bits(int k_bits, CodeRate rate);

/// Reads E bits from the circular buffer (codeword positions 2 Zc onward,
/// wrapping if E exceeds the buffer).
std::vector<std::uint8_t> rate_match(const LdpcCode& code,
                                     const std::vector<std::uint8_t>& codeword, CodeRate rate);

/// Scatters E received LLRs back onto full codeword positions, accumulating
/// repeats and leaving unseen positions at 0.
std::vector<double> rate_recover(const LdpcCode& code, const std::vector<double>& llrs,
                                 CodeRate rate);

} // namespace semcom
