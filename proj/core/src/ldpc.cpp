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

#include "semcom/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

/// Normalization factor for the min-sum check-node update.
constexpr float kMinSumAlpha = 0.75f;

int shift_mod(int shift, int zc) {
    return shift % zc;
}

} // namespace

BaseMatrix load_base_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open base matrix descriptor '" + path + "'");

    BaseMatrix matrix{};
    int row = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (row >= kBaseRows) throw FormatError("base matrix descriptor has too many rows");
        std::istringstream fields(line);
        for (int col = 0; col < kBaseCols; ++col) {
            long value = 0;
            if (!(fields >> value)) {
                throw FormatError("base matrix row " + std::to_string(row) +
                                  " has fewer than " + std::to_string(kBaseCols) + " entries");
            }
            if (value < -1 || value > 32767) {
                throw FormatError("base matrix entry out of range at row " + std::to_string(row));
            }
            matrix[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
                static_cast<std::int16_t>(value);
        }
        long extra = 0;
        if (fields >> extra) {
            throw FormatError("base matrix row " + std::to_string(row) + " has extra entries");
        }
        ++row;
    }
    if (row != kBaseRows) {
        throw FormatError("base matrix descriptor has " + std::to_string(row) + " rows; expected " +
                          std::to_string(kBaseRows));
    }
    return matrix;
}

LdpcCode::LdpcCode(const BaseMatrix& base, int zc) : zc_(zc), base_(base) {
    if (zc < 1) throw ConfigError("lifting size must be positive");
    k_bits_ = kSystematicBlocks * zc_;
    n_bits_ = kBaseCols * zc_;
    buffer_bits_ = (kBaseCols - 2) * zc_;
    expand_edges();
    build_core_inverse();
}

LdpcCode LdpcCode::for_info_bits(int k_bits) {
    if (k_bits % kSystematicBlocks != 0) {
        throw ConfigError("info block length must be a multiple of " +
                          std::to_string(kSystematicBlocks));
    }
    const int zc = k_bits / kSystematicBlocks;
    if (zc != 48 && zc != 384) {
        throw ConfigError("unsupported info block length " + std::to_string(k_bits) +
                          " (supported: 1056, 8448)");
    }
    return LdpcCode(bg1_base_matrix(), zc);
}

void LdpcCode::expand_edges() {
    check_offset_.assign(static_cast<std::size_t>(check_count()) + 1, 0);
    std::size_t edges = 0;
    for (int i = 0; i < kBaseRows; ++i) {
        int degree = 0;
        for (int j = 0; j < kBaseCols; ++j) {
            if (base_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= 0) ++degree;
        }
        edges += static_cast<std::size_t>(degree) * static_cast<std::size_t>(zc_);
        for (int z = 0; z < zc_; ++z) {
            check_offset_[static_cast<std::size_t>(i * zc_ + z) + 1] = degree;
        }
    }
    for (std::size_t c = 1; c < check_offset_.size(); ++c) check_offset_[c] += check_offset_[c - 1];

    edge_var_.resize(edges);
    std::size_t cursor = 0;
    for (int i = 0; i < kBaseRows; ++i) {
        for (int z = 0; z < zc_; ++z) {
            for (int j = 0; j < kBaseCols; ++j) {
                const std::int16_t shift =
                    base_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (shift < 0) continue;
                const int s = shift_mod(shift, zc_);
                edge_var_[cursor++] = static_cast<std::int32_t>(j * zc_ + (z + s) % zc_);
            }
        }
    }
}

void LdpcCode::build_core_inverse() {
    core_dim_ = kCoreParityBlocks * zc_;
    core_words_ = (core_dim_ + 63) / 64;

    // Rows of [A | I], bit-packed; A is the submatrix of the first four
    // block rows restricted to the four core parity block columns.
    const int row_words = 2 * core_words_;
    std::vector<std::uint64_t> work(static_cast<std::size_t>(core_dim_) *
                                        static_cast<std::size_t>(row_words),
                                    0);
    auto set_bit = [&](int r, int c) {
        work[static_cast<std::size_t>(r) * static_cast<std::size_t>(row_words) +
             static_cast<std::size_t>(c / 64)] ^= (1ULL << (c % 64));
    };

    for (int i = 0; i < kCoreParityBlocks; ++i) {
        for (int j = kSystematicBlocks; j < kSystematicBlocks + kCoreParityBlocks; ++j) {
            const std::int16_t shift =
                base_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (shift < 0) continue;
            const int s = shift_mod(shift, zc_);
            for (int z = 0; z < zc_; ++z) {
                set_bit(i * zc_ + z, (j - kSystematicBlocks) * zc_ + (z + s) % zc_);
            }
        }
    }
    for (int r = 0; r < core_dim_; ++r) set_bit(r, core_dim_ + r);

    // Gauss-Jordan elimination over GF(2).
    auto word_at = [&](int r, int w) -> std::uint64_t& {
        return work[static_cast<std::size_t>(r) * static_cast<std::size_t>(row_words) +
                    static_cast<std::size_t>(w)];
    };
    for (int col = 0; col < core_dim_; ++col) {
        int pivot = -1;
        for (int r = col; r < core_dim_; ++r) {
            if ((word_at(r, col / 64) >> (col % 64)) & 1ULL) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw Error("core parity submatrix is singular; base matrix is unusable");
        if (pivot != col) {
            for (int w = 0; w < row_words; ++w) std::swap(word_at(pivot, w), word_at(col, w));
        }
        for (int r = 0; r < core_dim_; ++r) {
            if (r == col) continue;
            if ((word_at(r, col / 64) >> (col % 64)) & 1ULL) {
                for (int w = 0; w < row_words; ++w) word_at(r, w) ^= word_at(col, w);
            }
        }
    }

    core_inverse_.assign(static_cast<std::size_t>(core_dim_) *
                             static_cast<std::size_t>(core_words_),
                         0);
    for (int r = 0; r < core_dim_; ++r) {
        for (int w = 0; w < core_words_; ++w) {
            core_inverse_[static_cast<std::size_t>(r) * static_cast<std::size_t>(core_words_) +
                          static_cast<std::size_t>(w)] = word_at(r, core_words_ + w);
        }
    }
}

std::vector<std::uint8_t> LdpcCode::encode(const std::vector<std::uint8_t>& message) const {
    if (static_cast<int>(message.size()) != k_bits_) {
        throw LengthMismatch("message has " + std::to_string(message.size()) + " bits; code needs " +
                             std::to_string(k_bits_));
    }

    std::vector<std::uint8_t> codeword(static_cast<std::size_t>(n_bits_), 0);
    for (int b = 0; b < k_bits_; ++b) {
        if (message[static_cast<std::size_t>(b)] > 1) {
            throw ValidationError("message entries must be 0 or 1");
        }
        codeword[static_cast<std::size_t>(b)] = message[static_cast<std::size_t>(b)];
    }

    // Syndrome of the first four block rows over the systematic columns.
    std::vector<std::uint64_t> syndrome(static_cast<std::size_t>(core_words_ * 1), 0);
    std::vector<std::uint8_t> synd_bits(static_cast<std::size_t>(core_dim_), 0);
    for (int i = 0; i < kCoreParityBlocks; ++i) {
        for (int j = 0; j < kSystematicBlocks; ++j) {
            const std::int16_t shift =
                base_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (shift < 0) continue;
            const int s = shift_mod(shift, zc_);
            const std::uint8_t* block = message.data() + static_cast<std::ptrdiff_t>(j) * zc_;
            std::uint8_t* out = synd_bits.data() + static_cast<std::ptrdiff_t>(i) * zc_;
            for (int z = 0; z < zc_; ++z) out[z] ^= block[(z + s) % zc_];
        }
    }
    syndrome.assign(static_cast<std::size_t>(core_words_), 0);
    for (int b = 0; b < core_dim_; ++b) {
        if (synd_bits[static_cast<std::size_t>(b)]) {
            syndrome[static_cast<std::size_t>(b / 64)] ^= (1ULL << (b % 64));
        }
    }

    // Core parity bits: p = inverse * syndrome.
    for (int r = 0; r < core_dim_; ++r) {
        std::uint64_t acc = 0;
        const std::uint64_t* row =
            core_inverse_.data() + static_cast<std::ptrdiff_t>(r) * core_words_;
        for (int w = 0; w < core_words_; ++w) acc ^= row[w] & syndrome[static_cast<std::size_t>(w)];
        codeword[static_cast<std::size_t>(k_bits_ + r)] =
            static_cast<std::uint8_t>(__builtin_popcountll(acc) & 1);
    }

    // Extension parity blocks: each remaining row has exactly one untouched
    // block (column 22 + i), solved by accumulating the known columns and
    // undoing that block's shift.
    std::vector<std::uint8_t> acc(static_cast<std::size_t>(zc_));
    for (int i = kCoreParityBlocks; i < kBaseRows; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        const int parity_col = kSystematicBlocks + i;
        int parity_shift = -1;
        for (int j = 0; j < kBaseCols; ++j) {
            const std::int16_t shift =
                base_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (shift < 0) continue;
            if (j == parity_col) {
                parity_shift = shift_mod(shift, zc_);
                continue;
            }
            const int s = shift_mod(shift, zc_);
            const std::uint8_t* block = codeword.data() + static_cast<std::ptrdiff_t>(j) * zc_;
            for (int z = 0; z < zc_; ++z) acc[static_cast<std::size_t>(z)] ^= block[(z + s) % zc_];
        }
        if (parity_shift < 0) {
            throw Error("base matrix lacks the extension parity diagonal");
        }
        std::uint8_t* out = codeword.data() + static_cast<std::ptrdiff_t>(parity_col) * zc_;
        // Row equation: rotate(parity, shift) = acc, so parity[z] = acc[(z + shift) mod Zc].
        for (int z = 0; z < zc_; ++z) {
            out[z] = acc[static_cast<std::size_t>((z + parity_shift) % zc_)];
        }
    }
    return codeword;
}

bool LdpcCode::parity_ok(const std::vector<std::uint8_t>& codeword) const {
    if (static_cast<int>(codeword.size()) != n_bits_) {
        throw LengthMismatch("codeword has wrong length");
    }
    const int checks = check_count();
    for (int c = 0; c < checks; ++c) {
        std::uint8_t parity = 0;
        for (std::int32_t e = check_offset_[static_cast<std::size_t>(c)];
             e < check_offset_[static_cast<std::size_t>(c) + 1]; ++e) {
            parity ^= codeword[static_cast<std::size_t>(edge_var_[static_cast<std::size_t>(e)])];
        }
        if (parity) return false;
    }
    return true;
}

LdpcDecoder::LdpcDecoder(const LdpcCode& code) : code_(&code) {
    channel_.resize(static_cast<std::size_t>(code.codeword_bits()));
    c2v_.resize(code.edge_variables().size());
    total_.resize(static_cast<std::size_t>(code.codeword_bits()));
    hard_.resize(static_cast<std::size_t>(code.codeword_bits()));
}

LdpcDecodeResult LdpcDecoder::decode(const std::vector<double>& channel_llrs,
                                     int max_iterations) {
    if (max_iterations < 1) throw ConfigError("iteration cap must be positive");
    const LdpcCode& code = *code_;
    if (static_cast<int>(channel_llrs.size()) != code.codeword_bits()) {
        throw LengthMismatch("decoder expects one LLR per codeword bit");
    }

    const std::size_t n = channel_.size();
    for (std::size_t v = 0; v < n; ++v) channel_[v] = static_cast<float>(channel_llrs[v]);
    std::fill(c2v_.begin(), c2v_.end(), 0.0f);

    const auto& edges = code.edge_variables();
    const auto& offsets = code.check_offsets();
    const int checks = code.check_count();

    LdpcDecodeResult result;

    for (int iter = 1; iter <= max_iterations; ++iter) {
        // Posterior totals from the previous check messages.
        for (std::size_t v = 0; v < n; ++v) total_[v] = channel_[v];
        for (std::size_t e = 0; e < edges.size(); ++e) {
            total_[static_cast<std::size_t>(edges[e])] += c2v_[e];
        }

        // Check-node update (normalized min-sum).
        for (int c = 0; c < checks; ++c) {
            const std::int32_t begin = offsets[static_cast<std::size_t>(c)];
            const std::int32_t end = offsets[static_cast<std::size_t>(c) + 1];
            float min1 = std::numeric_limits<float>::infinity();
            float min2 = std::numeric_limits<float>::infinity();
            std::int32_t argmin = begin;
            std::uint32_t sign_bits = 0;
            std::uint32_t parity = 0;
            for (std::int32_t e = begin; e < end; ++e) {
                const float m = total_[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)])] -
                                c2v_[static_cast<std::size_t>(e)];
                const std::uint32_t neg = m < 0.0f ? 1u : 0u;
                sign_bits |= neg << (e - begin);
                parity ^= neg;
                const float mag = std::fabs(m);
                if (mag < min1) {
                    min2 = min1;
                    min1 = mag;
                    argmin = e;
                } else if (mag < min2) {
                    min2 = mag;
                }
            }
            for (std::int32_t e = begin; e < end; ++e) {
                const float mag = (e == argmin) ? min2 : min1;
                const std::uint32_t neg = parity ^ ((sign_bits >> (e - begin)) & 1u);
                c2v_[static_cast<std::size_t>(e)] = (neg ? -kMinSumAlpha : kMinSumAlpha) * mag;
            }
        }

        // Refresh totals with the new messages, take hard decisions.
        for (std::size_t v = 0; v < n; ++v) total_[v] = channel_[v];
        for (std::size_t e = 0; e < edges.size(); ++e) {
            total_[static_cast<std::size_t>(edges[e])] += c2v_[e];
        }
        for (std::size_t v = 0; v < n; ++v) hard_[v] = total_[v] < 0.0f ? 1 : 0;

        result.iterations = iter;

        bool parity_holds = true;
        for (int c = 0; c < checks && parity_holds; ++c) {
            std::uint8_t parity = 0;
            for (std::int32_t e = offsets[static_cast<std::size_t>(c)];
                 e < offsets[static_cast<std::size_t>(c) + 1]; ++e) {
                parity ^= hard_[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)])];
            }
            parity_holds = parity == 0;
        }
        if (parity_holds) {
            bool informative = true;
            for (std::size_t v = 0; v < n && informative; ++v) informative = total_[v] != 0.0f;
            if (informative) {
                result.converged = true;
                break;
            }
        }
    }

    result.message.assign(hard_.begin(), hard_.begin() + code.message_bits());
    return result;
}

LdpcDecodeResult ldpc_decode(const LdpcCode& code, const std::vector<double>& channel_llrs,
                             int max_iterations) {
    LdpcDecoder decoder(code);
    return decoder.decode(channel_llrs, max_iterations);
}

double code_rate_value(CodeRate rate) {
    switch (rate) {
        case CodeRate::R1_3: return 1.0 / 3.0;
        case CodeRate::R1_2: return 1.0 / 2.0;
        case CodeRate::R2_3: return 2.0 / 3.0;
        case CodeRate::R5_6: return 5.0 / 6.0;
    }
    throw ConfigError("unknown code rate value");
}

std::string to_string(CodeRate rate) {
    switch (rate) {
        case CodeRate::R1_3: return "1/3";
        case CodeRate::R1_2: return "1/2";
        case CodeRate::R2_3: return "2/3";
        case CodeRate::R5_6: return "5/6";
    }
    throw ConfigError("unknown code rate value");
}

CodeRate code_rate_from_string(const std::string& token) {
    if (token == "1/3") return CodeRate::R1_3;
    if (token == "1/2") return CodeRate::R1_2;
    if (token == "2/3") return CodeRate::R2_3;
    if (token == "5/6") return CodeRate::R5_6;
    throw SchemaError("unknown code rate '" + token + "'");
}

namespace {

void rate_numerator_denominator(CodeRate rate, int& num, int& den) {
    switch (rate) {
        case CodeRate::R1_3: num = 1; den = 3; return;
        case CodeRate::R1_2: num = 1; den = 2; return;
        case CodeRate::R2_3: num = 2; den = 3; return;
        case CodeRate::R5_6: num = 5; den = 6; return;
    }
    throw ConfigError("unknown code rate value");
}

} // namespace

int transmitted_bits(int k_bits, CodeRate rate) {
    if (k_bits < 1) throw ConfigError("info block length must be positive");
    int num = 0;
    int den = 0;
    rate_numerator_denominator(rate, num, den);
    // E = 2 * round_half_up(K * den / (2 * num)), in exact integer math:
    // round_half_up(a / b) = floor((2a + b) / (2b)).
    const long long a = static_cast<long long>(k_bits) * den;
    const long long b = 2LL * num;
    const long long rounded = (2 * a + b) / (2 * b);
    return static_cast<int>(2 * rounded);
}

std::vector<std::uint8_t> rate_match(const LdpcCode& code,
                                     const std::vector<std::uint8_t>& codeword, CodeRate rate) {
    if (static_cast<int>(codeword.size()) != code.codeword_bits()) {
        throw LengthMismatch("codeword has wrong length for rate matching");
    }
    const int e_bits = transmitted_bits(code.message_bits(), rate);
    const int skip = 2 * code.zc();
    const int buffer = code.buffer_bits();
    std::vector<std::uint8_t> out(static_cast<std::size_t>(e_bits));
    for (int i = 0; i < e_bits; ++i) {
        out[static_cast<std::size_t>(i)] = codeword[static_cast<std::size_t>(skip + i % buffer)];
    }
    return out;
}

std::vector<double> rate_recover(const LdpcCode& code, const std::vector<double>& llrs,
                                 CodeRate rate) {
    const int e_bits = transmitted_bits(code.message_bits(), rate);
    if (static_cast<int>(llrs.size()) != e_bits) {
        throw LengthMismatch("rate recovery expects " + std::to_string(e_bits) + " LLRs, got " +
                             std::to_string(llrs.size()));
    }
    const int skip = 2 * code.zc();
    const int buffer = code.buffer_bits();
    std::vector<double> out(static_cast<std::size_t>(code.codeword_bits()), 0.0);
    for (int i = 0; i < e_bits; ++i) {
        out[static_cast<std::size_t>(skip + i % buffer)] += llrs[static_cast<std::size_t>(i)];
    }
    return out;
}

} // namespace semcom
