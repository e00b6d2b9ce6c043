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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semcom/codec.hpp"
#include "semcom/ldpc.hpp"
#include "semcom/link.hpp"
#include "semcom/scene.hpp"
#include "semcom/task_select.hpp"

namespace semcom {

/// Narrowband resource grant: the symbol budget the link may spend.
struct GrantConfig {
    int n_rb = 2;                ///< Resource blocks.
    int subcarriers_per_rb = 12;
    int symbols_per_slot = 14;
    int slots_per_second = 1000;
};

/// Symbols per second offered by the grant (defaults: 336000). Throws
/// InvalidGrant when any factor is non-positive.
double symbol_rate(const GrantConfig& grant);

/// Information goodput in bits/second: symbol rate x 2 bits/symbol x code
/// rate x (1 - BLER). Throws InvalidGrant for BLER outside [0, 1].
double link_goodput_bits_per_second(const GrantConfig& grant, CodeRate rate, double bler);

/// Completed images per second given the per-image padded payload size.
double throughput_images_per_second(double goodput_bits_per_second,
                                    std::uint64_t padded_payload_bits);

/// Info-block class for a semantic kind: the dense kinds (feature_map,
/// compressed_image) ride the long 8448-bit blocks, everything else the
/// short 1056-bit blocks.
int kind_info_bits(SemanticKind kind);

/// Measured BLER per (rate, snr_db) operating point.
struct BlerTable {
    std::map<std::pair<CodeRate, double>, double> entries;

    double at(CodeRate rate, double snr_db) const;
};

/// Highest rate whose BLER at snr_db meets `target_bler`; falls back to the
/// most robust rate (1/3) when none qualifies. Throws MissingTableEntry when
/// the table lacks a required cell and ConfigError for a target outside
/// (0, 1].
CodeRate adapt_rate(const BlerTable& table, double snr_db, double target_bler);

/// One sweep configuration: which kinds, which SNR grid, and how the link
/// behaves.
struct SweepRequest {
    std::vector<KindRequest> kinds;
    std::vector<double> snrs_db;
    std::optional<CodeRate> fixed_rate;  ///< Empty = adapt per SNR.
    double target_bler = 0.01;
    std::uint64_t blocks_per_point = 200;  ///< Monte-Carlo blocks per (K, rate, snr).
    int max_iterations = 20;
    std::uint64_t seed = 0;
    bool ideal_link = false;  ///< Skip Monte-Carlo; BLER = 0 everywhere.
    GrantConfig grant;
    CodecConfig codec;
};

/// One output row of the throughput sweep.
struct SweepRow {
    std::string kind;
    double snr_db = 0.0;
    CodeRate rate = CodeRate::R1_3;
    double bler = 0.0;
    double avg_payload_bits = 0.0;  ///< Mean padded payload bits per image.
    double images_per_second = 0.0;
};

/// Cross product of kinds x SNRs: encodes each corpus scene per kind,
/// averages the padded payload size, estimates (or looks up) BLER at the
/// chosen rate, and converts goodput into images per second.
/// `filtered_graphs` runs parallel to `corpus` and may be empty when no
/// requested kind needs the filtered graph.
std::vector<SweepRow> sweep_throughput(const std::vector<SceneAnnotation>& corpus,
                                       const std::vector<SceneGraph>& filtered_graphs,
                                       const SweepRequest& request);

/// Serializes sweep rows as CSV: a `# seed=N` echo line, the fixed header
/// `kind,snr_db,code_rate,bler,avg_payload_bits,images_per_second`, then one
/// row per entry. Byte-deterministic.
std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t seed);

/// Stage timings of the end-to-end pipeline, in milliseconds.
struct LatencyProfile {
    double tau_se_ms = 0.0;    ///< Semantic extraction.
    double tau_ce_ms = 0.0;    ///< Channel encoding.
    double tau_tx_ms = 0.0;    ///< Over-the-air transmission.
    double tau_cd_ms = 0.0;    ///< Channel decoding.
    double tau_task_ms = 0.0;  ///< Downstream task execution.
};

enum class PipelineMode {
    Sequential,  ///< Stages run back-to-back; throughput = 1000 / sum.
    Pipelined,   ///< Stages overlap; throughput = 1000 / max stage.
};

std::string to_string(PipelineMode mode);
PipelineMode pipeline_mode_from_string(const std::string& token);

/// Parsed profile text before resolution: stage values may be given
/// directly, and tau_tx may instead be derived from a payload file plus a
/// code rate.
struct LatencyProfileSpec {
    std::optional<double> tau_se_ms;
    std::optional<double> tau_ce_ms;
    std::optional<double> tau_tx_ms;
    std::optional<double> tau_cd_ms;
    std::optional<double> tau_task_ms;
    std::optional<std::string> payload_path;  ///< SPAY file for tau_tx derivation.
    std::optional<CodeRate> rate;             ///< Rate for tau_tx derivation.
};

/// Parses `key=value` pairs separated by commas and/or newlines ('#' starts
/// a comment). Keys: tau_se, tau_ce, tau_tx, tau_cd, tau_task (ms), payload
/// (path), rate. Unknown keys throw SchemaError.
LatencyProfileSpec parse_latency_profile(const std::string& text);

/// Transmission time for a payload: blocks x E bits -> QPSK symbols at the
/// grant's symbol rate.
double transmission_latency_ms(std::uint64_t payload_bits, int k_bits, CodeRate rate,
                               const GrantConfig& grant);

/// Fills every stage of the profile. tau_tx falls back to the payload/rate
/// derivation when not given directly; missing stages throw ConfigError.
LatencyProfile resolve_latency_profile(const LatencyProfileSpec& spec, const GrantConfig& grant);

double total_latency_ms(const LatencyProfile& profile);

/// End-to-end task completions per second for the profile under the given
/// execution mode. Throws ConfigError when the controlling duration is zero.
double tasks_per_second(const LatencyProfile& profile, PipelineMode mode);

} // namespace semcom
