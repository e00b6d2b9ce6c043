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

#include "semcom/perf.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "semcom/errors.hpp"
#include "semcom/format.hpp"
#include "semcom/rng.hpp"

namespace semcom {

double symbol_rate(const GrantConfig& grant) {
    if (grant.n_rb <= 0 || grant.subcarriers_per_rb <= 0 || grant.symbols_per_slot <= 0 ||
        grant.slots_per_second <= 0) {
        throw InvalidGrant("every grant factor must be positive");
    }
    return static_cast<double>(grant.n_rb) * grant.subcarriers_per_rb * grant.symbols_per_slot *
           grant.slots_per_second;
}

double link_goodput_bits_per_second(const GrantConfig& grant, CodeRate rate, double bler) {
    if (!(bler >= 0.0 && bler <= 1.0)) {
        throw InvalidGrant("block error rate must lie in [0, 1]");
    }
    return symbol_rate(grant) * 2.0 * code_rate_value(rate) * (1.0 - bler);
}

double throughput_images_per_second(double goodput_bits_per_second,
                                    std::uint64_t padded_payload_bits) {
    if (padded_payload_bits == 0) {
        throw ConfigError("throughput needs a positive payload size");
    }
    return goodput_bits_per_second / static_cast<double>(padded_payload_bits);
}

int kind_info_bits(SemanticKind kind) {
    switch (kind) {
        case SemanticKind::FeatureMap:
        case SemanticKind::CompressedImage:
            return 8448;
        default:
            return 1056;
    }
}

double BlerTable::at(CodeRate rate, double snr_db) const {
    auto it = entries.find({rate, snr_db});
    if (it == entries.end()) {
        throw MissingTableEntry("no BLER entry for rate " + to_string(rate) + " at " +
                                format_double(snr_db) + " dB");
    }
    return it->second;
}

CodeRate adapt_rate(const BlerTable& table, double snr_db, double target_bler) {
    if (!(target_bler > 0.0 && target_bler <= 1.0)) {
        throw ConfigError("target block error rate must lie in (0, 1]");
    }
    // Highest rate first; fall back to the most robust one.
    const CodeRate descending[] = {CodeRate::R5_6, CodeRate::R2_3, CodeRate::R1_2, CodeRate::R1_3};
    for (CodeRate rate : descending) {
        if (table.at(rate, snr_db) <= target_bler) return rate;
    }
    return CodeRate::R1_3;
}

namespace {

/// Lazily filled Monte-Carlo BLER cache keyed by (block class, rate, SNR
/// grid index). Each cell runs on a stream derived from (seed, cell tag) so
/// the table is reproducible regardless of evaluation order.
class BlerCache {
public:
    BlerCache(const SweepRequest& request) : request_(request) {}

    double at(int k_bits, CodeRate rate, std::size_t snr_index) {
        if (request_.ideal_link) return 0.0;
        const Key key{k_bits, rate, snr_index};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;

        LinkConfig config;
        config.info_block_bits = k_bits;
        config.rate = rate;
        config.snr_db = request_.snrs_db[snr_index];
        config.max_iterations = request_.max_iterations;
        const std::uint64_t tag = static_cast<std::uint64_t>(snr_index) * 16 +
                                  static_cast<std::uint64_t>(rate) * 2 +
                                  (k_bits == 8448 ? 1 : 0);
        config.seed = mix_seed(request_.seed, tag);

        const LinkResult result = simulate_bler(config, request_.blocks_per_point);
        cache_.emplace(key, result.bler);
        return result.bler;
    }

private:
    using Key = std::tuple<int, CodeRate, std::size_t>;
    const SweepRequest& request_;
    std::map<Key, double> cache_;
};

} // namespace

std::vector<SweepRow> sweep_throughput(const std::vector<SceneAnnotation>& corpus,
                                       const std::vector<SceneGraph>& filtered_graphs,
                                       const SweepRequest& request) {
    if (corpus.empty()) throw ConfigError("sweep needs at least one scene");
    if (request.kinds.empty()) throw ConfigError("sweep needs at least one kind");
    if (request.snrs_db.empty()) throw ConfigError("sweep needs at least one SNR point");
    if (!filtered_graphs.empty() && filtered_graphs.size() != corpus.size()) {
        throw LengthMismatch("filtered graphs must parallel the corpus");
    }

    BlerCache cache(request);
    std::vector<SweepRow> rows;
    rows.reserve(request.kinds.size() * request.snrs_db.size());

    for (const auto& kind_request : request.kinds) {
        const int k_bits = kind_info_bits(kind_request.kind);
        const bool needs_filtered =
            kind_request.filtered || kind_request.kind == SemanticKind::SceneGraphFiltered;
        if (needs_filtered && filtered_graphs.empty()) {
            throw MissingFilteredGraph("kind '" + to_string(kind_request) +
                                       "' needs filtered graphs for the corpus");
        }

        double sum_padded = 0.0;
        for (std::size_t s = 0; s < corpus.size(); ++s) {
            const SceneGraph* filtered =
                filtered_graphs.empty() ? nullptr : &filtered_graphs[s];
            const SemanticPayload payload =
                assemble_payload(corpus[s], {kind_request}, filtered, request.codec);
            sum_padded += static_cast<double>(padded_bits(payload.bit_count, k_bits));
        }
        const double avg_padded = sum_padded / static_cast<double>(corpus.size());

        for (std::size_t snr_index = 0; snr_index < request.snrs_db.size(); ++snr_index) {
            CodeRate rate;
            if (request.fixed_rate.has_value()) {
                rate = request.fixed_rate.value();
            } else {
                BlerTable table;
                for (CodeRate r : kAllCodeRates) {
                    table.entries[{r, request.snrs_db[snr_index]}] =
                        cache.at(k_bits, r, snr_index);
                }
                rate = adapt_rate(table, request.snrs_db[snr_index], request.target_bler);
            }
            const double bler = cache.at(k_bits, rate, snr_index);
            const double goodput = link_goodput_bits_per_second(request.grant, rate, bler);

            SweepRow row;
            row.kind = to_string(kind_request);
            row.snr_db = request.snrs_db[snr_index];
            row.rate = rate;
            row.bler = bler;
            row.avg_payload_bits = avg_padded;
            row.images_per_second = goodput / avg_padded;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t seed) {
    std::string out = "# seed=" + std::to_string(seed) + "\n";
    out += "kind,snr_db,code_rate,bler,avg_payload_bits,images_per_second\n";
    for (const auto& row : rows) {
        out += row.kind;
        out += ',';
        out += format_double(row.snr_db);
        out += ',';
        out += to_string(row.rate);
        out += ',';
        out += format_double(row.bler);
        out += ',';
        out += format_double(row.avg_payload_bits);
        out += ',';
        out += format_double(row.images_per_second);
        out += '\n';
    }
    return out;
}

std::string to_string(PipelineMode mode) {
    switch (mode) {
        case PipelineMode::Sequential: return "sequential";
        case PipelineMode::Pipelined: return "pipelined";
    }
    throw ConfigError("unknown pipeline mode value");
}

PipelineMode pipeline_mode_from_string(const std::string& token) {
    if (token == "sequential") return PipelineMode::Sequential;
    if (token == "pipelined") return PipelineMode::Pipelined;
    throw SchemaError("unknown pipeline mode '" + token + "'");
}

namespace {

double parse_profile_double(const std::string& key, const std::string& value) {
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw SchemaError("profile value for '" + key + "' is not a number: '" + value + "'");
    }
    if (parsed < 0.0) throw SchemaError("profile value for '" + key + "' must be non-negative");
    return parsed;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

LatencyProfileSpec parse_latency_profile(const std::string& text) {
    LatencyProfileSpec spec;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            field = trim(field);
            if (field.empty()) continue;
            const std::size_t eq = field.find('=');
            if (eq == std::string::npos) {
                throw SchemaError("profile entry '" + field + "' is not key=value");
            }
            const std::string key = trim(field.substr(0, eq));
            const std::string value = trim(field.substr(eq + 1));
            if (key == "tau_se") {
                spec.tau_se_ms = parse_profile_double(key, value);
            } else if (key == "tau_ce") {
                spec.tau_ce_ms = parse_profile_double(key, value);
            } else if (key == "tau_tx") {
                spec.tau_tx_ms = parse_profile_double(key, value);
            } else if (key == "tau_cd") {
                spec.tau_cd_ms = parse_profile_double(key, value);
            } else if (key == "tau_task") {
                spec.tau_task_ms = parse_profile_double(key, value);
            } else if (key == "payload") {
                spec.payload_path = value;
            } else if (key == "rate") {
                spec.rate = code_rate_from_string(value);
            } else {
                throw SchemaError("unknown profile key '" + key + "'");
            }
        }
    }
    return spec;
}

double transmission_latency_ms(std::uint64_t payload_bits, int k_bits, CodeRate rate,
                               const GrantConfig& grant) {
    const std::uint64_t blocks = block_count(payload_bits, k_bits);
    const std::uint64_t tx_bits =
        blocks * static_cast<std::uint64_t>(transmitted_bits(k_bits, rate));
    const double symbols = static_cast<double>(tx_bits) / 2.0;
    return 1000.0 * symbols / symbol_rate(grant);
}

LatencyProfile resolve_latency_profile(const LatencyProfileSpec& spec, const GrantConfig& grant) {
    auto require = [](const std::optional<double>& value, const char* key) {
        if (!value.has_value()) {
            throw ConfigError(std::string("latency profile is missing '") + key + "'");
        }
        return value.value();
    };

    LatencyProfile profile;
    profile.tau_se_ms = require(spec.tau_se_ms, "tau_se");
    profile.tau_ce_ms = require(spec.tau_ce_ms, "tau_ce");
    profile.tau_cd_ms = require(spec.tau_cd_ms, "tau_cd");
    profile.tau_task_ms = require(spec.tau_task_ms, "tau_task");

    if (spec.tau_tx_ms.has_value()) {
        profile.tau_tx_ms = spec.tau_tx_ms.value();
    } else {
        if (!spec.payload_path.has_value() || !spec.rate.has_value()) {
            throw ConfigError(
                "latency profile needs tau_tx, or payload= and rate= to derive it");
        }
        const SemanticPayload payload = load_payload_file(spec.payload_path.value());
        profile.tau_tx_ms = transmission_latency_ms(
            payload.bit_count, kind_info_bits(payload.kind), spec.rate.value(), grant);
    }
    return profile;
}

double total_latency_ms(const LatencyProfile& profile) {
    return profile.tau_se_ms + profile.tau_ce_ms + profile.tau_tx_ms + profile.tau_cd_ms +
           profile.tau_task_ms;
}

double tasks_per_second(const LatencyProfile& profile, PipelineMode mode) {
    double controlling = 0.0;
    switch (mode) {
        case PipelineMode::Sequential:
            controlling = total_latency_ms(profile);
            break;
        case PipelineMode::Pipelined:
            controlling = std::max({profile.tau_se_ms, profile.tau_ce_ms, profile.tau_tx_ms,
                                    profile.tau_cd_ms, profile.tau_task_ms});
            break;
    }
    if (!(controlling > 0.0)) {
        throw ConfigError("latency profile has no positive stage duration");
    }
    return 1000.0 / controlling;
}

} // namespace semcom
