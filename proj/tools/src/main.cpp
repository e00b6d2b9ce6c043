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

/// semcom: batch front end for scene-graph filtering, task-adaptive payload
/// assembly, and 5G-NR link/throughput/latency simulation.
///
/// Exit codes: 0 success, 1 runtime error (reported as "error: ..." on
/// stderr), 2 usage error. Every randomized subcommand takes --seed
/// (default 0) and echoes it in its output artifact.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semcom/codec.hpp"
#include "semcom/embedding.hpp"
#include "semcom/errors.hpp"
#include "semcom/filter.hpp"
#include "semcom/format.hpp"
#include "semcom/ingest.hpp"
#include "semcom/ldpc.hpp"
#include "semcom/link.hpp"
#include "semcom/perf.hpp"
#include "semcom/rng.hpp"
#include "semcom/scene.hpp"
#include "semcom/task_select.hpp"

namespace {

using nlohmann::json;

/// Flag values shared by every subcommand that runs the filtering pipeline.
struct PipelineFlags {
    std::string stats_path;
    std::string embedder = "hash";
    std::string embeddings_file;
    std::string endpoint;
    int dim = 384;
    double tau_f = 0.8;
    double tau_r = 0.8;
    std::uint64_t seed = 0;
};

std::string trim_token(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> tokens;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        token = trim_token(token);
        if (!token.empty()) tokens.push_back(token);
    }
    return tokens;
}

std::vector<semcom::KindRequest> parse_kinds(const std::string& csv) {
    std::vector<semcom::KindRequest> kinds;
    for (const std::string& token : split_csv(csv)) {
        kinds.push_back(semcom::kind_request_from_string(token));
    }
    if (kinds.empty()) throw semcom::SchemaError("--kinds needs at least one kind");
    return kinds;
}

std::vector<double> parse_snrs(const std::string& csv) {
    std::vector<double> snrs;
    for (const std::string& token : split_csv(csv)) {
        std::size_t consumed = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &consumed);
        } catch (const std::exception&) {
            throw semcom::SchemaError("SNR '" + token + "' is not a number");
        }
        if (consumed != token.size()) {
            throw semcom::SchemaError("SNR '" + token + "' is not a number");
        }
        snrs.push_back(value);
    }
    if (snrs.empty()) throw semcom::SchemaError("--snrs needs at least one value");
    return snrs;
}

std::optional<semcom::CodeRate> parse_rate_flag(const std::string& token) {
    if (token == "auto") return std::nullopt;
    return semcom::code_rate_from_string(token);
}

semcom::EmbedderConfig embedder_config(const PipelineFlags& flags) {
    semcom::EmbedderConfig config;
    config.backend = semcom::embedder_backend_from_string(flags.embedder);
    config.dim = flags.dim;
    config.seed = flags.seed;
    config.embeddings_path = flags.embeddings_file;
    config.endpoint_url = flags.endpoint;
    return config;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw semcom::IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw semcom::IoError("failed writing '" + path + "'");
}

/// Writes to `path`, or to stdout when no path was given.
void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
    } else {
        write_text_file(path, content);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw semcom::IoError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Attaches the filtering-pipeline flags to a subcommand.
void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags, bool stats_required) {
    auto* stats = cmd->add_option("--stats", flags.stats_path,
                                  "Relation statistics file produced by `ingest`")
                      ->check(CLI::ExistingFile);
    if (stats_required) stats->required();
    cmd->add_option("--embedder", flags.embedder, "Sentence embedding backend")
        ->check(CLI::IsMember({"hash", "file", "remote"}))
        ->capture_default_str();
    cmd->add_option("--embeddings-file", flags.embeddings_file,
                    "Precomputed embeddings (file backend)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--endpoint", flags.endpoint,
                    "Embedding service URL (remote backend; falls back to $SEMCOM_EMBED_URL)");
    cmd->add_option("--dim", flags.dim, "Embedding dimension")->capture_default_str();
    cmd->add_option("--tau-f", flags.tau_f, "Predictable-relation threshold")
        ->capture_default_str();
    cmd->add_option("--tau-r", flags.tau_r, "Redundancy residual threshold")
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "RNG seed (echoed in outputs)")->capture_default_str();
}

/// Runs both filtering stages on one scene with the configured embedder.
semcom::FilterResult run_filter(const semcom::SceneAnnotation& scene,
                                const semcom::RelationStats& stats,
                                const PipelineFlags& flags) {
    auto embedder = semcom::make_embedder(embedder_config(flags));
    semcom::FilterConfig config;
    config.tau_f = flags.tau_f;
    config.tau_r = flags.tau_r;
    return semcom::filter_scene_graph(scene.graph, stats, *embedder, config);
}

// ---------------------------------------------------------------------------
// Subcommand state + implementations
// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string corpus;
    std::string out;
    std::uint64_t seed = 0;
};

int run_ingest(const IngestArgs& args) {
    semcom::VocabularySet vocabs;
    const auto corpus = semcom::load_corpus(args.corpus, vocabs);
    const semcom::RelationStats stats = semcom::build_relation_stats(corpus);
    semcom::save_stats_file(stats, args.out);
    std::cout << "ingested " << corpus.size() << " scenes: " << stats.triple_counts.size()
              << " triple records, " << stats.pair_counts.size() << " pair records -> "
              << args.out << " (seed=" << args.seed << ")\n";
    return 0;
}

struct FilterArgs {
    std::string scene;
    std::string report;
    std::string out;
    PipelineFlags pipeline;
};

int run_filter_cmd(const FilterArgs& args) {
    semcom::VocabularySet vocabs;
    const semcom::SceneAnnotation scene = semcom::load_scene_file(args.scene, vocabs);
    const semcom::RelationStats stats = semcom::load_stats_file(args.pipeline.stats_path);
    const semcom::FilterResult result = run_filter(scene, stats, args.pipeline);

    semcom::FilterConfig config;
    config.tau_f = args.pipeline.tau_f;
    config.tau_r = args.pipeline.tau_r;
    emit(args.report, semcom::filter_report_json(result.report, config, args.pipeline.seed));

    if (!args.out.empty()) {
        semcom::SceneAnnotation filtered = scene;
        filtered.graph = result.graph;
        write_text_file(args.out, semcom::scene_json(filtered));
    }
    return 0;
}

struct SelectArgs {
    std::string scene;
    std::string task;
    std::string fidelity;
    std::string policy;
    std::string kinds_csv;  // encode subcommand only
    std::string out;
    std::string report;
    PipelineFlags pipeline;
    bool is_encode = false;
};

int run_select(const SelectArgs& args) {
    semcom::VocabularySet vocabs;
    const semcom::SceneAnnotation scene = semcom::load_scene_file(args.scene, vocabs);

    std::vector<semcom::KindRequest> kinds;
    if (args.is_encode) {
        kinds = parse_kinds(args.kinds_csv);
    } else {
        semcom::SelectionPolicy policy;
        const semcom::SelectionPolicy* override_policy = nullptr;
        if (!args.policy.empty()) {
            policy = semcom::load_policy_file(args.policy);
            override_policy = &policy;
        }
        kinds = semcom::required_semantics(semcom::task_kind_from_string(args.task),
                                           semcom::fidelity_level_from_string(args.fidelity),
                                           override_policy);
    }

    bool needs_filtered = false;
    for (const auto& request : kinds) {
        needs_filtered = needs_filtered || request.filtered ||
                         request.kind == semcom::SemanticKind::SceneGraphFiltered;
    }

    std::optional<semcom::FilterResult> filtered;
    if (needs_filtered) {
        if (args.pipeline.stats_path.empty()) {
            throw semcom::ConfigError(
                "the requested kinds include a filtered scene graph; pass --stats");
        }
        const semcom::RelationStats stats = semcom::load_stats_file(args.pipeline.stats_path);
        filtered = run_filter(scene, stats, args.pipeline);
    }

    semcom::CodecConfig codec;
    codec.feature_seed = args.pipeline.seed;
    const semcom::SemanticPayload payload = semcom::assemble_payload(
        scene, kinds, filtered ? &filtered->graph : nullptr, codec);
    semcom::save_payload_file(payload, args.out);

    const semcom::PayloadMetrics metrics =
        semcom::payload_metrics(payload.bit_count, payload.source_width, payload.source_height);

    json doc;
    doc["seed"] = args.pipeline.seed;
    if (!args.is_encode) {
        doc["task"] = args.task;
        doc["fidelity"] = args.fidelity;
    }
    doc["kinds"] = json::array();
    for (const auto& request : kinds) doc["kinds"].push_back(semcom::to_string(request));
    doc["bit_count"] = payload.bit_count;
    doc["bits_per_pixel"] = metrics.bits_per_pixel;
    doc["compression_rate"] = metrics.compression_rate;
    if (filtered) doc["retention_fraction"] = filtered->report.retention_fraction;
    doc["payload_file"] = args.out;
    const std::string report = doc.dump(2) + "\n";
    if (args.report.empty()) {
        std::cout << report;
    } else {
        write_text_file(args.report, report);
    }
    return 0;
}

struct SimulateArgs {
    std::string snrs_csv;
    std::string rate = "auto";
    std::string kinds_csv;
    std::uint64_t blocks = 200;
    std::uint64_t seed = 0;
    bool ideal_link = false;
    std::string out;
};

/// Info-block class implied by a kind list: dense kinds ride 8448-bit
/// blocks, text kinds 1056-bit ones. Mixing both in one simulation grid is
/// ambiguous and rejected.
int block_class_from_kinds(const std::string& kinds_csv) {
    if (kinds_csv.empty()) return 1056;
    int k_bits = 0;
    for (const auto& request : parse_kinds(kinds_csv)) {
        const int k = semcom::kind_info_bits(request.kind);
        if (k_bits != 0 && k != k_bits) {
            throw semcom::ConfigError(
                "--kinds mixes 1056- and 8448-bit block classes; simulate one class at a time");
        }
        k_bits = k;
    }
    return k_bits;
}

int run_simulate(const SimulateArgs& args) {
    const std::vector<double> snrs = parse_snrs(args.snrs_csv);
    const int k_bits = block_class_from_kinds(args.kinds_csv);
    const std::optional<semcom::CodeRate> fixed = parse_rate_flag(args.rate);
    std::vector<semcom::CodeRate> rates;
    if (fixed.has_value()) {
        rates.push_back(fixed.value());
    } else {
        rates.assign(semcom::kAllCodeRates.begin(), semcom::kAllCodeRates.end());
    }

    std::string csv = "snr_db,code_rate,blocks,block_errors,bler,seed\n";
    for (std::size_t snr_index = 0; snr_index < snrs.size(); ++snr_index) {
        for (const semcom::CodeRate rate : rates) {
            std::uint64_t errors = 0;
            double bler = 0.0;
            if (!args.ideal_link) {
                semcom::LinkConfig config;
                config.info_block_bits = k_bits;
                config.rate = rate;
                config.snr_db = snrs[snr_index];
                const std::uint64_t tag = static_cast<std::uint64_t>(snr_index) * 16 +
                                          static_cast<std::uint64_t>(rate) * 2 +
                                          (k_bits == 8448 ? 1 : 0);
                config.seed = semcom::mix_seed(args.seed, tag);
                const semcom::LinkResult result = semcom::simulate_bler(config, args.blocks);
                errors = result.block_errors;
                bler = result.bler;
            }
            csv += semcom::format_double(snrs[snr_index]);
            csv += ',';
            csv += semcom::to_string(rate);
            csv += ',';
            csv += std::to_string(args.blocks);
            csv += ',';
            csv += std::to_string(errors);
            csv += ',';
            csv += semcom::format_double(bler);
            csv += ',';
            csv += std::to_string(args.seed);
            csv += '\n';
        }
    }
    emit(args.out, csv);
    return 0;
}

struct SweepArgs {
    std::string corpus;
    std::string kinds_csv;
    std::string snrs_csv;
    std::string rate = "auto";
    double target_bler = 0.01;
    std::uint64_t blocks = 200;
    bool ideal_link = false;
    int grant_rb = 2;
    std::string out;
    PipelineFlags pipeline;
};

int run_sweep(const SweepArgs& args) {
    semcom::VocabularySet vocabs;
    const auto corpus = semcom::load_corpus(args.corpus, vocabs);

    semcom::SweepRequest request;
    request.kinds = parse_kinds(args.kinds_csv);
    request.snrs_db = parse_snrs(args.snrs_csv);
    request.fixed_rate = parse_rate_flag(args.rate);
    request.target_bler = args.target_bler;
    request.blocks_per_point = args.blocks;
    request.seed = args.pipeline.seed;
    request.ideal_link = args.ideal_link;
    request.grant.n_rb = args.grant_rb;
    request.codec.feature_seed = args.pipeline.seed;

    bool needs_filtered = false;
    for (const auto& kind : request.kinds) {
        needs_filtered = needs_filtered || kind.filtered ||
                         kind.kind == semcom::SemanticKind::SceneGraphFiltered;
    }

    std::vector<semcom::SceneGraph> filtered_graphs;
    if (needs_filtered) {
        // Statistics default to the sweep corpus itself when no file is given.
        const semcom::RelationStats stats = args.pipeline.stats_path.empty()
                                                ? semcom::build_relation_stats(corpus)
                                                : semcom::load_stats_file(args.pipeline.stats_path);
        auto embedder = semcom::make_embedder(embedder_config(args.pipeline));
        semcom::FilterConfig config;
        config.tau_f = args.pipeline.tau_f;
        config.tau_r = args.pipeline.tau_r;
        filtered_graphs.reserve(corpus.size());
        for (const auto& scene : corpus) {
            filtered_graphs.push_back(
                semcom::filter_scene_graph(scene.graph, stats, *embedder, config).graph);
        }
    }

    const auto rows = semcom::sweep_throughput(corpus, filtered_graphs, request);
    emit(args.out, semcom::sweep_csv(rows, request.seed));
    return 0;
}

struct LatencyArgs {
    std::string profile;
    std::string mode = "sequential";
    std::string rate = "auto";
    int grant_rb = 2;
    std::string report;
    std::uint64_t seed = 0;
};

int run_latency(const LatencyArgs& args) {
    semcom::LatencyProfileSpec spec = semcom::parse_latency_profile(read_text_file(args.profile));
    const std::optional<semcom::CodeRate> rate = parse_rate_flag(args.rate);
    if (rate.has_value()) spec.rate = rate;

    semcom::GrantConfig grant;
    grant.n_rb = args.grant_rb;
    const semcom::LatencyProfile profile = semcom::resolve_latency_profile(spec, grant);
    const semcom::PipelineMode mode = semcom::pipeline_mode_from_string(args.mode);

    json doc;
    doc["seed"] = args.seed;
    doc["mode"] = args.mode;
    doc["tau_se_ms"] = profile.tau_se_ms;
    doc["tau_ce_ms"] = profile.tau_ce_ms;
    doc["tau_tx_ms"] = profile.tau_tx_ms;
    doc["tau_cd_ms"] = profile.tau_cd_ms;
    doc["tau_task_ms"] = profile.tau_task_ms;
    doc["total_latency_ms"] = semcom::total_latency_ms(profile);
    doc["tasks_per_second"] = semcom::tasks_per_second(profile, mode);
    emit(args.report, doc.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"task-adaptive semantic communication toolkit"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Build relation statistics from a scene corpus");
    ingest->add_option("--corpus", ingest_args.corpus, "Directory of scene JSON files")
        ->required()
        ->check(CLI::ExistingDirectory);
    ingest->add_option("--out", ingest_args.out, "Statistics output file")->required();
    ingest->add_option("--seed", ingest_args.seed, "RNG seed (echoed)")->capture_default_str();

    FilterArgs filter_args;
    auto* filter = app.add_subcommand("filter", "Filter one scene graph (both stages)");
    filter->add_option("--scene", filter_args.scene, "Scene JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    add_pipeline_flags(filter, filter_args.pipeline, /*stats_required=*/true);
    filter->add_option("--report", filter_args.report, "Filter report JSON output (default stdout)");
    filter->add_option("--out", filter_args.out, "Write the filtered scene as JSON");

    SelectArgs select_args;
    auto* select = app.add_subcommand("select", "Assemble the payload for a task/fidelity pair");
    select->add_option("--scene", select_args.scene, "Scene JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    select->add_option("--task", select_args.task, "Downstream task")
        ->required()
        ->check(CLI::IsMember(
            {"classification", "localization", "detection", "retrieval", "generation"}));
    select->add_option("--fidelity", select_args.fidelity, "Fidelity level")
        ->required()
        ->check(CLI::IsMember({"minimal", "standard", "rich", "full"}));
    select->add_option("--policy", select_args.policy, "Selection policy override file")
        ->check(CLI::ExistingFile);
    select->add_option("--out", select_args.out, "Payload output file")->required();
    select->add_option("--report", select_args.report, "Report JSON output (default stdout)");
    add_pipeline_flags(select, select_args.pipeline, /*stats_required=*/false);

    SelectArgs encode_args;
    encode_args.is_encode = true;
    auto* encode = app.add_subcommand("encode", "Encode an explicit list of semantic kinds");
    encode->add_option("--scene", encode_args.scene, "Scene JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    encode->add_option("--kinds", encode_args.kinds_csv,
                       "Comma list: objects,layouts,objects_layouts,segmap,sg,sg_filtered,"
                       "sg_layouts,sg_layouts_filtered,feature_map,compressed_image")
        ->required();
    encode->add_option("--out", encode_args.out, "Payload output file")->required();
    encode->add_option("--report", encode_args.report, "Report JSON output (default stdout)");
    add_pipeline_flags(encode, encode_args.pipeline, /*stats_required=*/false);

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BLER over an SNR/rate grid");
    simulate->add_option("--snrs", simulate_args.snrs_csv, "Comma list of Es/N0 points in dB")
        ->required();
    simulate->add_option("--rate", simulate_args.rate, "Code rate, or 'auto' for all four")
        ->check(CLI::IsMember({"auto", "1/3", "1/2", "2/3", "5/6"}))
        ->capture_default_str();
    simulate->add_option("--kinds", simulate_args.kinds_csv,
                         "Kinds whose block class to simulate (default 1056-bit class)");
    simulate->add_option("--blocks", simulate_args.blocks, "Blocks per grid point")
        ->capture_default_str();
    simulate->add_option("--seed", simulate_args.seed, "RNG seed (echoed per row)")
        ->capture_default_str();
    simulate->add_flag("--ideal-link", simulate_args.ideal_link, "Report BLER 0 without simulating");
    simulate->add_option("--out", simulate_args.out, "CSV output file (default stdout)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Throughput sweep over kinds and SNRs");
    sweep->add_option("--corpus", sweep_args.corpus, "Directory of scene JSON files")
        ->required()
        ->check(CLI::ExistingDirectory);
    sweep->add_option("--kinds", sweep_args.kinds_csv, "Comma list of semantic kinds")->required();
    sweep->add_option("--snrs", sweep_args.snrs_csv, "Comma list of Es/N0 points in dB")
        ->required();
    sweep->add_option("--rate", sweep_args.rate, "Fixed code rate, or 'auto' to adapt per SNR")
        ->check(CLI::IsMember({"auto", "1/3", "1/2", "2/3", "5/6"}))
        ->capture_default_str();
    sweep->add_option("--target-bler", sweep_args.target_bler, "Adaptation target for 'auto'")
        ->capture_default_str();
    sweep->add_option("--blocks", sweep_args.blocks, "Monte-Carlo blocks per (rate, SNR) cell")
        ->capture_default_str();
    sweep->add_flag("--ideal-link", sweep_args.ideal_link, "Assume BLER 0 everywhere");
    sweep->add_option("--grant-rb", sweep_args.grant_rb, "Resource blocks in the grant")
        ->capture_default_str();
    sweep->add_option("--out", sweep_args.out, "CSV output file (default stdout)");
    add_pipeline_flags(sweep, sweep_args.pipeline, /*stats_required=*/false);

    LatencyArgs latency_args;
    auto* latency = app.add_subcommand("latency", "End-to-end latency and task-rate estimate");
    latency->add_option("--profile", latency_args.profile, "Latency profile file")
        ->required()
        ->check(CLI::ExistingFile);
    latency->add_option("--mode", latency_args.mode, "Pipeline composition")
        ->check(CLI::IsMember({"sequential", "pipelined"}))
        ->capture_default_str();
    latency->add_option("--rate", latency_args.rate,
                        "Code rate for the derived transmission stage")
        ->check(CLI::IsMember({"auto", "1/3", "1/2", "2/3", "5/6"}))
        ->capture_default_str();
    latency->add_option("--grant-rb", latency_args.grant_rb, "Resource blocks in the grant")
        ->capture_default_str();
    latency->add_option("--report", latency_args.report, "Report JSON output (default stdout)");
    latency->add_option("--seed", latency_args.seed, "RNG seed (echoed)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ingest->parsed()) return run_ingest(ingest_args);
        if (filter->parsed()) return run_filter_cmd(filter_args);
        if (select->parsed()) return run_select(select_args);
        if (encode->parsed()) return run_select(encode_args);
        if (simulate->parsed()) return run_simulate(simulate_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
        if (latency->parsed()) return run_latency(latency_args);
    } catch (const semcom::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
