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

#include "semcom/task_select.hpp"

#include <fstream>
#include <sstream>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

std::string to_string(TaskKind task) {
    switch (task) {
        case TaskKind::Classification: return "classification";
        case TaskKind::Localization: return "localization";
        case TaskKind::Detection: return "detection";
        case TaskKind::Retrieval: return "retrieval";
        case TaskKind::Generation: return "generation";
    }
    throw SchemaError("unknown task kind value");
}

TaskKind task_kind_from_string(const std::string& token) {
    if (token == "classification") return TaskKind::Classification;
    if (token == "localization") return TaskKind::Localization;
    if (token == "detection") return TaskKind::Detection;
    if (token == "retrieval") return TaskKind::Retrieval;
    if (token == "generation") return TaskKind::Generation;
    throw SchemaError("unknown task kind '" + token + "'");
}

std::string to_string(FidelityLevel level) {
    switch (level) {
        case FidelityLevel::Minimal: return "minimal";
        case FidelityLevel::Standard: return "standard";
        case FidelityLevel::Rich: return "rich";
        case FidelityLevel::Full: return "full";
    }
    throw SchemaError("unknown fidelity level value");
}

FidelityLevel fidelity_level_from_string(const std::string& token) {
    if (token == "minimal") return FidelityLevel::Minimal;
    if (token == "standard") return FidelityLevel::Standard;
    if (token == "rich") return FidelityLevel::Rich;
    if (token == "full") return FidelityLevel::Full;
    throw SchemaError("unknown fidelity level '" + token + "'");
}

std::string to_string(const KindRequest& request) {
    if (request.kind == SemanticKind::SceneGraphLayouts && request.filtered) {
        return "sg_layouts_filtered";
    }
    return to_string(request.kind);
}

KindRequest kind_request_from_string(const std::string& token) {
    if (token == "sg_layouts_filtered") {
        return KindRequest{SemanticKind::SceneGraphLayouts, true};
    }
    const SemanticKind kind = semantic_kind_from_string(token);
    return KindRequest{kind, kind == SemanticKind::SceneGraphFiltered};
}

SelectionPolicy default_policy() {
    SelectionPolicy policy;
    auto set = [&policy](TaskKind task, FidelityLevel level, const char* tokens) {
        std::vector<KindRequest> requests;
        std::istringstream in(tokens);
        std::string tok;
        while (std::getline(in, tok, '+')) requests.push_back(kind_request_from_string(tok));
        policy.table[{task, level}] = std::move(requests);
    };

    for (FidelityLevel level : {FidelityLevel::Minimal, FidelityLevel::Standard,
                                FidelityLevel::Rich, FidelityLevel::Full}) {
        set(TaskKind::Classification, level, "objects");
        set(TaskKind::Localization, level, "layouts");
    }

    set(TaskKind::Detection, FidelityLevel::Minimal, "objects_layouts");
    set(TaskKind::Detection, FidelityLevel::Standard, "objects_layouts");
    set(TaskKind::Detection, FidelityLevel::Rich, "segmap");
    set(TaskKind::Detection, FidelityLevel::Full, "segmap");

    set(TaskKind::Retrieval, FidelityLevel::Minimal, "objects");
    set(TaskKind::Retrieval, FidelityLevel::Standard, "objects_layouts");
    set(TaskKind::Retrieval, FidelityLevel::Rich, "sg_layouts_filtered");
    set(TaskKind::Retrieval, FidelityLevel::Full, "feature_map");

    set(TaskKind::Generation, FidelityLevel::Minimal, "sg_filtered");
    set(TaskKind::Generation, FidelityLevel::Standard, "sg_layouts_filtered");
    set(TaskKind::Generation, FidelityLevel::Rich, "sg_layouts_filtered");
    set(TaskKind::Generation, FidelityLevel::Full, "feature_map");

    return policy;
}

SelectionPolicy parse_policy(const std::string& text) {
    SelectionPolicy policy;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // Trim surrounding whitespace.
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const std::size_t eq = line.find('=');
        const std::size_t comma = line.find(',');
        if (eq == std::string::npos || comma == std::string::npos || comma > eq) {
            throw SchemaError("policy line " + std::to_string(line_no) +
                              " must look like 'task,fidelity=kind+kind'");
        }
        const TaskKind task = task_kind_from_string(line.substr(0, comma));
        const FidelityLevel level =
            fidelity_level_from_string(line.substr(comma + 1, eq - comma - 1));

        std::vector<KindRequest> requests;
        std::istringstream kinds(line.substr(eq + 1));
        std::string tok;
        while (std::getline(kinds, tok, '+')) {
            if (tok.empty()) {
                throw SchemaError("policy line " + std::to_string(line_no) +
                                  " has an empty kind token");
            }
            requests.push_back(kind_request_from_string(tok));
        }
        if (requests.empty()) {
            throw SchemaError("policy line " + std::to_string(line_no) + " lists no kinds");
        }
        policy.table[{task, level}] = std::move(requests);
    }
    return policy;
}

SelectionPolicy load_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open policy file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_policy(buffer.str());
}

std::vector<KindRequest> required_semantics(TaskKind task, FidelityLevel level,
                                            const SelectionPolicy* override_policy) {
    if (override_policy != nullptr) {
        auto it = override_policy->table.find({task, level});
        if (it != override_policy->table.end()) return it->second;
    }
    static const SelectionPolicy defaults = default_policy();
    auto it = defaults.table.find({task, level});
    if (it == defaults.table.end()) {
        throw ConfigError("no policy entry for task/fidelity combination");
    }
    return it->second;
}

SemanticPayload assemble_payload(const SceneAnnotation& scene,
                                 const std::vector<KindRequest>& requests,
                                 const SceneGraph* filtered_graph, const CodecConfig& config) {
    if (requests.empty()) throw ConfigError("payload assembly needs at least one kind request");

    auto graph_for = [&](const KindRequest& request) -> const SceneGraph& {
        const bool wants_filtered =
            request.filtered || request.kind == SemanticKind::SceneGraphFiltered;
        if (!wants_filtered) return scene.graph;
        if (filtered_graph == nullptr) {
            throw MissingFilteredGraph("request '" + to_string(request) +
                                       "' needs a filtered scene graph");
        }
        return *filtered_graph;
    };

    std::vector<PayloadSection> sections;
    sections.reserve(requests.size());
    for (const auto& request : requests) {
        SemanticPayload encoded;
        switch (request.kind) {
            case SemanticKind::Objects:
            case SemanticKind::Layouts:
            case SemanticKind::ObjectsLayouts:
                encoded = encode_text_semantics(request.kind, scene.graph, scene.width,
                                                scene.height);
                break;
            case SemanticKind::SceneGraphFull:
            case SemanticKind::SceneGraphFiltered:
            case SemanticKind::SceneGraphLayouts:
                encoded = encode_text_semantics(request.kind, graph_for(request), scene.width,
                                                scene.height);
                break;
            case SemanticKind::SegMap: {
                const SegmentationGrid grid = make_segmentation_grid(
                    scene, config.segmap_width_cells, config.segmap_height_cells);
                encoded = encode_segmentation_map(grid, config.segmap_bits_per_cell, scene.width,
                                                  scene.height);
                break;
            }
            case SemanticKind::FeatureMap: {
                const FeatureMapSpec spec = make_synthetic_feature_map(
                    config.feature_channels, config.feature_width, config.feature_height,
                    config.feature_quant_bits,
                    mix_seed(config.feature_seed, fnv1a64(scene.image_id)));
                encoded = encode_feature_map(spec, scene.width, scene.height);
                break;
            }
            case SemanticKind::CompressedImage: {
                const std::uint64_t bits = compressed_image_bits(config, scene.width,
                                                                 scene.height);
                encoded.kind = SemanticKind::CompressedImage;
                encoded.bit_count = bits;
                encoded.bytes.assign(static_cast<std::size_t>((bits + 7) / 8), 0);
                encoded.source_width = scene.width;
                encoded.source_height = scene.height;
                break;
            }
        }
        sections.push_back(PayloadSection{request.kind, std::move(encoded.bytes),
                                          encoded.bit_count});
    }
    return assemble_container(sections, scene.width, scene.height);
}

} // namespace semcom
