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

#include "semcom/scene.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>
#include <unordered_set>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

int Vocabulary::intern(const std::string& label) {
    auto it = index_.find(label);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(labels_.size());
    labels_.push_back(label);
    index_.emplace(label, id);
    return id;
}

std::optional<int> Vocabulary::lookup(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<SubGraphSentence> to_sentences(const SceneGraph& graph) {
    std::vector<SubGraphSentence> sentences;
    sentences.reserve(graph.relations.size());
    for (std::size_t i = 0; i < graph.relations.size(); ++i) {
        const auto& rel = graph.relations[i];
        const ObjectInstance* subject = graph.find_object(rel.subject_id);
        const ObjectInstance* object = graph.find_object(rel.object_id);
        if (subject == nullptr || object == nullptr) {
            throw ValidationError("relation references unknown object id");
        }
        sentences.push_back(SubGraphSentence{subject->label, rel.predicate, object->label,
                                             static_cast<int>(i)});
    }
    return sentences;
}

namespace {

bool well_formed_label(const std::string& label) {
    if (label.empty()) return false;
    for (unsigned char c : label) {
        if (std::isspace(c) != 0) return false;
        if (std::isupper(c) != 0) return false;
    }
    return true;
}

} // namespace

std::vector<std::string> validate_scene(const SceneAnnotation& scene) {
    std::vector<std::string> problems;
    if (scene.width <= 0 || scene.height <= 0) {
        problems.push_back("image resolution must be positive");
    }

    std::unordered_set<int> ids;
    for (const auto& obj : scene.graph.objects) {
        if (obj.id < 0) problems.push_back("object id " + std::to_string(obj.id) + " is negative");
        if (!ids.insert(obj.id).second) {
            problems.push_back("duplicate object id " + std::to_string(obj.id));
        }
        if (!well_formed_label(obj.label)) {
            problems.push_back("object label '" + obj.label +
                               "' must be nonempty lowercase without whitespace");
        }
        if (obj.box.w <= 0 || obj.box.h <= 0) {
            problems.push_back("object " + std::to_string(obj.id) + " has a degenerate box");
        }
        if (obj.box.x < 0 || obj.box.y < 0 || obj.box.x + obj.box.w > scene.width ||
            obj.box.y + obj.box.h > scene.height) {
            problems.push_back("object " + std::to_string(obj.id) + " box exceeds image bounds");
        }
    }

    std::set<std::tuple<int, std::string, int>> triples;
    for (const auto& rel : scene.graph.relations) {
        if (ids.count(rel.subject_id) == 0) {
            problems.push_back("relation subject id " + std::to_string(rel.subject_id) +
                               " does not exist");
        }
        if (ids.count(rel.object_id) == 0) {
            problems.push_back("relation object id " + std::to_string(rel.object_id) +
                               " does not exist");
        }
        if (rel.subject_id == rel.object_id) {
            problems.push_back("relation on object id " + std::to_string(rel.subject_id) +
                               " is a self-loop");
        }
        if (!well_formed_label(rel.predicate)) {
            problems.push_back("predicate '" + rel.predicate +
                               "' must be nonempty lowercase without whitespace");
        }
        if (!triples.emplace(rel.subject_id, rel.predicate, rel.object_id).second) {
            problems.push_back("duplicate relation triple on subject id " +
                               std::to_string(rel.subject_id));
        }
    }
    return problems;
}

SegmentationGrid make_segmentation_grid(const SceneAnnotation& scene, int width_cells,
                                        int height_cells) {
    if (width_cells <= 0 || height_cells <= 0) {
        throw ConfigError("segmentation grid must have positive dimensions");
    }
    if (scene.width <= 0 || scene.height <= 0) {
        throw ValidationError("scene resolution must be positive");
    }

    SegmentationGrid grid;
    grid.width_cells = width_cells;
    grid.height_cells = height_cells;
    grid.cells.assign(static_cast<std::size_t>(width_cells) * static_cast<std::size_t>(height_cells),
                      0);

    // Paint in ascending object-id order so overlaps resolve deterministically.
    std::vector<const ObjectInstance*> order;
    order.reserve(scene.graph.objects.size());
    for (const auto& obj : scene.graph.objects) order.push_back(&obj);
    std::sort(order.begin(), order.end(),
              [](const ObjectInstance* a, const ObjectInstance* b) { return a->id < b->id; });

    for (const ObjectInstance* obj : order) {
        if (obj->class_id < 0) {
            throw ValidationError("object '" + obj->label + "' has no class id");
        }
        const auto value = static_cast<std::uint16_t>(obj->class_id + 1);
        for (int cy = 0; cy < height_cells; ++cy) {
            const double py = (cy + 0.5) * static_cast<double>(scene.height) / height_cells;
            if (py < obj->box.y || py >= obj->box.y + obj->box.h) continue;
            for (int cx = 0; cx < width_cells; ++cx) {
                const double px = (cx + 0.5) * static_cast<double>(scene.width) / width_cells;
                if (px < obj->box.x || px >= obj->box.x + obj->box.w) continue;
                grid.cells[static_cast<std::size_t>(cy) * static_cast<std::size_t>(width_cells) +
                           static_cast<std::size_t>(cx)] = value;
            }
        }
    }
    return grid;
}

FeatureMapSpec make_synthetic_feature_map(int channels, int width, int height, int quant_bits,
                                          std::uint64_t seed) {
    if (channels <= 0 || width <= 0 || height <= 0) {
        throw ConfigError("feature map must have positive dimensions");
    }
    if (quant_bits < 1 || quant_bits > 16) {
        throw ConfigError("feature quantizer width must be in [1, 16] bits");
    }
    FeatureMapSpec spec;
    spec.channels = channels;
    spec.width = width;
    spec.height = height;
    spec.quant_bits = quant_bits;
    spec.values.resize(spec.value_count());
    Rng rng(mix_seed(seed, 0x46454154u));  // independent stream per seed
    for (auto& v : spec.values) v = static_cast<float>(rng.next_double());
    return spec;
}

std::string to_string(SemanticKind kind) {
    switch (kind) {
        case SemanticKind::Objects: return "objects";
        case SemanticKind::Layouts: return "layouts";
        case SemanticKind::ObjectsLayouts: return "objects_layouts";
        case SemanticKind::SegMap: return "segmap";
        case SemanticKind::SceneGraphFull: return "sg";
        case SemanticKind::SceneGraphFiltered: return "sg_filtered";
        case SemanticKind::SceneGraphLayouts: return "sg_layouts";
        case SemanticKind::FeatureMap: return "feature_map";
        case SemanticKind::CompressedImage: return "compressed_image";
    }
    throw SchemaError("unknown semantic kind value");
}

SemanticKind semantic_kind_from_string(const std::string& token) {
    if (token == "objects") return SemanticKind::Objects;
    if (token == "layouts") return SemanticKind::Layouts;
    if (token == "objects_layouts") return SemanticKind::ObjectsLayouts;
    if (token == "segmap") return SemanticKind::SegMap;
    if (token == "sg") return SemanticKind::SceneGraphFull;
    if (token == "sg_filtered") return SemanticKind::SceneGraphFiltered;
    if (token == "sg_layouts") return SemanticKind::SceneGraphLayouts;
    if (token == "feature_map") return SemanticKind::FeatureMap;
    if (token == "compressed_image") return SemanticKind::CompressedImage;
    throw SchemaError("unknown semantic kind token '" + token + "'");
}

} // namespace semcom
