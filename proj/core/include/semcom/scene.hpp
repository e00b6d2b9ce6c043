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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace semcom {

/// Default vocabulary budgets for annotated datasets: 151 object classes
/// (150 + background) and 51 relation classes (50 + background).
inline constexpr int kDefaultObjectVocabSize = 151;
inline constexpr int kDefaultRelationVocabSize = 51;

/// Axis-aligned box in pixel coordinates; (x, y) is the top-left corner.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const BoundingBox&) const = default;
};

/// One detected/annotated object in a scene.
struct ObjectInstance {
    int id = 0;          ///< Scene-local identifier, unique per scene.
    std::string label;   ///< Lowercase class label, no whitespace.
    int class_id = -1;   ///< Index into the object vocabulary.
    BoundingBox box;     ///< Layout of the object within the image.
};

/// One directed subject-predicate-object relation between two objects.
struct RelationInstance {
    int subject_id = 0;
    int object_id = 0;
    std::string predicate;  ///< Lowercase predicate label, no whitespace.
    int predicate_id = -1;  ///< Index into the relation vocabulary.

    bool operator==(const RelationInstance&) const = default;
};

/// A scene graph: objects plus the directed relations between them.
struct SceneGraph {
    std::vector<ObjectInstance> objects;
    std::vector<RelationInstance> relations;

    const ObjectInstance* find_object(int id) const {
        for (const auto& obj : objects) {
            if (obj.id == id) return &obj;
        }
        return nullptr;
    }
};

/// A fully annotated image: identifier, resolution, and its scene graph.
struct SceneAnnotation {
    std::string image_id;
    int width = 0;
    int height = 0;
    SceneGraph graph;
};

/// Bidirectional label <-> class-id mapping. Ids are assigned in interning
/// order starting at 0, so loading scenes in a fixed order yields a fixed
/// vocabulary.
class Vocabulary {
public:
    /// Returns the id for `label`, interning it if new.
    int intern(const std::string& label);

    /// Returns the id for `label` if already interned.
    std::optional<int> lookup(const std::string& label) const;

    const std::string& label_of(int id) const { return labels_.at(static_cast<std::size_t>(id)); }
    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

/// Object and relation vocabularies shared across a corpus.
struct VocabularySet {
    Vocabulary objects;
    Vocabulary relations;
};

/// One relation rendered as a three-token sentence "subject predicate object".
struct SubGraphSentence {
    std::string subject_label;
    std::string predicate;
    std::string object_label;
    int relation_index = -1;  ///< Index of the source relation in its graph.

    std::string text() const { return subject_label + " " + predicate + " " + object_label; }
};

/// Renders every relation of `graph` as a sentence, in relation order.
std::vector<SubGraphSentence> to_sentences(const SceneGraph& graph);

/// Structural validation. Returns a list of human-readable problems; an
/// empty list means the annotation is internally consistent: positive
/// resolution, unique object ids, well-formed lowercase labels, boxes
/// inside the image, relation endpoints that exist and differ, and no
/// duplicate (subject, predicate, object) triples.
std::vector<std::string> validate_scene(const SceneAnnotation& scene);

/// Coarse per-cell class map rasterized from object boxes. Cell values are
/// class_id + 1 so that 0 always means "background"; objects are painted in
/// ascending id order, so later ids win overlaps.
struct SegmentationGrid {
    int width_cells = 0;
    int height_cells = 0;
    std::vector<std::uint16_t> cells;  ///< Row-major, width_cells * height_cells.

    std::uint16_t at(int cx, int cy) const {
        return cells[static_cast<std::size_t>(cy) * static_cast<std::size_t>(width_cells) +
                     static_cast<std::size_t>(cx)];
    }
};

/// Rasterizes `scene` onto a width_cells x height_cells grid using the
/// cell-center-in-box rule.
SegmentationGrid make_segmentation_grid(const SceneAnnotation& scene, int width_cells,
                                        int height_cells);

/// A dense feature tensor destined for quantization: channels x width x
/// height float values plus the quantizer bit width.
struct FeatureMapSpec {
    int channels = 4;
    int width = 64;
    int height = 64;
    int quant_bits = 8;
    std::vector<float> values;  ///< channel-major, channels * width * height.

    std::size_t value_count() const {
        return static_cast<std::size_t>(channels) * static_cast<std::size_t>(width) *
               static_cast<std::size_t>(height);
    }
};

/// Deterministic synthetic feature tensor (uniform values in [0, 1)) for
/// sizing/link experiments when no real backbone output is at hand.
FeatureMapSpec make_synthetic_feature_map(int channels, int width, int height, int quant_bits,
                                          std::uint64_t seed);

/// The transmittable semantic representations of a scene.
enum class SemanticKind : std::uint8_t {
    Objects = 0,          ///< Object labels only.
    Layouts = 1,          ///< Bounding boxes only.
    ObjectsLayouts = 2,   ///< Labels with their boxes.
    SegMap = 3,           ///< Coarse segmentation grid.
    SceneGraphFull = 4,   ///< Every relation, as sentences.
    SceneGraphFiltered = 5,  ///< Relations surviving semantic filtering.
    SceneGraphLayouts = 6,   ///< Scene-graph sentences plus labeled boxes.
    FeatureMap = 7,       ///< Quantized dense feature tensor.
    CompressedImage = 8,  ///< Conventional codec output (size accounting only).
};

/// Canonical lowercase token for a kind ("objects", "sg_filtered", ...).
std::string to_string(SemanticKind kind);

/// Inverse of to_string(SemanticKind). Throws SchemaError on unknown tokens.
SemanticKind semantic_kind_from_string(const std::string& token);

} // namespace semcom
