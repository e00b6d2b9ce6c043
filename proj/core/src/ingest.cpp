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

#include "semcom/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

using nlohmann::json;

const json& require_field(const json& node, const char* name) {
    auto it = node.find(name);
    if (it == node.end()) {
        throw SchemaError(std::string("missing required field '") + name + "'");
    }
    return *it;
}

int require_int(const json& node, const char* name) {
    const json& field = require_field(node, name);
    if (!field.is_number_integer()) {
        throw SchemaError(std::string("field '") + name + "' must be an integer");
    }
    return field.get<int>();
}

std::string require_string(const json& node, const char* name) {
    const json& field = require_field(node, name);
    if (!field.is_string()) {
        throw SchemaError(std::string("field '") + name + "' must be a string");
    }
    return field.get<std::string>();
}

} // namespace

SceneAnnotation load_scene(const std::string& json_text, VocabularySet& vocabs) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scene JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("scene document must be a JSON object");

    SceneAnnotation scene;
    scene.image_id = require_string(doc, "image_id");
    scene.width = require_int(doc, "width");
    scene.height = require_int(doc, "height");

    const json& objects = require_field(doc, "objects");
    if (!objects.is_array()) throw SchemaError("field 'objects' must be an array");
    for (const json& node : objects) {
        if (!node.is_object()) throw SchemaError("object entries must be JSON objects");
        ObjectInstance obj;
        obj.id = require_int(node, "id");
        obj.label = require_string(node, "label");
        const json& bbox = require_field(node, "bbox");
        if (!bbox.is_array() || bbox.size() != 4) {
            throw SchemaError("field 'bbox' must be an array [x, y, w, h]");
        }
        for (const json& v : bbox) {
            if (!v.is_number_integer()) throw SchemaError("bbox entries must be integers");
        }
        obj.box = BoundingBox{bbox[0].get<int>(), bbox[1].get<int>(), bbox[2].get<int>(),
                              bbox[3].get<int>()};
        obj.class_id = vocabs.objects.intern(obj.label);
        scene.graph.objects.push_back(std::move(obj));
    }

    const json& relations = require_field(doc, "relations");
    if (!relations.is_array()) throw SchemaError("field 'relations' must be an array");
    for (const json& node : relations) {
        if (!node.is_object()) throw SchemaError("relation entries must be JSON objects");
        RelationInstance rel;
        rel.subject_id = require_int(node, "subject");
        rel.object_id = require_int(node, "object");
        rel.predicate = require_string(node, "predicate");
        rel.predicate_id = vocabs.relations.intern(rel.predicate);
        scene.graph.relations.push_back(std::move(rel));
    }

    const std::vector<std::string> problems = validate_scene(scene);
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "scene '" << scene.image_id << "' is invalid:";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw ValidationError(msg.str());
    }
    return scene;
}

SceneAnnotation load_scene_file(const std::string& path, VocabularySet& vocabs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scene file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scene(buffer.str(), vocabs);
}

std::vector<SceneAnnotation> load_corpus(const std::string& dir, VocabularySet& vocabs) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError("corpus path '" + dir + "' is not a directory");
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<SceneAnnotation> corpus;
    corpus.reserve(files.size());
    for (const auto& path : files) corpus.push_back(load_scene_file(path, vocabs));
    return corpus;
}

void accumulate_stats(RelationStats& stats, const SceneAnnotation& scene) {
    for (const auto& rel : scene.graph.relations) {
        const ObjectInstance* subject = scene.graph.find_object(rel.subject_id);
        const ObjectInstance* object = scene.graph.find_object(rel.object_id);
        if (subject == nullptr || object == nullptr) {
            throw ValidationError("relation references unknown object id");
        }
        ++stats.pair_counts[{subject->label, object->label}];
        ++stats.triple_counts[{subject->label, rel.predicate, object->label}];
    }
    ++stats.corpus_size;
}

RelationStats build_relation_stats(const std::vector<SceneAnnotation>& corpus) {
    RelationStats stats;
    for (const auto& scene : corpus) accumulate_stats(stats, scene);
    return stats;
}

double conditional_probability(const RelationStats& stats, const std::string& subject_label,
                               const std::string& predicate, const std::string& object_label) {
    auto pair_it = stats.pair_counts.find({subject_label, object_label});
    if (pair_it == stats.pair_counts.end() || pair_it->second == 0) return 0.0;
    auto triple_it = stats.triple_counts.find({subject_label, predicate, object_label});
    if (triple_it == stats.triple_counts.end()) return 0.0;
    return static_cast<double>(triple_it->second) / static_cast<double>(pair_it->second);
}

namespace {

constexpr char kStatsMagic[4] = {'S', 'C', 'S', 'T'};
constexpr std::uint32_t kStatsVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xffu));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

class ByteCursor {
public:
    ByteCursor(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint32_t get_u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }

    std::uint64_t get_u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }

    std::string get_string() {
        const std::uint32_t len = get_u32();
        need(len);
        std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                      bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
        pos_ += len;
        return s;
    }

    void expect_magic(const char magic[4], const char* what) {
        need(4);
        for (int i = 0; i < 4; ++i) {
            if (bytes_[pos_ + static_cast<std::size_t>(i)] != static_cast<std::uint8_t>(magic[i])) {
                throw FormatError(std::string("bad magic for ") + what);
            }
        }
        pos_ += 4;
    }

    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw FormatError("truncated stream");
        }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> serialize_stats(const RelationStats& stats) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kStatsMagic, kStatsMagic + 4);
    put_u32(out, kStatsVersion);
    put_u64(out, stats.corpus_size);
    put_u64(out, stats.triple_counts.size());
    // std::map iterates keys in sorted order, so the stream is canonical.
    for (const auto& [key, count] : stats.triple_counts) {
        put_string(out, std::get<0>(key));
        put_string(out, std::get<1>(key));
        put_string(out, std::get<2>(key));
        put_u64(out, count);
    }
    return out;
}

RelationStats deserialize_stats(const std::vector<std::uint8_t>& bytes) {
    ByteCursor cursor(bytes);
    cursor.expect_magic(kStatsMagic, "relation statistics");
    const std::uint32_t version = cursor.get_u32();
    if (version != kStatsVersion) {
        throw FormatError("unsupported relation-statistics version " + std::to_string(version));
    }
    RelationStats stats;
    stats.corpus_size = cursor.get_u64();
    const std::uint64_t records = cursor.get_u64();
    for (std::uint64_t i = 0; i < records; ++i) {
        std::string subject = cursor.get_string();
        std::string predicate = cursor.get_string();
        std::string object = cursor.get_string();
        const std::uint64_t count = cursor.get_u64();
        stats.triple_counts[{subject, predicate, object}] += count;
        stats.pair_counts[{subject, object}] += count;
    }
    if (!cursor.exhausted()) throw FormatError("trailing bytes after relation statistics");
    return stats;
}

void save_stats_file(const RelationStats& stats, const std::string& path) {
    const std::vector<std::uint8_t> bytes = serialize_stats(stats);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

RelationStats load_stats_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open stats file '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize_stats(bytes);
}

std::string scene_json(const SceneAnnotation& scene) {
    json doc;
    doc["image_id"] = scene.image_id;
    doc["width"] = scene.width;
    doc["height"] = scene.height;
    doc["objects"] = json::array();
    for (const ObjectInstance& object : scene.graph.objects) {
        json node;
        node["id"] = object.id;
        node["label"] = object.label;
        node["bbox"] = {object.box.x, object.box.y, object.box.w, object.box.h};
        doc["objects"].push_back(std::move(node));
    }
    doc["relations"] = json::array();
    for (const RelationInstance& relation : scene.graph.relations) {
        json node;
        node["subject"] = relation.subject_id;
        node["predicate"] = relation.predicate;
        node["object"] = relation.object_id;
        doc["relations"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

} // namespace semcom
