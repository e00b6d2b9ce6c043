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

#include <doctest.h>

#include <string>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/ingest.hpp"
#include "semcom/scene.hpp"
#include "test_support.hpp"

using namespace semcom;
using testsupport::TempDir;
using testsupport::fixture_path;
using testsupport::slurp;
using testsupport::spit;

namespace {

/// Minimal valid scene JSON with caller-controlled pieces spliced in.
std::string scene_text(const std::string& objects, const std::string& relations,
                       int width = 100, int height = 100) {
    return std::string("{\"image_id\":\"t\",\"width\":") + std::to_string(width) +
           ",\"height\":" + std::to_string(height) + ",\"objects\":[" + objects +
           "],\"relations\":[" + relations + "]}";
}

const char* kTwoObjects =
    R"({"id":0,"label":"man","bbox":[1,2,10,20]},{"id":1,"label":"ski","bbox":[5,6,7,8]})";

} // namespace

TEST_CASE("ski fixture loads with all annotations intact") {
    VocabularySet vocabs;
    const SceneAnnotation scene = load_scene_file(fixture_path("ski_scene.json"), vocabs);
    CHECK_EQ(scene.image_id, "ski_0001");
    CHECK_EQ(scene.width, 512);
    CHECK_EQ(scene.height, 512);
    REQUIRE_EQ(scene.graph.objects.size(), 5);
    REQUIRE_EQ(scene.graph.relations.size(), 6);
    CHECK_EQ(scene.graph.objects[0].label, "man");
    CHECK_EQ(scene.graph.objects[0].box.x, 12);
    CHECK_EQ(scene.graph.objects[0].box.h, 60);
    CHECK_EQ(scene.graph.relations[0].predicate, "riding");
    CHECK(validate_scene(scene).empty());

    const auto sentences = to_sentences(scene.graph);
    REQUIRE_EQ(sentences.size(), 6);
    CHECK_EQ(sentences[0].text(), "man riding ski");
    CHECK_EQ(sentences[5].text(), "ski under pole");
    CHECK_EQ(sentences[5].relation_index, 5);
}

TEST_CASE("load_scene rejects malformed documents") {
    VocabularySet vocabs;
    SUBCASE("unparseable text") {
        CHECK_THROWS_AS(load_scene("not json", vocabs), ParseError);
    }
    SUBCASE("missing field") {
        CHECK_THROWS_AS(load_scene(R"({"image_id":"x","width":10,"height":10})", vocabs),
                        SchemaError);
    }
    SUBCASE("bbox with three entries") {
        CHECK_THROWS_AS(
            load_scene(scene_text(R"({"id":0,"label":"man","bbox":[1,2,3]})", ""), vocabs),
            SchemaError);
    }
}

TEST_CASE("load_scene rejects inconsistent annotations") {
    VocabularySet vocabs;
    SUBCASE("duplicate object id") {
        const std::string objects =
            R"({"id":0,"label":"man","bbox":[1,2,3,4]},{"id":0,"label":"ski","bbox":[1,2,3,4]})";
        CHECK_THROWS_AS(load_scene(scene_text(objects, ""), vocabs), ValidationError);
    }
    SUBCASE("box leaving the image") {
        const std::string objects = R"({"id":0,"label":"man","bbox":[95,2,10,4]})";
        CHECK_THROWS_AS(load_scene(scene_text(objects, ""), vocabs), ValidationError);
    }
    SUBCASE("non-positive box") {
        const std::string objects = R"({"id":0,"label":"man","bbox":[5,2,0,4]})";
        CHECK_THROWS_AS(load_scene(scene_text(objects, ""), vocabs), ValidationError);
    }
    SUBCASE("uppercase label") {
        const std::string objects = R"({"id":0,"label":"Man","bbox":[1,2,3,4]})";
        CHECK_THROWS_AS(load_scene(scene_text(objects, ""), vocabs), ValidationError);
    }
    SUBCASE("label with spaces") {
        const std::string objects = R"({"id":0,"label":"a man","bbox":[1,2,3,4]})";
        CHECK_THROWS_AS(load_scene(scene_text(objects, ""), vocabs), ValidationError);
    }
    SUBCASE("self loop") {
        const std::string relations = R"({"subject":0,"predicate":"on","object":0})";
        CHECK_THROWS_AS(load_scene(scene_text(kTwoObjects, relations), vocabs), ValidationError);
    }
    SUBCASE("dangling endpoint") {
        const std::string relations = R"({"subject":0,"predicate":"on","object":9})";
        CHECK_THROWS_AS(load_scene(scene_text(kTwoObjects, relations), vocabs), ValidationError);
    }
    SUBCASE("duplicate triple") {
        const std::string relations =
            R"({"subject":0,"predicate":"on","object":1},{"subject":0,"predicate":"on","object":1})";
        CHECK_THROWS_AS(load_scene(scene_text(kTwoObjects, relations), vocabs), ValidationError);
    }
    SUBCASE("non-positive resolution") {
        CHECK_THROWS_AS(load_scene(scene_text(kTwoObjects, "", 0, 10), vocabs), ValidationError);
    }
}

TEST_CASE("vocabularies intern labels stably") {
    VocabularySet vocabs;
    const int man = vocabs.objects.intern("man");
    const int ski = vocabs.objects.intern("ski");
    CHECK_EQ(vocabs.objects.intern("man"), man);
    CHECK_NE(man, ski);
    CHECK_EQ(vocabs.objects.label_of(man), "man");
    CHECK_EQ(vocabs.objects.lookup("ski"), ski);
    CHECK_FALSE(vocabs.objects.lookup("absent").has_value());
}

TEST_CASE("load_corpus reads files in sorted order") {
    VocabularySet vocabs;
    const auto corpus = load_corpus(fixture_path("stats_corpus"), vocabs);
    REQUIRE_EQ(corpus.size(), 10);
    CHECK_EQ(corpus.front().image_id, "stats_0000");
    CHECK_EQ(corpus.back().image_id, "stats_0009");
}

TEST_CASE("relation statistics match the planted conditional probabilities") {
    VocabularySet vocabs;
    const auto corpus = load_corpus(fixture_path("stats_corpus"), vocabs);
    const RelationStats stats = build_relation_stats(corpus);
    CHECK_EQ(stats.corpus_size, 10);

    CHECK_EQ(conditional_probability(stats, "man", "riding", "ski"), doctest::Approx(0.2));
    CHECK_EQ(conditional_probability(stats, "man", "holding", "pole"), doctest::Approx(0.3));
    CHECK_EQ(conditional_probability(stats, "pole", "in_hand", "hand"), doctest::Approx(0.25));
    CHECK_EQ(conditional_probability(stats, "man", "has", "hand"), doctest::Approx(0.9));
    CHECK_EQ(conditional_probability(stats, "man", "has", "head"), 1.0);
    // The boundary plant is exact: 4 of 5 pair occurrences.
    CHECK_EQ(conditional_probability(stats, "ski", "under", "pole"), 4.0 / 5.0);
    // Unseen pairs never contribute probability mass.
    CHECK_EQ(conditional_probability(stats, "head", "has", "man"), 0.0);
    CHECK_EQ(conditional_probability(stats, "man", "unseen_predicate", "ski"), 0.0);
}

TEST_CASE("statistics serialization round-trips byte-identically") {
    VocabularySet vocabs;
    const auto corpus = load_corpus(fixture_path("stats_corpus"), vocabs);
    const RelationStats stats = build_relation_stats(corpus);

    const auto bytes = serialize_stats(stats);
    const RelationStats parsed = deserialize_stats(bytes);
    CHECK_EQ(parsed.corpus_size, stats.corpus_size);
    CHECK(parsed.triple_counts == stats.triple_counts);
    CHECK(parsed.pair_counts == stats.pair_counts);
    CHECK(serialize_stats(parsed) == bytes);  // canonical form is stable

    TempDir dir;
    save_stats_file(stats, dir.file("stats.bin"));
    save_stats_file(stats, dir.file("stats2.bin"));
    CHECK_EQ(slurp(dir.file("stats.bin")), slurp(dir.file("stats2.bin")));
    const RelationStats loaded = load_stats_file(dir.file("stats.bin"));
    CHECK(loaded.triple_counts == stats.triple_counts);
}

TEST_CASE("statistics deserialization rejects damage") {
    VocabularySet vocabs;
    const auto corpus = load_corpus(fixture_path("stats_corpus"), vocabs);
    auto bytes = serialize_stats(build_relation_stats(corpus));

    SUBCASE("truncation") {
        bytes.resize(bytes.size() - 3);
        CHECK_THROWS_AS(deserialize_stats(bytes), FormatError);
    }
    SUBCASE("trailing garbage") {
        bytes.push_back(0);
        CHECK_THROWS_AS(deserialize_stats(bytes), FormatError);
    }
    SUBCASE("bad magic") {
        bytes[0] = 'X';
        CHECK_THROWS_AS(deserialize_stats(bytes), FormatError);
    }
}

TEST_CASE("scene_json round-trips the ski fixture") {
    VocabularySet vocabs;
    const SceneAnnotation scene = load_scene_file(fixture_path("ski_scene.json"), vocabs);
    const std::string text = scene_json(scene);
    VocabularySet vocabs2;
    const SceneAnnotation again = load_scene(text, vocabs2);
    CHECK_EQ(again.image_id, scene.image_id);
    REQUIRE_EQ(again.graph.objects.size(), scene.graph.objects.size());
    REQUIRE_EQ(again.graph.relations.size(), scene.graph.relations.size());
    for (std::size_t i = 0; i < scene.graph.objects.size(); ++i) {
        CHECK_EQ(again.graph.objects[i].label, scene.graph.objects[i].label);
        CHECK_EQ(again.graph.objects[i].box.x, scene.graph.objects[i].box.x);
    }
    CHECK_EQ(scene_json(again), text);
}

TEST_CASE("segmentation grid paints cell centers in ascending id order") {
    VocabularySet vocabs;
    // Two objects: "a" covers the left half, "b" a centered square that
    // overlaps it; b has the higher id and wins contested cells.
    const std::string objects =
        R"({"id":0,"label":"a","bbox":[0,0,50,100]},{"id":1,"label":"b","bbox":[40,40,20,20]})";
    const SceneAnnotation scene = load_scene(scene_text(objects, ""), vocabs);
    const SegmentationGrid grid = make_segmentation_grid(scene, 10, 10);
    REQUIRE_EQ(grid.cells.size(), 100);

    const int a_class = scene.graph.objects[0].class_id + 1;
    const int b_class = scene.graph.objects[1].class_id + 1;
    // Cell (0,0) center (5,5) lies in a only.
    CHECK_EQ(grid.cells[0], a_class);
    // Cell (4,4) center (45,45) lies in both; higher id wins.
    CHECK_EQ(grid.cells[4 * 10 + 4], b_class);
    // Cell (5,4) center (55,45) lies in b only.
    CHECK_EQ(grid.cells[4 * 10 + 5], b_class);
    // Cell (9,9) center (95,95) is background.
    CHECK_EQ(grid.cells[99], 0);
}

TEST_CASE("synthetic feature maps are seed-deterministic") {
    const FeatureMapSpec a = make_synthetic_feature_map(2, 4, 4, 8, 5);
    const FeatureMapSpec b = make_synthetic_feature_map(2, 4, 4, 8, 5);
    const FeatureMapSpec c = make_synthetic_feature_map(2, 4, 4, 8, 6);
    REQUIRE_EQ(a.values.size(), 32);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    for (const double v : a.values) {
        CHECK_GE(v, 0.0);
        CHECK_LT(v, 1.0);
    }
}
