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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "semcom/codec.hpp"
#include "semcom/errors.hpp"
#include "semcom/ingest.hpp"
#include "semcom/rng.hpp"
#include "semcom/scene.hpp"
#include "test_support.hpp"

using namespace semcom;
using testsupport::TempDir;
using testsupport::fixture_path;

namespace {

const SceneAnnotation& ski() {
    static VocabularySet vocabs;
    static const SceneAnnotation scene = load_scene_file(fixture_path("ski_scene.json"), vocabs);
    return scene;
}

/// Ski graph reduced to the two relations the full filter pipeline keeps.
SceneGraph ski_filtered() {
    SceneGraph graph = ski().graph;
    graph.relations.resize(2);  // riding, holding
    return graph;
}

} // namespace

TEST_CASE("text grammars render golden strings on the ski fixture") {
    CHECK_EQ(render_text_semantics(SemanticKind::Objects, ski().graph),
             "man\nski\npole\nhand\nhead\n");
    CHECK_EQ(render_text_semantics(SemanticKind::Layouts, ski().graph),
             "12,40,80,60\n10,90,99,30\n5,8,9,70\n7,6,2,3\n1,2,3,4\n");
    CHECK_EQ(render_text_semantics(SemanticKind::ObjectsLayouts, ski().graph),
             "man 12,40,80,60\nski 10,90,99,30\npole 5,8,9,70\nhand 7,6,2,3\nhead 1,2,3,4\n");
    CHECK_EQ(render_text_semantics(SemanticKind::SceneGraphFull, ski().graph),
             "man riding ski\nman holding pole\npole in_hand hand\nman has hand\nman has head\n"
             "ski under pole\n");
    // Relation-free objects appear as bare label lines on sg kinds.
    CHECK_EQ(render_text_semantics(SemanticKind::SceneGraphFiltered, ski_filtered()),
             "man riding ski\nman holding pole\nhand\nhead\n");
    // ... but sg_layouts instead carries every object in its layout block.
    CHECK_EQ(render_text_semantics(SemanticKind::SceneGraphLayouts, ski_filtered()),
             "man riding ski\nman holding pole\n\n"
             "man 12,40,80,60\nski 10,90,99,30\npole 5,8,9,70\nhand 7,6,2,3\nhead 1,2,3,4\n");
}

TEST_CASE("the filtered sg_layouts payload is 105 characters = 840 bits") {
    const SemanticPayload payload =
        encode_text_semantics(SemanticKind::SceneGraphLayouts, ski_filtered(), 512, 512);
    CHECK_EQ(payload.bit_count, 840);
    CHECK_EQ(payload.bytes.size(), 105);
    CHECK_EQ(payload.kind, SemanticKind::SceneGraphLayouts);
    CHECK_EQ(payload.source_width, 512);
}

TEST_CASE("text payloads decode back to their structure") {
    SUBCASE("objects") {
        const auto payload = encode_text_semantics(SemanticKind::Objects, ski().graph, 512, 512);
        const auto decoded = decode_text_semantics(SemanticKind::Objects, payload);
        CHECK_EQ(decoded.object_labels,
                 std::vector<std::string>{"man", "ski", "pole", "hand", "head"});
    }
    SUBCASE("layouts") {
        const auto payload = encode_text_semantics(SemanticKind::Layouts, ski().graph, 512, 512);
        const auto decoded = decode_text_semantics(SemanticKind::Layouts, payload);
        REQUIRE_EQ(decoded.boxes.size(), 5);
        CHECK_EQ(decoded.boxes[0].x, 12);
        CHECK_EQ(decoded.boxes[4].h, 4);
    }
    SUBCASE("objects_layouts") {
        const auto payload =
            encode_text_semantics(SemanticKind::ObjectsLayouts, ski().graph, 512, 512);
        const auto decoded = decode_text_semantics(SemanticKind::ObjectsLayouts, payload);
        REQUIRE_EQ(decoded.layout_entries.size(), 5);
        CHECK_EQ(decoded.layout_entries[2].first, "pole");
        CHECK_EQ(decoded.layout_entries[2].second.w, 9);
    }
    SUBCASE("scene graph with isolated labels") {
        const auto payload =
            encode_text_semantics(SemanticKind::SceneGraphFiltered, ski_filtered(), 512, 512);
        const auto decoded = decode_text_semantics(SemanticKind::SceneGraphFiltered, payload);
        REQUIRE_EQ(decoded.triples.size(), 2);
        CHECK_EQ(decoded.triples[0].subject, "man");
        CHECK_EQ(decoded.triples[0].predicate, "riding");
        CHECK_EQ(decoded.triples[0].object, "ski");
        CHECK_EQ(decoded.isolated_labels, std::vector<std::string>{"hand", "head"});
    }
    SUBCASE("scene graph with layouts keeps triple order") {
        const auto payload =
            encode_text_semantics(SemanticKind::SceneGraphLayouts, ski_filtered(), 512, 512);
        const auto decoded = decode_text_semantics(SemanticKind::SceneGraphLayouts, payload);
        REQUIRE_EQ(decoded.triples.size(), 2);
        CHECK_EQ(decoded.triples[1].predicate, "holding");
        REQUIRE_EQ(decoded.layout_entries.size(), 5);
        CHECK_EQ(decoded.layout_entries[0].first, "man");
        CHECK_EQ(decoded.layout_entries[0].second.y, 40);
    }
}

TEST_CASE("text decoding rejects malformed payloads") {
    auto text_payload = [](SemanticKind kind, const std::string& text) {
        SemanticPayload payload;
        payload.kind = kind;
        payload.bytes.assign(text.begin(), text.end());
        payload.bit_count = static_cast<std::uint64_t>(text.size()) * 8;
        payload.source_width = 100;
        payload.source_height = 100;
        return payload;
    };

    SUBCASE("unterminated line") {
        CHECK_THROWS_AS(decode_text_semantics(SemanticKind::Objects,
                                              text_payload(SemanticKind::Objects, "man\nski")),
                        MalformedPayload);
    }
    SUBCASE("non-integer box field") {
        CHECK_THROWS_AS(decode_text_semantics(SemanticKind::Layouts,
                                              text_payload(SemanticKind::Layouts, "1,2,x,4\n")),
                        MalformedPayload);
    }
    SUBCASE("wrong box arity") {
        CHECK_THROWS_AS(decode_text_semantics(SemanticKind::Layouts,
                                              text_payload(SemanticKind::Layouts, "1,2,3\n")),
                        MalformedPayload);
    }
    SUBCASE("label with embedded space in a bare object line") {
        CHECK_THROWS_AS(decode_text_semantics(SemanticKind::Objects,
                                              text_payload(SemanticKind::Objects, "a b\n")),
                        MalformedPayload);
    }
    SUBCASE("missing sg_layouts separator") {
        CHECK_THROWS_AS(
            decode_text_semantics(SemanticKind::SceneGraphLayouts,
                                  text_payload(SemanticKind::SceneGraphLayouts, "a p b\n")),
            MalformedPayload);
    }
    SUBCASE("payload not byte-exact") {
        auto payload = text_payload(SemanticKind::Objects, "man\n");
        payload.bit_count -= 3;
        CHECK_THROWS_AS(decode_text_semantics(SemanticKind::Objects, payload), MalformedPayload);
    }
}

TEST_CASE("non-ASCII labels are rejected at render time") {
    SceneGraph graph;
    graph.objects.push_back({0, "caf\xc3\xa9", 0, {1, 1, 2, 2}});
    CHECK_THROWS_AS(render_text_semantics(SemanticKind::Objects, graph), ValidationError);
}

TEST_CASE("non-text kinds are rejected by the text codec") {
    CHECK_THROWS_AS(render_text_semantics(SemanticKind::FeatureMap, ski().graph), ConfigError);
    CHECK_THROWS_AS(render_text_semantics(SemanticKind::SegMap, ski().graph), ConfigError);
}

TEST_CASE("feature-map quantization stays within half a step") {
    FeatureMapSpec spec = make_synthetic_feature_map(4, 8, 8, 8, 21);
    const SemanticPayload payload = encode_feature_map(spec, 512, 512);
    // 64-bit header (two float32s) + q bits per value.
    CHECK_EQ(payload.bit_count, 64 + 4 * 8 * 8 * 8);

    const FeatureMapSpec back = decode_feature_map(payload, 4, 8, 8, 8);
    REQUIRE_EQ(back.values.size(), spec.values.size());
    float lo = spec.values[0];
    float hi = spec.values[0];
    for (const float v : spec.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double step = (static_cast<double>(hi) - lo) / 255.0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        CHECK_LE(std::abs(static_cast<double>(back.values[i]) - spec.values[i]),
                 step / 2 + 1e-6);
    }
}

TEST_CASE("feature-map corner cases") {
    SUBCASE("constant tensor quantizes to the offset") {
        FeatureMapSpec spec;
        spec.channels = 1;
        spec.width = 2;
        spec.height = 2;
        spec.quant_bits = 8;
        spec.values = {0.25f, 0.25f, 0.25f, 0.25f};
        const auto payload = encode_feature_map(spec, 64, 64);
        const auto back = decode_feature_map(payload, 1, 2, 2, 8);
        for (const float v : back.values) CHECK_EQ(v, 0.25f);
    }
    SUBCASE("q=1 bit layout is scale, offset, then MSB-first codes") {
        FeatureMapSpec spec;
        spec.channels = 1;
        spec.width = 2;
        spec.height = 1;
        spec.quant_bits = 1;
        spec.values = {0.0f, 1.0f};
        const auto payload = encode_feature_map(spec, 64, 64);
        CHECK_EQ(payload.bit_count, 66);
        // scale 1.0f, offset 0.0f, both little-endian, then codes 0 and 1.
        const std::vector<std::uint8_t> expected = {0x00, 0x00, 0x80, 0x3f, 0x00,
                                                    0x00, 0x00, 0x00, 0x40};
        CHECK(payload.bytes == expected);
        const auto back = decode_feature_map(payload, 1, 2, 1, 1);
        CHECK_EQ(back.values[0], 0.0f);
        CHECK_EQ(back.values[1], 1.0f);
    }
    SUBCASE("geometry mismatch") {
        FeatureMapSpec spec = make_synthetic_feature_map(1, 2, 2, 8, 0);
        const auto payload = encode_feature_map(spec, 64, 64);
        CHECK_THROWS_AS(decode_feature_map(payload, 1, 4, 4, 8), LengthMismatch);
    }
    SUBCASE("quantizer width bounds") {
        CHECK_THROWS_AS(make_synthetic_feature_map(1, 2, 2, 0, 0), ConfigError);
        FeatureMapSpec spec = make_synthetic_feature_map(1, 2, 2, 8, 0);
        spec.quant_bits = 17;
        CHECK_THROWS_AS(encode_feature_map(spec, 64, 64), ConfigError);
    }
}

TEST_CASE("the reference feature map is 131136 bits at compression rate 0.0208") {
    const FeatureMapSpec spec = make_synthetic_feature_map(4, 64, 64, 8, 1);
    const SemanticPayload payload = encode_feature_map(spec, 512, 512);
    CHECK_EQ(payload.bit_count, 131136);
    const PayloadMetrics metrics = payload_metrics(payload.bit_count, 512, 512);
    CHECK_GE(metrics.compression_rate, 0.0205);
    CHECK_LE(metrics.compression_rate, 0.0210);
    CHECK_EQ(metrics.bits_per_pixel, doctest::Approx(131136.0 / 262144.0));
}

TEST_CASE("segmentation maps round-trip") {
    const SegmentationGrid grid = make_segmentation_grid(ski(), 16, 16);
    const SemanticPayload payload = encode_segmentation_map(grid, 8, 512, 512);
    CHECK_EQ(payload.bit_count, 32 + 16 * 16 * 8);

    const SegmentationGrid back = decode_segmentation_map(payload, 8);
    CHECK_EQ(back.width_cells, 16);
    CHECK_EQ(back.height_cells, 16);
    CHECK(back.cells == grid.cells);
}

TEST_CASE("the default 128x128x8 segmentation payload is 131104 bits") {
    const SegmentationGrid grid = make_segmentation_grid(ski(), 128, 128);
    const SemanticPayload payload = encode_segmentation_map(grid, 8, 512, 512);
    CHECK_EQ(payload.bit_count, 131104);
}

TEST_CASE("segmentation cell overflow is caught") {
    SegmentationGrid grid;
    grid.width_cells = 1;
    grid.height_cells = 1;
    grid.cells = {256};  // needs 9 bits
    CHECK_THROWS_AS(encode_segmentation_map(grid, 8, 64, 64), ClassIdOverflow);
    CHECK_EQ(encode_segmentation_map(grid, 9, 64, 64).bit_count, 32 + 9);
}

TEST_CASE("compressed-image sizing follows configuration") {
    CodecConfig config;  // default 0.18 bpp
    CHECK_EQ(compressed_image_bits(config, 512, 512), 47192);
    config.compressed_image_bpp = 0.5;
    CHECK_EQ(compressed_image_bits(config, 100, 100), 8 * ((100 * 100 / 2 + 7) / 8));
    config.compressed_image_bytes = 1000;  // explicit byte count wins
    CHECK_EQ(compressed_image_bits(config, 512, 512), 8000);
    config.compressed_image_bytes.reset();
    config.compressed_image_bpp = -1.0;
    CHECK_THROWS_AS(compressed_image_bits(config, 512, 512), ConfigError);
}

TEST_CASE("payload containers carry a frozen 112-bit single-section overhead") {
    PayloadSection section;
    section.kind = SemanticKind::Objects;
    section.bit_count = 100;
    section.bytes.assign(13, 0xab);  // ceil(100 / 8)
    const SemanticPayload container = assemble_container({section}, 640, 480);
    CHECK_EQ(container.bit_count, 13 * 8 + 112);
    CHECK_EQ(container.kind, SemanticKind::Objects);
    CHECK_EQ(container.source_width, 640);

    int width = 0;
    int height = 0;
    const auto sections = parse_container(container, width, height);
    REQUIRE_EQ(sections.size(), 1);
    CHECK_EQ(width, 640);
    CHECK_EQ(height, 480);
    CHECK_EQ(sections[0].bit_count, 100);
    CHECK(sections[0].bytes == section.bytes);
}

TEST_CASE("multi-section containers round-trip in order") {
    PayloadSection a;
    a.kind = SemanticKind::Objects;
    a.bit_count = 16;
    a.bytes = {0x12, 0x34};
    PayloadSection b;
    b.kind = SemanticKind::FeatureMap;
    b.bit_count = 9;
    b.bytes = {0xff, 0x80};
    const SemanticPayload container = assemble_container({a, b}, 32, 32);

    int width = 0;
    int height = 0;
    const auto sections = parse_container(container, width, height);
    REQUIRE_EQ(sections.size(), 2);
    CHECK_EQ(sections[0].kind, SemanticKind::Objects);
    CHECK_EQ(sections[1].kind, SemanticKind::FeatureMap);
    CHECK_EQ(sections[1].bit_count, 9);
}

TEST_CASE("container parsing rejects damage") {
    PayloadSection section;
    section.kind = SemanticKind::Layouts;
    section.bit_count = 16;
    section.bytes = {1, 2};
    SemanticPayload container = assemble_container({section}, 32, 32);
    int width = 0;
    int height = 0;

    SUBCASE("bad magic") {
        container.bytes[0] = 'X';
        CHECK_THROWS_AS(parse_container(container, width, height), FormatError);
    }
    SUBCASE("truncated") {
        container.bytes.pop_back();
        container.bit_count -= 8;
        CHECK_THROWS_AS(parse_container(container, width, height), MalformedPayload);
    }
    SUBCASE("trailing bytes") {
        container.bytes.push_back(0);
        container.bit_count += 8;
        CHECK_THROWS_AS(parse_container(container, width, height), MalformedPayload);
    }
    SUBCASE("unknown kind byte") {
        container.bytes[9] = 0x7f;  // section kind field
        CHECK_THROWS_AS(parse_container(container, width, height), MalformedPayload);
    }
    SUBCASE("length disagreement at assembly") {
        section.bytes.push_back(9);
        CHECK_THROWS_AS(assemble_container({section}, 32, 32), LengthMismatch);
    }
    SUBCASE("assembly limits") {
        CHECK_THROWS_AS(assemble_container({}, 32, 32), ConfigError);
        CHECK_THROWS_AS(assemble_container({section}, 70000, 32), ConfigError);
        CHECK_THROWS_AS(assemble_container(std::vector<PayloadSection>(256, section), 32, 32),
                        ConfigError);
    }
}

TEST_CASE("payload files are the container bytes") {
    TempDir dir;
    PayloadSection section;
    section.kind = SemanticKind::ObjectsLayouts;
    section.bit_count = 24;
    section.bytes = {7, 8, 9};
    const SemanticPayload payload = assemble_container({section}, 128, 64);

    const std::string path = dir.file("payload.spay");
    save_payload_file(payload, path);
    const std::string raw = testsupport::slurp(path);
    CHECK_EQ(raw.size(), payload.bytes.size());
    CHECK_EQ(raw.substr(0, 4), "SPAY");

    const SemanticPayload loaded = load_payload_file(path);
    CHECK(loaded.bytes == payload.bytes);
    CHECK_EQ(loaded.bit_count, payload.bit_count);
    CHECK_EQ(loaded.kind, SemanticKind::ObjectsLayouts);
    CHECK_EQ(loaded.source_width, 128);
    CHECK_EQ(loaded.source_height, 64);
}
