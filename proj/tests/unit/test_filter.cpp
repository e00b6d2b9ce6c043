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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semcom/embedding.hpp"
#include "semcom/errors.hpp"
#include "semcom/filter.hpp"
#include "semcom/ingest.hpp"
#include "semcom/rng.hpp"
#include "semcom/scene.hpp"
#include "test_support.hpp"

using namespace semcom;
using testsupport::TempDir;
using testsupport::fixture_path;

namespace {

Embedding axis(std::size_t dim, std::size_t index, double value = 1.0) {
    Embedding v(dim, 0.0);
    v[index] = value;
    return v;
}

/// Embedder backed by an in-memory sentence table (no normalization).
class TableEmbedder final : public Embedder {
public:
    TableEmbedder(int dim, std::map<std::string, Embedding> table)
        : dim_(dim), table_(std::move(table)) {}

    std::vector<Embedding> embed(const std::vector<std::string>& sentences) override {
        std::vector<Embedding> out;
        for (const auto& s : sentences) out.push_back(table_.at(s));
        return out;
    }
    int dim() const override { return dim_; }

private:
    int dim_;
    std::map<std::string, Embedding> table_;
};

/// Chain graph with `n` relations i: (obj i) p_i (obj i+1); sentences are
/// "o<i> p<i> o<i+1>".
SceneGraph chain_graph(int n) {
    SceneGraph graph;
    for (int i = 0; i <= n; ++i) {
        graph.objects.push_back({i, "o" + std::to_string(i), i, {1, 1, 2, 2}});
    }
    for (int i = 0; i < n; ++i) {
        graph.relations.push_back({i, i + 1, "p" + std::to_string(i), i});
    }
    return graph;
}

const SceneAnnotation& ski_scene() {
    static VocabularySet vocabs;
    static const SceneAnnotation scene = load_scene_file(fixture_path("ski_scene.json"), vocabs);
    return scene;
}

const RelationStats& ski_stats() {
    static const RelationStats stats = [] {
        VocabularySet vocabs;
        return build_relation_stats(load_corpus(fixture_path("stats_corpus"), vocabs));
    }();
    return stats;
}

/// File-backend embeddings for the ski fixture authored so that
/// "pole in_hand hand" is (almost) inside the span of the other two:
/// s3 = 0.95*(e1+e2)/sqrt(2) + sqrt(0.0975)*e3.
std::unique_ptr<Embedder> ski_file_embedder(const TempDir& dir) {
    const float a = static_cast<float>(0.95 / std::sqrt(2.0));
    const float b = static_cast<float>(std::sqrt(0.0975));
    save_embeddings_file(dir.file("ski.semb"), 8,
                         {{"man riding ski", {1, 0, 0, 0, 0, 0, 0, 0}},
                          {"man holding pole", {0, 1, 0, 0, 0, 0, 0, 0}},
                          {"pole in_hand hand", {a, a, b, 0, 0, 0, 0, 0}}});
    EmbedderConfig config;
    config.backend = EmbedderBackend::File;
    config.embeddings_path = dir.file("ski.semb");
    return make_embedder(config);
}

} // namespace

TEST_CASE("stage 1 removes exactly the high-probability relations") {
    const FilterResult result = drop_predictable_relations(ski_scene().graph, ski_stats(), 0.8);

    REQUIRE_EQ(result.report.removed_predictable.size(), 3);
    CHECK_EQ(result.report.removed_predictable[0].relation.predicate, "has");
    CHECK_EQ(result.report.removed_predictable[0].probability, doctest::Approx(0.9));
    CHECK_EQ(result.report.removed_predictable[1].relation.predicate, "has");
    CHECK_EQ(result.report.removed_predictable[1].probability, 1.0);
    // P = 4/5 lands exactly on tau_f = 0.8 and is removed.
    CHECK_EQ(result.report.removed_predictable[2].relation.predicate, "under");
    CHECK_EQ(result.report.removed_predictable[2].probability, 4.0 / 5.0);

    REQUIRE_EQ(result.graph.relations.size(), 3);
    CHECK_EQ(result.graph.relations[0].predicate, "riding");
    CHECK_EQ(result.graph.relations[1].predicate, "holding");
    CHECK_EQ(result.graph.relations[2].predicate, "in_hand");
    CHECK_EQ(result.graph.objects.size(), 5);  // objects always survive
}

TEST_CASE("stage 1 keeps unseen pairs regardless of threshold") {
    SceneGraph graph = chain_graph(2);
    RelationStats stats;  // empty corpus: every pair unseen
    const FilterResult result = drop_predictable_relations(graph, stats, 0.0);
    // tau_f = 0 removes everything observed (P >= 0), but unseen pairs have
    // P = 0 which still crosses a zero threshold, so they are removed too...
    // except the contract pins unseen pairs to probability 0 and 0 >= 0
    // holds. Verify the exact boundary contract instead with tau_f = 0.5.
    CHECK_EQ(result.graph.relations.size(), 0);

    const FilterResult kept = drop_predictable_relations(graph, stats, 0.5);
    CHECK_EQ(kept.graph.relations.size(), 2);
    CHECK(kept.report.removed_predictable.empty());
}

TEST_CASE("residual_norm matches hand-computed values") {
    const std::vector<Embedding> dup{axis(4, 0), axis(4, 1), axis(4, 0)};
    CHECK_EQ(residual_norm(2, dup), doctest::Approx(0.0));
    CHECK_EQ(residual_norm(0, dup), doctest::Approx(0.0));
    CHECK_EQ(residual_norm(1, dup), doctest::Approx(1.0));

    const double inv = 1.0 / std::sqrt(2.0);
    const std::vector<Embedding> tilted{axis(4, 0), {inv, inv, 0, 0}};
    CHECK_EQ(residual_norm(1, tilted), doctest::Approx(inv));
    CHECK_EQ(residual_norm(0, tilted), doctest::Approx(inv));

    CHECK_THROWS_AS(residual_norm(5, tilted), LengthMismatch);
}

TEST_CASE("sequential projection and the span oracle differ on correlated sets") {
    // Others {e1, (e1+e2)/sqrt(2)} span the full e1-e2 plane, so the span
    // oracle sends e2 to zero; the one-pass sequential projection leaves a
    // 1/sqrt(2) residue. Algorithm 2 is defined by the sequential variant.
    const double inv = 1.0 / std::sqrt(2.0);
    const std::vector<Embedding> vectors{axis(4, 0), {inv, inv, 0, 0}, axis(4, 1)};
    CHECK_EQ(span_residual_oracle(2, vectors), doctest::Approx(0.0).epsilon(1e-9));
    CHECK_EQ(residual_norm(2, vectors), doctest::Approx(inv));
}

TEST_CASE("sequential projection equals the span oracle on orthogonal sets") {
    Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 8 + (rng.next_u64() % 24);
        const std::size_t count = 2 + (rng.next_u64() % 5);
        // Build an orthonormal family by Gram-Schmidt over random vectors.
        std::vector<Embedding> basis;
        while (basis.size() < count) {
            Embedding v(dim);
            for (auto& x : v) x = rng.next_gaussian();
            for (const auto& b : basis) {
                const double c = dot(v, b);
                for (std::size_t i = 0; i < dim; ++i) v[i] -= c * b[i];
            }
            if (norm(v) < 1e-6) continue;
            normalize(v);
            basis.push_back(std::move(v));
        }
        // Mix a test vector from the basis plus an orthogonal component.
        for (std::size_t k = 0; k < basis.size(); ++k) {
            CHECK_LT(std::abs(residual_norm(k, basis) - span_residual_oracle(k, basis)), 1e-9);
        }
    }
}

TEST_CASE("stage 2 removes the in-span sentence on the ski fixture") {
    TempDir dir;
    auto embedder = ski_file_embedder(dir);
    const FilterResult stage1 = drop_predictable_relations(ski_scene().graph, ski_stats(), 0.8);
    const FilterResult result = drop_redundant_relations(stage1.graph, *embedder, 0.8);

    REQUIRE_EQ(result.report.removed_redundant.size(), 1);
    CHECK_EQ(result.report.removed_redundant[0].sentence, "pole in_hand hand");
    CHECK_EQ(result.report.removed_redundant[0].residual,
             doctest::Approx(std::sqrt(0.0975)).epsilon(1e-4));
    REQUIRE_EQ(result.graph.relations.size(), 2);
    CHECK_EQ(result.graph.relations[0].predicate, "riding");
    CHECK_EQ(result.graph.relations[1].predicate, "holding");
}

TEST_CASE("exact duplicates lose the later copy") {
    SceneGraph graph = chain_graph(3);
    TableEmbedder embedder(4, {{"o0 p0 o1", axis(4, 0)},
                               {"o1 p1 o2", axis(4, 1)},
                               {"o2 p2 o3", axis(4, 0)}});
    const FilterResult result = drop_redundant_relations(graph, embedder, 0.8);
    REQUIRE_EQ(result.report.removed_redundant.size(), 1);
    CHECK_EQ(result.report.removed_redundant[0].sentence, "o2 p2 o3");
    CHECK_EQ(result.report.removed_redundant[0].residual, 0.0);
    CHECK_EQ(result.graph.relations.size(), 2);
}

TEST_CASE("removal below the threshold is strict") {
    // Residual 0 with tau_r = 0: 0 < 0 is false, so even a perfect
    // duplicate survives at a zero threshold.
    SceneGraph graph = chain_graph(2);
    TableEmbedder embedder(4, {{"o0 p0 o1", axis(4, 0)}, {"o1 p1 o2", axis(4, 0)}});
    const FilterResult keep = drop_redundant_relations(graph, embedder, 0.0);
    CHECK_EQ(keep.graph.relations.size(), 2);
    const FilterResult drop = drop_redundant_relations(graph, embedder, 0.25);
    CHECK_EQ(drop.graph.relations.size(), 1);
}

TEST_CASE("mutually orthogonal sentences pass through unchanged") {
    SceneGraph graph = chain_graph(4);
    std::map<std::string, Embedding> table;
    for (int i = 0; i < 4; ++i) {
        table["o" + std::to_string(i) + " p" + std::to_string(i) + " o" + std::to_string(i + 1)] =
            axis(8, static_cast<std::size_t>(i));
    }
    TableEmbedder embedder(8, table);
    const FilterResult result = drop_redundant_relations(graph, embedder, 0.8);
    CHECK_EQ(result.graph.relations.size(), 4);
    CHECK(result.report.removed_redundant.empty());
}

TEST_CASE("threshold configuration is validated") {
    SceneGraph graph = chain_graph(1);
    RelationStats stats;
    TableEmbedder embedder(4, {{"o0 p0 o1", axis(4, 0)}});
    CHECK_THROWS_AS(drop_predictable_relations(graph, stats, 1.5), ConfigError);
    CHECK_THROWS_AS(drop_predictable_relations(graph, stats, -0.1), ConfigError);
    CHECK_THROWS_AS(drop_redundant_relations(graph, embedder, 2.0), ConfigError);
}

TEST_CASE("the full pipeline composes both stages on the ski fixture") {
    TempDir dir;
    auto embedder = ski_file_embedder(dir);
    FilterConfig config;  // defaults: tau_f = tau_r = 0.8
    const FilterResult result =
        filter_scene_graph(ski_scene().graph, ski_stats(), *embedder, config);

    CHECK_EQ(result.report.input_relations, 6);
    CHECK_EQ(result.report.kept_relations, 2);
    CHECK_EQ(result.report.retention_fraction, doctest::Approx(1.0 / 3.0));
    CHECK_EQ(result.report.removed_predictable.size(), 3);
    CHECK_EQ(result.report.removed_redundant.size(), 1);
    CHECK_EQ(result.graph.objects.size(), 5);

    // Monotone shrinkage, object preservation.
    CHECK_LE(result.graph.relations.size(), ski_scene().graph.relations.size());
}

TEST_CASE("empty graphs filter to empty reports with retention 1") {
    SceneGraph graph;
    graph.objects.push_back({0, "man", 0, {1, 1, 2, 2}});
    RelationStats stats;
    TableEmbedder embedder(4, {});
    FilterConfig config;
    const FilterResult result = filter_scene_graph(graph, stats, embedder, config);
    CHECK_EQ(result.report.input_relations, 0);
    CHECK_EQ(result.report.retention_fraction, 1.0);
    CHECK_EQ(result.graph.objects.size(), 1);
}

TEST_CASE("filter reports serialize to parseable JSON with the seed echoed") {
    TempDir dir;
    auto embedder = ski_file_embedder(dir);
    FilterConfig config;
    const FilterResult result =
        filter_scene_graph(ski_scene().graph, ski_stats(), *embedder, config);
    const std::string text = filter_report_json(result.report, config, 99);

    const auto doc = nlohmann::json::parse(text);
    CHECK_EQ(doc.at("seed").get<std::uint64_t>(), 99);
    CHECK_EQ(doc.at("tau_f").get<double>(), 0.8);
    CHECK_EQ(doc.at("input_relations").get<int>(), 6);
    CHECK_EQ(doc.at("kept_relations").get<int>(), 2);
    CHECK_EQ(doc.at("removed_predictable").size(), 3);
    CHECK_EQ(doc.at("removed_redundant").size(), 1);
    CHECK_EQ(doc.at("removed_redundant")[0].at("sentence"), "pole in_hand hand");
    CHECK_EQ(filter_report_json(result.report, config, 99), text);  // stable bytes
}
