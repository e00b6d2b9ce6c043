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

#include "semcom/filter.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

void check_threshold(double tau, const char* name) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0, 1]");
    }
}

void finalize_report(FilterReport& report) {
    report.retention_fraction =
        report.input_relations == 0
            ? 1.0
            : static_cast<double>(report.kept_relations) /
                  static_cast<double>(report.input_relations);
}

} // namespace

FilterResult drop_predictable_relations(const SceneGraph& graph, const RelationStats& stats,
                                        double tau_f) {
    check_threshold(tau_f, "tau_f");

    FilterResult result;
    result.graph.objects = graph.objects;
    result.report.input_relations = graph.relations.size();

    for (const auto& rel : graph.relations) {
        const ObjectInstance* subject = graph.find_object(rel.subject_id);
        const ObjectInstance* object = graph.find_object(rel.object_id);
        if (subject == nullptr || object == nullptr) {
            throw ValidationError("relation references unknown object id");
        }
        const double p = conditional_probability(stats, subject->label, rel.predicate,
                                                 object->label);
        if (p >= tau_f) {
            result.report.removed_predictable.push_back({rel, p});
        } else {
            result.graph.relations.push_back(rel);
        }
    }
    result.report.kept_relations = result.graph.relations.size();
    finalize_report(result.report);
    return result;
}

double residual_norm(std::size_t k, const std::vector<Embedding>& vectors) {
    if (k >= vectors.size()) throw LengthMismatch("residual index out of range");
    Embedding r = vectors[k];
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (j == k) continue;
        const Embedding& g = vectors[j];
        const double coeff = dot(r, g);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= coeff * g[i];
    }
    return norm(r);
}

double span_residual_oracle(std::size_t k, const std::vector<Embedding>& vectors) {
    if (k >= vectors.size()) throw LengthMismatch("residual index out of range");

    // Build an orthonormal basis of span{vectors[j] : j != k} with modified
    // Gram-Schmidt, skipping directions already covered.
    std::vector<Embedding> basis;
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (j == k) continue;
        Embedding v = vectors[j];
        for (const auto& u : basis) {
            const double coeff = dot(v, u);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coeff * u[i];
        }
        const double n = norm(v);
        if (n > 1e-10) {
            for (double& x : v) x /= n;
            basis.push_back(std::move(v));
        }
    }

    Embedding r = vectors[k];
    for (const auto& u : basis) {
        const double coeff = dot(r, u);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= coeff * u[i];
    }
    return norm(r);
}

FilterResult drop_redundant_relations(const SceneGraph& graph, Embedder& embedder, double tau_r) {
    check_threshold(tau_r, "tau_r");

    FilterResult result;
    result.graph.objects = graph.objects;
    result.report.input_relations = graph.relations.size();

    const std::vector<SubGraphSentence> sentences = to_sentences(graph);
    std::vector<std::string> texts;
    texts.reserve(sentences.size());
    for (const auto& s : sentences) texts.push_back(s.text());

    // One batched call; redundancy rounds reuse the same vectors.
    std::vector<Embedding> vectors;
    if (!texts.empty()) vectors = embedder.embed(texts);

    std::vector<std::size_t> survivors(vectors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) survivors[i] = i;

    for (;;) {
        if (survivors.empty()) break;

        // Residual of each survivor against the other survivors (original
        // vectors, ascending survivor order).
        std::size_t worst_pos = survivors.size();
        double worst_residual = std::numeric_limits<double>::infinity();
        std::vector<Embedding> current;
        current.reserve(survivors.size());
        for (std::size_t idx : survivors) current.push_back(vectors[idx]);

        for (std::size_t pos = 0; pos < survivors.size(); ++pos) {
            const double res = residual_norm(pos, current);
            // Ties resolve to the largest original index; scanning ascending
            // with >= keeps the latest minimum seen.
            if (res <= worst_residual) {
                worst_residual = res;
                worst_pos = pos;
            }
        }

        if (!(worst_residual < tau_r)) break;

        const std::size_t removed_index = survivors[worst_pos];
        result.report.removed_redundant.push_back(
            {graph.relations[removed_index], texts[removed_index], worst_residual});
        survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(worst_pos));
    }

    for (std::size_t idx : survivors) result.graph.relations.push_back(graph.relations[idx]);
    result.report.kept_relations = result.graph.relations.size();
    finalize_report(result.report);
    return result;
}

FilterResult filter_scene_graph(const SceneGraph& graph, const RelationStats& stats,
                                Embedder& embedder, const FilterConfig& config) {
    FilterResult stage1 = drop_predictable_relations(graph, stats, config.tau_f);
    FilterResult stage2 = drop_redundant_relations(stage1.graph, embedder, config.tau_r);

    FilterResult merged;
    merged.graph = std::move(stage2.graph);
    merged.report.removed_predictable = std::move(stage1.report.removed_predictable);
    merged.report.removed_redundant = std::move(stage2.report.removed_redundant);
    merged.report.input_relations = graph.relations.size();
    merged.report.kept_relations = merged.graph.relations.size();
    finalize_report(merged.report);
    return merged;
}

std::string filter_report_json(const FilterReport& report, const FilterConfig& config,
                               std::uint64_t seed) {
    nlohmann::json doc;
    doc["tau_f"] = config.tau_f;
    doc["tau_r"] = config.tau_r;
    doc["seed"] = seed;
    doc["input_relations"] = report.input_relations;
    doc["kept_relations"] = report.kept_relations;
    doc["retention_fraction"] = report.retention_fraction;

    auto relation_node = [](const RelationInstance& rel) {
        nlohmann::json node;
        node["subject_id"] = rel.subject_id;
        node["predicate"] = rel.predicate;
        node["object_id"] = rel.object_id;
        return node;
    };

    doc["removed_predictable"] = nlohmann::json::array();
    for (const auto& removal : report.removed_predictable) {
        nlohmann::json node = relation_node(removal.relation);
        node["probability"] = removal.probability;
        doc["removed_predictable"].push_back(std::move(node));
    }
    doc["removed_redundant"] = nlohmann::json::array();
    for (const auto& removal : report.removed_redundant) {
        nlohmann::json node = relation_node(removal.relation);
        node["sentence"] = removal.sentence;
        node["residual"] = removal.residual;
        doc["removed_redundant"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

} // namespace semcom
