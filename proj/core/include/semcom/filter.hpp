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
#include <string>
#include <vector>

#include "semcom/embedding.hpp"
#include "semcom/ingest.hpp"
#include "semcom/scene.hpp"

namespace semcom {

/// Thresholds for the two filtering stages. Both default to 0.8 and must lie
/// in [0, 1].
struct FilterConfig {
    double tau_f = 0.8;  ///< Conditional-probability threshold (stage 1).
    double tau_r = 0.8;  ///< Residual-norm threshold (stage 2).
};

/// A relation dropped by stage 1 because its predicate is statistically
/// predictable from the object pair alone.
struct PredictableRemoval {
    RelationInstance relation;
    double probability = 0.0;  ///< P(predicate | subject, object) that crossed tau_f.
};

/// A relation dropped by stage 2 because its sentence lies (almost) in the
/// span of the surviving sentences.
struct RedundantRemoval {
    RelationInstance relation;
    std::string sentence;
    double residual = 0.0;  ///< Residual norm that fell below tau_r.
};

/// What the filter did and why.
struct FilterReport {
    std::vector<PredictableRemoval> removed_predictable;
    std::vector<RedundantRemoval> removed_redundant;
    std::size_t input_relations = 0;
    std::size_t kept_relations = 0;
    /// kept / input; defined as 1.0 for relation-free graphs.
    double retention_fraction = 1.0;
};

struct FilterResult {
    SceneGraph graph;
    FilterReport report;
};

/// Stage 1: drops every relation whose predicate probability given its
/// object pair is >= tau_f (the boundary is dropped). Probabilities come
/// from corpus statistics; pairs never seen in the corpus have probability 0
/// and are always kept. Objects are never removed. Single pass in relation
/// order; removals do not affect other relations' probabilities.
FilterResult drop_predictable_relations(const SceneGraph& graph, const RelationStats& stats,
                                        double tau_f);

/// Norm of what remains of vectors[k] after sequentially projecting out
/// every other vector in ascending index order:
///   r = v_k;  for j != k ascending:  r -= (r . v_j) v_j
/// For unit-norm inputs the result lies in [0, 1] and never increases as
/// more vectors are projected out.
double residual_norm(std::size_t k, const std::vector<Embedding>& vectors);

/// Independent check value: norm of the projection of vectors[k] onto the
/// orthogonal complement of span{vectors[j] : j != k}, computed via
/// modified Gram-Schmidt. Agrees exactly with residual_norm() whenever the
/// other vectors are mutually orthogonal, and is a lower bound in general.
double span_residual_oracle(std::size_t k, const std::vector<Embedding>& vectors);

/// Stage 2: embeds each relation sentence once (a single batched embedder
/// call), then repeatedly removes the relation with the smallest residual
/// norm among survivors while that minimum is < tau_r. Ties pick the largest
/// index, so of two identical sentences the later one is dropped first.
FilterResult drop_redundant_relations(const SceneGraph& graph, Embedder& embedder, double tau_r);

/// Full pipeline: stage 1 then stage 2, with a merged report.
FilterResult filter_scene_graph(const SceneGraph& graph, const RelationStats& stats,
                                Embedder& embedder, const FilterConfig& config);

/// Renders a report as a deterministic JSON document (for --report output).
std::string filter_report_json(const FilterReport& report, const FilterConfig& config,
                               std::uint64_t seed);

} // namespace semcom
