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
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "semcom/scene.hpp"

namespace semcom {

/// Relation co-occurrence statistics over a corpus of annotated scenes.
///
/// Keys are label strings, not scene-local ids, so statistics transfer
/// across scenes. pair_counts[(s, o)] counts ordered object pairs that
/// co-occur with at least one relation; triple_counts[(s, p, o)] counts the
/// specific predicates. Ordered (std::map) keys make every iteration —
/// and hence the persisted byte stream — deterministic.
struct RelationStats {
    std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
    std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> triple_counts;
    std::uint64_t corpus_size = 0;  ///< Number of scenes accumulated.
};

/// Parses one scene annotation from JSON text. Labels are interned into
/// `vocabs` (open vocabulary: new labels get fresh ids). Throws ParseError
/// for malformed JSON, SchemaError for missing/mistyped fields, and
/// ValidationError when the parsed scene fails validate_scene().
SceneAnnotation load_scene(const std::string& json_text, VocabularySet& vocabs);

/// load_scene() over a file. Throws IoError when unreadable.
SceneAnnotation load_scene_file(const std::string& path, VocabularySet& vocabs);

/// Loads every *.json file under `dir` (non-recursive), sorted by filename
/// so vocabulary ids and statistics are reproducible.
std::vector<SceneAnnotation> load_corpus(const std::string& dir, VocabularySet& vocabs);

/// Adds one scene's relations into `stats`.
void accumulate_stats(RelationStats& stats, const SceneAnnotation& scene);

/// Builds statistics over a whole corpus.
RelationStats build_relation_stats(const std::vector<SceneAnnotation>& corpus);

/// P(predicate | subject_label, object_label): the fraction of corpus
/// relations on this ordered pair that used `predicate`. Unseen pairs have
/// probability 0 (no evidence the relation is common).
double conditional_probability(const RelationStats& stats, const std::string& subject_label,
                               const std::string& predicate, const std::string& object_label);

/// Serializes `stats` to the SCST binary format (sorted records, so the
/// bytes are a pure function of the statistics).
std::vector<std::uint8_t> serialize_stats(const RelationStats& stats);

/// Parses SCST bytes. Throws FormatError on bad magic/version/truncation.
/// pair_counts are rebuilt from triple records, which keeps the marginal
/// consistent with the triples by construction.
RelationStats deserialize_stats(const std::vector<std::uint8_t>& bytes);

/// File wrappers around serialize_stats()/deserialize_stats().
void save_stats_file(const RelationStats& stats, const std::string& path);
RelationStats load_stats_file(const std::string& path);

/// Serializes a scene back to the ingestion JSON schema (two-space indent,
/// trailing newline). Objects and relations keep their in-memory order, so
/// load_scene(scene_json(s)) reproduces s exactly.
std::string scene_json(const SceneAnnotation& scene);

} // namespace semcom
