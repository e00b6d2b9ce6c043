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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "semcom/codec.hpp"
#include "semcom/scene.hpp"

namespace semcom {

/// Downstream task the receiver will run on the semantics.
enum class TaskKind {
    Classification,
    Localization,
    Detection,
    Retrieval,
    Generation,
};

/// How much semantic detail the task instance wants.
enum class FidelityLevel {
    Minimal,
    Standard,
    Rich,
    Full,
};

std::string to_string(TaskKind task);
TaskKind task_kind_from_string(const std::string& token);

std::string to_string(FidelityLevel level);
FidelityLevel fidelity_level_from_string(const std::string& token);

/// A requested representation. `filtered` selects the filtered scene graph
/// for graph-bearing kinds; it is implied true for sg_filtered and is the
/// distinction between the "sg_layouts" and "sg_layouts_filtered" request
/// tokens.
struct KindRequest {
    SemanticKind kind = SemanticKind::Objects;
    bool filtered = false;

    bool operator==(const KindRequest&) const = default;
};

/// Canonical request token ("objects", "sg_filtered", "sg_layouts_filtered", ...).
std::string to_string(const KindRequest& request);
KindRequest kind_request_from_string(const std::string& token);

/// A (task, fidelity) -> kinds mapping. Entries absent from an override
/// policy fall back to the built-in defaults.
struct SelectionPolicy {
    std::map<std::pair<TaskKind, FidelityLevel>, std::vector<KindRequest>> table;
};

/// The built-in mapping:
///   classification -> objects at every fidelity
///   localization   -> layouts at every fidelity
///   detection      -> objects_layouts (minimal/standard), segmap (rich/full)
///   retrieval      -> objects, objects_layouts, sg_layouts_filtered, feature_map
///   generation     -> sg_filtered, then sg_layouts_filtered (standard/rich),
///                     feature_map (full)
SelectionPolicy default_policy();

/// Parses a policy override file. Line grammar (with # comments):
///   task,fidelity=kind[+kind...]
/// Unknown task/fidelity/kind tokens throw SchemaError.
SelectionPolicy load_policy_file(const std::string& path);
SelectionPolicy parse_policy(const std::string& text);

/// The representations to transmit for (task, fidelity): the override's
/// entry if present, else the default table's.
std::vector<KindRequest> required_semantics(TaskKind task, FidelityLevel level,
                                            const SelectionPolicy* override_policy = nullptr);

/// Encodes every requested representation of `scene` and packs them into
/// one SPAY container. Graph-bearing requests with `filtered` set read
/// `filtered_graph` and throw MissingFilteredGraph when it is null; other
/// kinds ignore it.
SemanticPayload assemble_payload(const SceneAnnotation& scene,
                                 const std::vector<KindRequest>& requests,
                                 const SceneGraph* filtered_graph, const CodecConfig& config);

} // namespace semcom
