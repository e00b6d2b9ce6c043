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
#include <memory>
#include <string>
#include <vector>

namespace semcom {

/// Sentence embedding, always unit-norm (within 1e-6) once produced by a
/// backend.
using Embedding = std::vector<double>;

double dot(const Embedding& a, const Embedding& b);
double norm(const Embedding& v);

/// Scales `v` to unit norm in place. Throws ValidationError on (near-)zero
/// input.
void normalize(Embedding& v);

enum class EmbedderBackend {
    Hash,    ///< Deterministic hashed bag-of-tokens embedding, no model needed.
    File,    ///< Precomputed embeddings loaded from an SEMB file.
    Remote,  ///< HTTP embedding service speaking the JSON texts/vectors protocol.
};

std::string to_string(EmbedderBackend backend);
EmbedderBackend embedder_backend_from_string(const std::string& token);

struct EmbedderConfig {
    EmbedderBackend backend = EmbedderBackend::Hash;
    int dim = 384;               ///< Output dimension (hash backend; remote is checked against it).
    std::uint64_t seed = 0;      ///< Hash-backend seed.
    std::string embeddings_path; ///< File backend: SEMB file to load.
    std::string endpoint_url;    ///< Remote backend: full URL; falls back to $SEMCOM_EMBED_URL.
    int timeout_ms = 5000;       ///< Remote backend: per-attempt timeout.
    int max_retries = 2;         ///< Remote backend: retries after the first attempt.
};

/// Uniform interface over the three backends.
class Embedder {
public:
    virtual ~Embedder() = default;

    /// Embeds a batch of sentences, one unit-norm vector per sentence, in
    /// input order.
    virtual std::vector<Embedding> embed(const std::vector<std::string>& sentences) = 0;

    virtual int dim() const = 0;
};

/// Instantiates the backend selected by `config`. For the remote backend an
/// empty endpoint_url falls back to the SEMCOM_EMBED_URL environment
/// variable; if both are empty this throws ConfigError.
std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

/// One-shot convenience: make_embedder(config)->embed(sentences).
std::vector<Embedding> embed(const EmbedderConfig& config,
                             const std::vector<std::string>& sentences);

/// Embedding store (sentence -> float vector) serialization in the SEMB
/// binary format. Records are sorted by sentence, so files are canonical.
void save_embeddings_file(const std::string& path, int dim,
                          const std::map<std::string, std::vector<float>>& table);

/// Loads an SEMB file. Throws FormatError on bad magic/version/truncation or
/// inconsistent dimensions.
std::map<std::string, std::vector<float>> load_embeddings_file(const std::string& path, int& dim);

} // namespace semcom
