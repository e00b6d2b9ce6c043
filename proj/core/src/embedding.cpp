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

#include "semcom/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

double dot(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) throw LengthMismatch("embedding dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm(const Embedding& v) {
    return std::sqrt(std::max(0.0, dot(v, v)));
}

void normalize(Embedding& v) {
    const double n = norm(v);
    if (n < 1e-12) throw ValidationError("cannot normalize a zero embedding");
    for (double& x : v) x /= n;
}

std::string to_string(EmbedderBackend backend) {
    switch (backend) {
        case EmbedderBackend::Hash: return "hash";
        case EmbedderBackend::File: return "file";
        case EmbedderBackend::Remote: return "remote";
    }
    throw SchemaError("unknown embedder backend value");
}

EmbedderBackend embedder_backend_from_string(const std::string& token) {
    if (token == "hash") return EmbedderBackend::Hash;
    if (token == "file") return EmbedderBackend::File;
    if (token == "remote") return EmbedderBackend::Remote;
    throw SchemaError("unknown embedder backend '" + token + "'");
}

namespace {

std::vector<std::string> tokenize(const std::string& sentence) {
    std::vector<std::string> tokens;
    std::istringstream in(sentence);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

/// Hashed bag-of-tokens backend. Each token maps to a pseudo-random unit
/// direction drawn from a PRNG seeded by (seed, hash(token)); a sentence is
/// the normalized sum of its token directions. Tokens are accumulated in
/// sorted order so reorderings of the same multiset produce bit-identical
/// vectors (floating-point addition is commutative but not associative).
class HashEmbedder final : public Embedder {
public:
    HashEmbedder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
        if (dim < 1) throw ConfigError("embedding dimension must be positive");
    }

    std::vector<Embedding> embed(const std::vector<std::string>& sentences) override {
        std::vector<Embedding> out;
        out.reserve(sentences.size());
        for (const auto& sentence : sentences) out.push_back(embed_one(sentence));
        return out;
    }

    int dim() const override { return dim_; }

private:
    Embedding token_direction(const std::string& token) const {
        Rng rng(mix_seed(seed_, fnv1a64(token)));
        Embedding v(static_cast<std::size_t>(dim_));
        for (double& x : v) x = rng.next_gaussian();
        normalize(v);
        return v;
    }

    Embedding embed_one(const std::string& sentence) const {
        std::vector<std::string> tokens = tokenize(sentence);
        if (tokens.empty()) {
            throw ValidationError("cannot embed a sentence with no tokens");
        }
        std::sort(tokens.begin(), tokens.end());
        Embedding acc(static_cast<std::size_t>(dim_), 0.0);
        for (const auto& token : tokens) {
            const Embedding v = token_direction(token);
            for (int i = 0; i < dim_; ++i) acc[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
        }
        if (norm(acc) < 1e-9) {
            // Token directions cancelled (astronomically unlikely); fall back
            // to a direction derived from the whole sentence.
            return token_direction(sentence + "\x01");
        }
        normalize(acc);
        return acc;
    }

    int dim_;
    std::uint64_t seed_;
};

/// Precomputed-embedding backend over an SEMB file.
class FileEmbedder final : public Embedder {
public:
    explicit FileEmbedder(const std::string& path) {
        table_float_ = load_embeddings_file(path, dim_);
        for (const auto& [sentence, vec] : table_float_) {
            Embedding v(vec.begin(), vec.end());
            normalize(v);
            table_.emplace(sentence, std::move(v));
        }
    }

    std::vector<Embedding> embed(const std::vector<std::string>& sentences) override {
        std::vector<Embedding> out;
        out.reserve(sentences.size());
        for (const auto& sentence : sentences) {
            auto it = table_.find(sentence);
            if (it == table_.end()) {
                throw MissingEmbedding("no stored embedding for sentence '" + sentence + "'");
            }
            out.push_back(it->second);
        }
        return out;
    }

    int dim() const override { return dim_; }

private:
    int dim_ = 0;
    std::map<std::string, std::vector<float>> table_float_;
    std::map<std::string, Embedding> table_;
};

/// HTTP backend speaking the JSON protocol:
///   request:  POST <endpoint>  {"texts": ["...", ...]}
///   response: 200              {"vectors": [[...], ...]}
/// Vectors are normalized client-side, so providers need not return exact
/// unit norms.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::string url, int dim, int timeout_ms, int max_retries)
        : dim_(dim), timeout_ms_(timeout_ms), max_retries_(max_retries) {
        // Split "scheme://host:port/path" into client base and request path.
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            throw ConfigError("embedding endpoint '" + url + "' must include a scheme");
        }
        const auto path_start = url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            base_ = url;
            path_ = "/";
        } else {
            base_ = url.substr(0, path_start);
            path_ = url.substr(path_start);
        }
    }

    std::vector<Embedding> embed(const std::vector<std::string>& sentences) override {
        nlohmann::json request;
        request["texts"] = sentences;
        const std::string body = request.dump();

        httplib::Result result;
        for (int attempt = 0; attempt <= max_retries_; ++attempt) {
            httplib::Client client(base_);
            client.set_connection_timeout(0, timeout_ms_ * 1000);
            client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
            client.set_write_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
            result = client.Post(path_, body, "application/json");
            if (result) break;
        }
        if (!result) {
            throw TimeoutError("embedding endpoint '" + base_ + path_ + "' unreachable after " +
                               std::to_string(max_retries_ + 1) + " attempts");
        }
        if (result->status < 200 || result->status >= 300) {
            throw ServiceError("embedding endpoint returned status " +
                                   std::to_string(result->status),
                               result->status);
        }

        nlohmann::json response;
        try {
            response = nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::parse_error&) {
            throw ServiceError("embedding endpoint returned malformed JSON", result->status);
        }
        if (!response.is_object() || !response.contains("vectors") ||
            !response["vectors"].is_array()) {
            throw ServiceError("embedding response lacks a 'vectors' array", result->status);
        }
        const auto& vectors = response["vectors"];
        if (vectors.size() != sentences.size()) {
            throw ServiceError("embedding response has " + std::to_string(vectors.size()) +
                                   " vectors for " + std::to_string(sentences.size()) + " texts",
                               result->status);
        }

        std::vector<Embedding> out;
        out.reserve(vectors.size());
        for (const auto& node : vectors) {
            if (!node.is_array() || static_cast<int>(node.size()) != dim_) {
                throw ServiceError("embedding response vector has wrong dimension", result->status);
            }
            Embedding v;
            v.reserve(node.size());
            for (const auto& x : node) {
                if (!x.is_number()) {
                    throw ServiceError("embedding response vector has non-numeric entries",
                                       result->status);
                }
                v.push_back(x.get<double>());
            }
            normalize(v);
            out.push_back(std::move(v));
        }
        return out;
    }

    int dim() const override { return dim_; }

private:
    int dim_;
    int timeout_ms_;
    int max_retries_;
    std::string base_;
    std::string path_;
};

} // namespace

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
    switch (config.backend) {
        case EmbedderBackend::Hash:
            return std::make_unique<HashEmbedder>(config.dim, config.seed);
        case EmbedderBackend::File:
            if (config.embeddings_path.empty()) {
                throw ConfigError("file embedder requires an embeddings path");
            }
            return std::make_unique<FileEmbedder>(config.embeddings_path);
        case EmbedderBackend::Remote: {
            std::string url = config.endpoint_url;
            if (url.empty()) {
                if (const char* env = std::getenv("SEMCOM_EMBED_URL")) url = env;
            }
            if (url.empty()) {
                throw ConfigError(
                    "remote embedder requires an endpoint (flag or SEMCOM_EMBED_URL)");
            }
            return std::make_unique<RemoteEmbedder>(url, config.dim, config.timeout_ms,
                                                    config.max_retries);
        }
    }
    throw ConfigError("unknown embedder backend");
}

std::vector<Embedding> embed(const EmbedderConfig& config,
                             const std::vector<std::string>& sentences) {
    return make_embedder(config)->embed(sentences);
}

namespace {

constexpr char kEmbMagic[4] = {'S', 'E', 'M', 'B'};
constexpr std::uint32_t kEmbVersion = 1;

} // namespace

void save_embeddings_file(const std::string& path, int dim,
                          const std::map<std::string, std::vector<float>>& table) {
    if (dim < 1) throw ConfigError("embedding dimension must be positive");
    for (const auto& [sentence, vec] : table) {
        if (static_cast<int>(vec.size()) != dim) {
            throw LengthMismatch("embedding for '" + sentence + "' has wrong dimension");
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    auto put_u32 = [&out](std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
        out.write(b, 4);
    };

    out.write(kEmbMagic, 4);
    put_u32(kEmbVersion);
    put_u32(static_cast<std::uint32_t>(dim));
    put_u32(static_cast<std::uint32_t>(table.size()));
    for (const auto& [sentence, vec] : table) {
        put_u32(static_cast<std::uint32_t>(sentence.size()));
        out.write(sentence.data(), static_cast<std::streamsize>(sentence.size()));
        static_assert(sizeof(float) == 4);
        for (float x : vec) {
            std::uint32_t bits;
            std::memcpy(&bits, &x, 4);
            put_u32(bits);
        }
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::map<std::string, std::vector<float>> load_embeddings_file(const std::string& path, int& dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embeddings file '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (pos + n > bytes.size()) throw FormatError("truncated embeddings file");
    };
    auto get_u32 = [&]() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
        return v;
    };

    need(4);
    for (int i = 0; i < 4; ++i) {
        if (bytes[pos + static_cast<std::size_t>(i)] != static_cast<std::uint8_t>(kEmbMagic[i])) {
            throw FormatError("bad magic for embeddings file");
        }
    }
    pos += 4;
    const std::uint32_t version = get_u32();
    if (version != kEmbVersion) {
        throw FormatError("unsupported embeddings version " + std::to_string(version));
    }
    const std::uint32_t file_dim = get_u32();
    if (file_dim == 0) throw FormatError("embeddings file declares dimension 0");
    const std::uint32_t count = get_u32();

    std::map<std::string, std::vector<float>> table;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t len = get_u32();
        need(len);
        std::string sentence(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                             bytes.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
        std::vector<float> vec(file_dim);
        for (std::uint32_t d = 0; d < file_dim; ++d) {
            const std::uint32_t bits = get_u32();
            std::memcpy(&vec[d], &bits, 4);
        }
        table.emplace(std::move(sentence), std::move(vec));
    }
    if (pos != bytes.size()) throw FormatError("trailing bytes after embeddings records");
    dim = static_cast<int>(file_dim);
    return table;
}

} // namespace semcom
