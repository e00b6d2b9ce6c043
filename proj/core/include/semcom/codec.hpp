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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semcom/scene.hpp"

namespace semcom {

/// Sizing and quantization knobs for the payload encoders.
struct CodecConfig {
    int segmap_width_cells = 128;
    int segmap_height_cells = 128;
    int segmap_bits_per_cell = 8;

    int feature_channels = 4;
    int feature_width = 64;
    int feature_height = 64;
    int feature_quant_bits = 8;
    std::uint64_t feature_seed = 0;  ///< Stream for synthetic feature values.

    /// Conventional-codec size accounting: explicit byte count wins;
    /// otherwise bits-per-pixel on the true resolution.
    std::optional<std::uint64_t> compressed_image_bytes;
    double compressed_image_bpp = 0.18;
};

/// An encoded semantic representation ready for segmentation + transmission.
/// `bit_count` is the number of meaningful bits; `bytes` is the MSB-first
/// packing (its last byte may be zero-padded).
struct SemanticPayload {
    SemanticKind kind = SemanticKind::Objects;
    std::vector<std::uint8_t> bytes;
    std::uint64_t bit_count = 0;
    int source_width = 0;
    int source_height = 0;
};

/// Renders a text-representable kind (objects / layouts / objects_layouts /
/// the scene-graph kinds) as ASCII. Scene-graph kinds emit one
/// "subject predicate object" line per relation in relation order; sg and
/// sg_filtered additionally list relation-free objects as bare label lines;
/// sg_layouts instead appends a blank line plus an objects_layouts block
/// covering every object. Throws ConfigError for non-text kinds and
/// ValidationError for non-ASCII labels.
std::string render_text_semantics(SemanticKind kind, const SceneGraph& graph);

/// Wraps render_text_semantics() as a payload: 8 bits per ASCII character.
SemanticPayload encode_text_semantics(SemanticKind kind, const SceneGraph& graph,
                                      int source_width, int source_height);

/// Structured view of a decoded text payload; which fields are populated
/// depends on the kind (see render_text_semantics()).
struct DecodedTextSemantics {
    struct Triple {
        std::string subject;
        std::string predicate;
        std::string object;

        bool operator==(const Triple&) const = default;
    };

    std::vector<std::string> object_labels;   ///< objects kind.
    std::vector<BoundingBox> boxes;           ///< layouts kind.
    std::vector<std::pair<std::string, BoundingBox>> layout_entries;  ///< objects_layouts / sg_layouts.
    std::vector<Triple> triples;              ///< scene-graph kinds.
    std::vector<std::string> isolated_labels; ///< sg / sg_filtered bare lines.
};

/// Parses a text payload back into structure. Throws MalformedPayload on
/// non-byte-aligned bit counts, malformed box syntax (non-numeric or wrong
/// arity), or lines that fit no production of the kind's grammar.
DecodedTextSemantics decode_text_semantics(SemanticKind kind, const SemanticPayload& payload);

/// Quantizes a feature tensor: a 64-bit header holding scale and offset as
/// two little-endian float32 values, then one quant_bits code per value in
/// channel-major order. The affine quantizer spans [min, max] of the values;
/// a constant tensor degenerates gracefully (scale 0, all codes 0).
SemanticPayload encode_feature_map(const FeatureMapSpec& spec, int source_width,
                                   int source_height);

/// Dequantizes a feature-map payload with known geometry. Values come back
/// as offset + scale * code. Throws LengthMismatch when the payload size
/// does not match the geometry.
FeatureMapSpec decode_feature_map(const SemanticPayload& payload, int channels, int width,
                                  int height, int quant_bits);

/// Packs a segmentation grid: u16 width_cells + u16 height_cells header
/// (little-endian), then bits_per_cell bits per cell, row-major. Throws
/// ClassIdOverflow when a cell value does not fit.
SemanticPayload encode_segmentation_map(const SegmentationGrid& grid, int bits_per_cell,
                                        int source_width, int source_height);

/// Unpacks a segmentation payload (geometry comes from its header).
SegmentationGrid decode_segmentation_map(const SemanticPayload& payload, int bits_per_cell);

/// Size accounting for a conventional image codec at the configured
/// operating point; whole bytes, so always a multiple of 8 bits.
std::uint64_t compressed_image_bits(const CodecConfig& config, int source_width,
                                    int source_height);

/// One record inside a payload container.
struct PayloadSection {
    SemanticKind kind = SemanticKind::Objects;
    std::vector<std::uint8_t> bytes;
    std::uint64_t bit_count = 0;
};

/// Packs sections into the SPAY container: "SPAY" magic, u16 source width,
/// u16 source height, u8 section count, then per section a u8 kind, u32 bit
/// length and the section bytes (zero-padded to a byte boundary). The
/// returned payload's bit_count counts the whole container (8 x bytes),
/// since that is what gets transmitted.
SemanticPayload assemble_container(const std::vector<PayloadSection>& sections, int source_width,
                                   int source_height);

/// Parses an SPAY container. Throws FormatError on bad magic and
/// MalformedPayload on truncation or inconsistent lengths.
std::vector<PayloadSection> parse_container(const SemanticPayload& payload, int& source_width,
                                            int& source_height);

/// Payload size relative to the source image: bits per pixel, and the
/// compression rate against a raw 24-bit RGB baseline.
struct PayloadMetrics {
    double bits_per_pixel = 0.0;
    double compression_rate = 0.0;
};

PayloadMetrics payload_metrics(std::uint64_t bit_count, int source_width, int source_height);

/// Writes/reads a payload container to/from disk (the file *is* the SPAY
/// container byte stream).
void save_payload_file(const SemanticPayload& payload, const std::string& path);
SemanticPayload load_payload_file(const std::string& path);

} // namespace semcom
