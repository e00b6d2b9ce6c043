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

#include "semcom/codec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "semcom/bitio.hpp"
#include "semcom/errors.hpp"

namespace semcom {

namespace {

bool is_text_kind(SemanticKind kind) {
    switch (kind) {
        case SemanticKind::Objects:
        case SemanticKind::Layouts:
        case SemanticKind::ObjectsLayouts:
        case SemanticKind::SceneGraphFull:
        case SemanticKind::SceneGraphFiltered:
        case SemanticKind::SceneGraphLayouts:
            return true;
        default:
            return false;
    }
}

void require_ascii(const std::string& s) {
    for (unsigned char c : s) {
        if (c > 127) throw ValidationError("text payloads must be ASCII");
    }
}

std::string box_text(const BoundingBox& box) {
    return std::to_string(box.x) + "," + std::to_string(box.y) + "," + std::to_string(box.w) +
           "," + std::to_string(box.h);
}

std::string objects_layouts_block(const SceneGraph& graph) {
    std::string out;
    for (const auto& obj : graph.objects) {
        out += obj.label;
        out += ' ';
        out += box_text(obj.box);
        out += '\n';
    }
    return out;
}

/// Object ids that appear in at least one relation.
std::set<int> connected_ids(const SceneGraph& graph) {
    std::set<int> ids;
    for (const auto& rel : graph.relations) {
        ids.insert(rel.subject_id);
        ids.insert(rel.object_id);
    }
    return ids;
}

std::string sentence_block(const SceneGraph& graph, bool with_isolated) {
    std::string out;
    for (const auto& sentence : to_sentences(graph)) {
        out += sentence.text();
        out += '\n';
    }
    if (with_isolated) {
        const std::set<int> connected = connected_ids(graph);
        for (const auto& obj : graph.objects) {
            if (connected.count(obj.id) == 0) {
                out += obj.label;
                out += '\n';
            }
        }
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            throw MalformedPayload("text payload has an unterminated line");
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

int parse_box_int(std::string_view piece) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size()) {
        throw MalformedPayload("box field '" + std::string(piece) + "' is not an integer");
    }
    return value;
}

BoundingBox parse_box(const std::string& text) {
    std::vector<std::string_view> pieces;
    std::size_t start = 0;
    const std::string_view view(text);
    while (true) {
        const std::size_t comma = view.find(',', start);
        if (comma == std::string_view::npos) {
            pieces.push_back(view.substr(start));
            break;
        }
        pieces.push_back(view.substr(start, comma - start));
        start = comma + 1;
    }
    if (pieces.size() != 4) {
        throw MalformedPayload("box '" + text + "' must have four comma-separated fields");
    }
    return BoundingBox{parse_box_int(pieces[0]), parse_box_int(pieces[1]), parse_box_int(pieces[2]),
                       parse_box_int(pieces[3])};
}

std::pair<std::string, BoundingBox> parse_layout_line(const std::string& line) {
    const std::size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size()) {
        throw MalformedPayload("layout line '" + line + "' must be 'label x,y,w,h'");
    }
    if (line.find(' ', space + 1) != std::string::npos) {
        throw MalformedPayload("layout line '" + line + "' has too many fields");
    }
    return {line.substr(0, space), parse_box(line.substr(space + 1))};
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

} // namespace

std::string render_text_semantics(SemanticKind kind, const SceneGraph& graph) {
    for (const auto& obj : graph.objects) require_ascii(obj.label);
    for (const auto& rel : graph.relations) require_ascii(rel.predicate);

    switch (kind) {
        case SemanticKind::Objects: {
            std::string out;
            for (const auto& obj : graph.objects) {
                out += obj.label;
                out += '\n';
            }
            return out;
        }
        case SemanticKind::Layouts: {
            std::string out;
            for (const auto& obj : graph.objects) {
                out += box_text(obj.box);
                out += '\n';
            }
            return out;
        }
        case SemanticKind::ObjectsLayouts:
            return objects_layouts_block(graph);
        case SemanticKind::SceneGraphFull:
        case SemanticKind::SceneGraphFiltered:
            return sentence_block(graph, /*with_isolated=*/true);
        case SemanticKind::SceneGraphLayouts:
            // Sentences, a blank separator, then every object with its box
            // (which also covers relation-free objects).
            return sentence_block(graph, /*with_isolated=*/false) + "\n" +
                   objects_layouts_block(graph);
        default:
            throw ConfigError("kind '" + to_string(kind) + "' is not text-representable");
    }
}

SemanticPayload encode_text_semantics(SemanticKind kind, const SceneGraph& graph,
                                      int source_width, int source_height) {
    const std::string text = render_text_semantics(kind, graph);
    SemanticPayload payload;
    payload.kind = kind;
    payload.bytes.assign(text.begin(), text.end());
    payload.bit_count = 8 * static_cast<std::uint64_t>(text.size());
    payload.source_width = source_width;
    payload.source_height = source_height;
    return payload;
}

DecodedTextSemantics decode_text_semantics(SemanticKind kind, const SemanticPayload& payload) {
    if (!is_text_kind(kind)) {
        throw ConfigError("kind '" + to_string(kind) + "' is not text-representable");
    }
    if (payload.bit_count % 8 != 0 || payload.bytes.size() != payload.bit_count / 8) {
        throw MalformedPayload("text payload must be byte-exact");
    }
    const std::string text(payload.bytes.begin(), payload.bytes.end());
    const std::vector<std::string> lines = split_lines(text);

    DecodedTextSemantics out;
    switch (kind) {
        case SemanticKind::Objects:
            for (const auto& line : lines) {
                if (line.empty() || line.find(' ') != std::string::npos) {
                    throw MalformedPayload("object line '" + line + "' must be a bare label");
                }
                out.object_labels.push_back(line);
            }
            return out;
        case SemanticKind::Layouts:
            for (const auto& line : lines) out.boxes.push_back(parse_box(line));
            return out;
        case SemanticKind::ObjectsLayouts:
            for (const auto& line : lines) out.layout_entries.push_back(parse_layout_line(line));
            return out;
        case SemanticKind::SceneGraphFull:
        case SemanticKind::SceneGraphFiltered:
            for (const auto& line : lines) {
                const std::vector<std::string> tokens = split_tokens(line);
                if (tokens.size() == 3) {
                    out.triples.push_back({tokens[0], tokens[1], tokens[2]});
                } else if (tokens.size() == 1) {
                    out.isolated_labels.push_back(tokens[0]);
                } else {
                    throw MalformedPayload("scene-graph line '" + line +
                                           "' is neither a sentence nor a label");
                }
            }
            return out;
        case SemanticKind::SceneGraphLayouts: {
            std::size_t separator = lines.size();
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (lines[i].empty()) {
                    separator = i;
                    break;
                }
            }
            if (separator == lines.size()) {
                throw MalformedPayload("scene-graph-with-layouts payload lacks a separator line");
            }
            for (std::size_t i = 0; i < separator; ++i) {
                const std::vector<std::string> tokens = split_tokens(lines[i]);
                if (tokens.size() != 3) {
                    throw MalformedPayload("sentence line '" + lines[i] +
                                           "' must have three tokens");
                }
                out.triples.push_back({tokens[0], tokens[1], tokens[2]});
            }
            for (std::size_t i = separator + 1; i < lines.size(); ++i) {
                out.layout_entries.push_back(parse_layout_line(lines[i]));
            }
            return out;
        }
        default:
            throw ConfigError("unreachable text kind");
    }
}

SemanticPayload encode_feature_map(const FeatureMapSpec& spec, int source_width,
                                   int source_height) {
    if (spec.quant_bits < 1 || spec.quant_bits > 16) {
        throw ConfigError("feature quantizer width must be in [1, 16] bits");
    }
    if (spec.values.size() != spec.value_count()) {
        throw LengthMismatch("feature tensor has " + std::to_string(spec.values.size()) +
                             " values; geometry promises " + std::to_string(spec.value_count()));
    }

    float lo = 0.0f;
    float hi = 0.0f;
    if (!spec.values.empty()) {
        lo = *std::min_element(spec.values.begin(), spec.values.end());
        hi = *std::max_element(spec.values.begin(), spec.values.end());
    }
    const std::uint32_t levels = (1u << spec.quant_bits) - 1u;
    // Header carries float32 scale/offset; quantize against the rounded
    // header values so decode sees exactly the quantizer encode used.
    const float scale = levels == 0 ? 0.0f : (hi - lo) / static_cast<float>(levels);
    const float offset = lo;

    BitWriter writer;
    std::uint32_t scale_bits = 0;
    std::uint32_t offset_bits = 0;
    std::memcpy(&scale_bits, &scale, 4);
    std::memcpy(&offset_bits, &offset, 4);
    writer.write_u32_le(scale_bits);
    writer.write_u32_le(offset_bits);

    for (float v : spec.values) {
        std::uint32_t code = 0;
        if (scale > 0.0f) {
            const double q = std::llround((static_cast<double>(v) - offset) / scale);
            code = static_cast<std::uint32_t>(std::clamp<long long>(
                static_cast<long long>(q), 0, static_cast<long long>(levels)));
        }
        writer.write_bits(code, spec.quant_bits);
    }

    SemanticPayload payload;
    payload.kind = SemanticKind::FeatureMap;
    payload.bit_count = writer.bit_count();
    payload.bytes = std::move(writer).take_bytes();
    payload.source_width = source_width;
    payload.source_height = source_height;
    return payload;
}

FeatureMapSpec decode_feature_map(const SemanticPayload& payload, int channels, int width,
                                  int height, int quant_bits) {
    FeatureMapSpec spec;
    spec.channels = channels;
    spec.width = width;
    spec.height = height;
    spec.quant_bits = quant_bits;

    const std::uint64_t expected =
        64 + spec.value_count() * static_cast<std::uint64_t>(quant_bits);
    if (payload.bit_count != expected) {
        throw LengthMismatch("feature payload has " + std::to_string(payload.bit_count) +
                             " bits; geometry needs " + std::to_string(expected));
    }

    BitReader reader(payload.bytes.data(), payload.bit_count);
    const std::uint32_t scale_bits = reader.read_u32_le();
    const std::uint32_t offset_bits = reader.read_u32_le();
    float scale = 0.0f;
    float offset = 0.0f;
    std::memcpy(&scale, &scale_bits, 4);
    std::memcpy(&offset, &offset_bits, 4);

    spec.values.resize(spec.value_count());
    for (auto& v : spec.values) {
        const auto code = static_cast<std::uint32_t>(reader.read_bits(quant_bits));
        v = offset + scale * static_cast<float>(code);
    }
    return spec;
}

SemanticPayload encode_segmentation_map(const SegmentationGrid& grid, int bits_per_cell,
                                        int source_width, int source_height) {
    if (bits_per_cell < 1 || bits_per_cell > 16) {
        throw ConfigError("segmentation cell width must be in [1, 16] bits");
    }
    if (grid.width_cells <= 0 || grid.height_cells <= 0 ||
        grid.cells.size() != static_cast<std::size_t>(grid.width_cells) *
                                 static_cast<std::size_t>(grid.height_cells)) {
        throw LengthMismatch("segmentation grid geometry is inconsistent");
    }
    if (grid.width_cells > 0xffff || grid.height_cells > 0xffff) {
        throw ConfigError("segmentation grid dimensions exceed the 16-bit header");
    }

    const std::uint32_t limit = 1u << bits_per_cell;
    BitWriter writer;
    writer.write_bits(static_cast<std::uint8_t>(grid.width_cells & 0xff), 8);
    writer.write_bits(static_cast<std::uint8_t>((grid.width_cells >> 8) & 0xff), 8);
    writer.write_bits(static_cast<std::uint8_t>(grid.height_cells & 0xff), 8);
    writer.write_bits(static_cast<std::uint8_t>((grid.height_cells >> 8) & 0xff), 8);
    for (std::uint16_t cell : grid.cells) {
        if (cell >= limit) {
            throw ClassIdOverflow("cell value " + std::to_string(cell) + " does not fit in " +
                                  std::to_string(bits_per_cell) + " bits");
        }
        writer.write_bits(cell, bits_per_cell);
    }

    SemanticPayload payload;
    payload.kind = SemanticKind::SegMap;
    payload.bit_count = writer.bit_count();
    payload.bytes = std::move(writer).take_bytes();
    payload.source_width = source_width;
    payload.source_height = source_height;
    return payload;
}

SegmentationGrid decode_segmentation_map(const SemanticPayload& payload, int bits_per_cell) {
    if (bits_per_cell < 1 || bits_per_cell > 16) {
        throw ConfigError("segmentation cell width must be in [1, 16] bits");
    }
    if (payload.bit_count < 32) throw MalformedPayload("segmentation payload lacks its header");

    BitReader reader(payload.bytes.data(), payload.bit_count);
    const auto w_lo = reader.read_bits(8);
    const auto w_hi = reader.read_bits(8);
    const auto h_lo = reader.read_bits(8);
    const auto h_hi = reader.read_bits(8);

    SegmentationGrid grid;
    grid.width_cells = static_cast<int>(w_lo | (w_hi << 8));
    grid.height_cells = static_cast<int>(h_lo | (h_hi << 8));
    const std::uint64_t cells = static_cast<std::uint64_t>(grid.width_cells) *
                                static_cast<std::uint64_t>(grid.height_cells);
    const std::uint64_t expected = 32 + cells * static_cast<std::uint64_t>(bits_per_cell);
    if (payload.bit_count != expected) {
        throw LengthMismatch("segmentation payload has " + std::to_string(payload.bit_count) +
                             " bits; header promises " + std::to_string(expected));
    }
    grid.cells.reserve(cells);
    for (std::uint64_t i = 0; i < cells; ++i) {
        grid.cells.push_back(static_cast<std::uint16_t>(reader.read_bits(bits_per_cell)));
    }
    return grid;
}

std::uint64_t compressed_image_bits(const CodecConfig& config, int source_width,
                                    int source_height) {
    if (config.compressed_image_bytes.has_value()) {
        return 8 * config.compressed_image_bytes.value();
    }
    if (source_width <= 0 || source_height <= 0) {
        throw ValidationError("source resolution must be positive");
    }
    if (!(config.compressed_image_bpp > 0.0)) {
        throw ConfigError("compressed-image bits-per-pixel must be positive");
    }
    const double bits = config.compressed_image_bpp * static_cast<double>(source_width) *
                        static_cast<double>(source_height);
    const auto bytes = static_cast<std::uint64_t>(std::ceil(bits / 8.0));
    return 8 * bytes;
}

namespace {

constexpr char kContainerMagic[4] = {'S', 'P', 'A', 'Y'};

} // namespace

SemanticPayload assemble_container(const std::vector<PayloadSection>& sections, int source_width,
                                   int source_height) {
    if (sections.empty()) throw ConfigError("payload container needs at least one section");
    if (sections.size() > 255) throw ConfigError("payload container holds at most 255 sections");
    if (source_width < 0 || source_width > 0xffff || source_height < 0 ||
        source_height > 0xffff) {
        throw ConfigError("source resolution exceeds the container's 16-bit fields");
    }

    BitWriter writer;
    writer.write_bytes(reinterpret_cast<const std::uint8_t*>(kContainerMagic), 4);
    writer.write_bits(static_cast<std::uint32_t>(source_width) & 0xff, 8);
    writer.write_bits((static_cast<std::uint32_t>(source_width) >> 8) & 0xff, 8);
    writer.write_bits(static_cast<std::uint32_t>(source_height) & 0xff, 8);
    writer.write_bits((static_cast<std::uint32_t>(source_height) >> 8) & 0xff, 8);
    writer.write_bits(static_cast<std::uint64_t>(sections.size()), 8);

    for (const auto& section : sections) {
        const std::uint64_t byte_len = (section.bit_count + 7) / 8;
        if (section.bytes.size() != byte_len) {
            throw LengthMismatch("section byte size disagrees with its bit count");
        }
        if (section.bit_count > 0xffffffffULL) {
            throw ConfigError("section exceeds the container's 32-bit length field");
        }
        writer.write_bits(static_cast<std::uint8_t>(section.kind), 8);
        writer.write_u32_le(static_cast<std::uint32_t>(section.bit_count));
        writer.write_bytes(section.bytes.data(), section.bytes.size());
    }

    SemanticPayload payload;
    payload.kind = sections.front().kind;
    payload.bit_count = writer.bit_count();
    payload.bytes = std::move(writer).take_bytes();
    payload.source_width = source_width;
    payload.source_height = source_height;
    return payload;
}

std::vector<PayloadSection> parse_container(const SemanticPayload& payload, int& source_width,
                                            int& source_height) {
    const auto& bytes = payload.bytes;
    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (pos + n > bytes.size()) throw MalformedPayload("truncated payload container");
    };

    need(4);
    for (int i = 0; i < 4; ++i) {
        if (bytes[pos + static_cast<std::size_t>(i)] !=
            static_cast<std::uint8_t>(kContainerMagic[i])) {
            throw FormatError("bad magic for payload container");
        }
    }
    pos += 4;

    need(5);
    source_width = bytes[pos] | (bytes[pos + 1] << 8);
    source_height = bytes[pos + 2] | (bytes[pos + 3] << 8);
    const int section_count = bytes[pos + 4];
    pos += 5;

    std::vector<PayloadSection> sections;
    sections.reserve(static_cast<std::size_t>(section_count));
    for (int s = 0; s < section_count; ++s) {
        need(5);
        const std::uint8_t kind_byte = bytes[pos++];
        if (kind_byte > static_cast<std::uint8_t>(SemanticKind::CompressedImage)) {
            throw MalformedPayload("unknown section kind byte " + std::to_string(kind_byte));
        }
        std::uint32_t bit_len = 0;
        for (int i = 0; i < 4; ++i) bit_len |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
        const std::size_t byte_len = (static_cast<std::size_t>(bit_len) + 7) / 8;
        need(byte_len);
        PayloadSection section;
        section.kind = static_cast<SemanticKind>(kind_byte);
        section.bit_count = bit_len;
        section.bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                             bytes.begin() + static_cast<std::ptrdiff_t>(pos + byte_len));
        pos += byte_len;
        sections.push_back(std::move(section));
    }
    if (pos != bytes.size()) throw MalformedPayload("trailing bytes after container sections");
    return sections;
}

PayloadMetrics payload_metrics(std::uint64_t bit_count, int source_width, int source_height) {
    if (source_width <= 0 || source_height <= 0) {
        throw ValidationError("source resolution must be positive");
    }
    const double pixels = static_cast<double>(source_width) * static_cast<double>(source_height);
    PayloadMetrics metrics;
    metrics.bits_per_pixel = static_cast<double>(bit_count) / pixels;
    metrics.compression_rate = static_cast<double>(bit_count) / (24.0 * pixels);
    return metrics;
}

void save_payload_file(const SemanticPayload& payload, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(payload.bytes.data()),
              static_cast<std::streamsize>(payload.bytes.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

SemanticPayload load_payload_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open payload file '" + path + "'");
    SemanticPayload payload;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    payload.bytes = std::move(bytes);
    payload.bit_count = 8 * static_cast<std::uint64_t>(payload.bytes.size());
    // Validate the container and recover its metadata.
    int width = 0;
    int height = 0;
    const std::vector<PayloadSection> sections = parse_container(payload, width, height);
    payload.source_width = width;
    payload.source_height = height;
    if (!sections.empty()) payload.kind = sections.front().kind;
    return payload;
}

} // namespace semcom
