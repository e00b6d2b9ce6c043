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

#include <stdexcept>
#include <string>

namespace semcom {

/// Base class for every error thrown by the library. Catching this type is
/// sufficient to intercept any failure originating in semcom code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input text (JSON, descriptor files, profiles) could not be parsed at all.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates the expected document structure (missing or
/// mistyped fields, unknown enum values, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Semantically invalid content: dangling references, out-of-range boxes,
/// duplicate identifiers and the like.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (file missing, unreadable, unwritable).
class IoError : public Error {
public:
    using Error::Error;
};

/// A binary artifact (stats file, embedding file, payload container, base
/// matrix descriptor) has a bad magic, bad version, or is truncated.
class FormatError : public Error {
public:
    using Error::Error;
};

/// The file-backed embedding store has no vector for a requested sentence.
class MissingEmbedding : public Error {
public:
    using Error::Error;
};

/// A remote embedding call failed (non-2xx status or malformed body).
class ServiceError : public Error {
public:
    ServiceError(const std::string& msg, int status) : Error(msg), status_code(status) {}
    int status_code = 0;
};

/// A remote embedding call exhausted its timeout/retry budget.
class TimeoutError : public Error {
public:
    using Error::Error;
};

/// A payload request asked for the filtered scene graph but none was given.
class MissingFilteredGraph : public Error {
public:
    using Error::Error;
};

/// A payload container or text section failed to decode.
class MalformedPayload : public Error {
public:
    using Error::Error;
};

/// A segmentation cell value does not fit in the configured bit width.
class ClassIdOverflow : public Error {
public:
    using Error::Error;
};

/// A buffer length does not match what an operation requires.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// A resource-grant parameter is zero or otherwise unusable.
class InvalidGrant : public Error {
public:
    using Error::Error;
};

/// Rate adaptation was asked about a (rate, snr) cell absent from the table.
class MissingTableEntry : public Error {
public:
    using Error::Error;
};

/// A required configuration value is absent or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace semcom
