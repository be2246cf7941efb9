/*
 * SPDX-FileCopyrightText: Copyright 2026 The pscreen Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
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

namespace pscreen {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An index fell outside the valid range of a trace.
class BoundsError : public Error {
  public:
    BoundsError(const std::string &what, long long index)
        : Error(what + " (offending index " + std::to_string(index) + ")"),
          index_(index) {}
    long long index() const { return index_; }

  private:
    long long index_;
};

class EmptyInputError : public Error {
  public:
    using Error::Error;
};

/// Data cannot be normalized (zero spread) or is otherwise unusable.
class DegenerateDataError : public Error {
  public:
    using Error::Error;
};

/// Non-finite or otherwise invalid sample values.
class DataError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Tensor or layer shapes disagree.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Non-benign data offered where only benign data is allowed.
class LeakageError : public Error {
  public:
    using Error::Error;
};

/// Too few calibration scores for the requested false-positive rate.
class ResolutionError : public Error {
  public:
    using Error::Error;
};

class DivergedTrainingError : public Error {
  public:
    DivergedTrainingError(const std::string &what, int epoch)
        : Error(what + " at epoch " + std::to_string(epoch)), epoch_(epoch) {}
    int epoch() const { return epoch_; }

  private:
    int epoch_;
};

/// A stored model is internally inconsistent (e.g. sigma <= 0).
class CorruptModelError : public Error {
  public:
    using Error::Error;
};

enum class FormatErrc {
    Io,
    BadMagic,
    VersionMismatch,
    Truncated,
    LabelCountMismatch,
    ShapeMismatch,
    BadManifest,
    EmptySet,
};

const char *to_string(FormatErrc code);

/// Malformed PSCT/PSCM container.
class FormatError : public Error {
  public:
    FormatError(FormatErrc code, const std::string &what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code) {}
    FormatErrc code() const { return code_; }

  private:
    FormatErrc code_;
};

inline const char *to_string(FormatErrc code) {
    switch (code) {
    case FormatErrc::Io:
        return "io error";
    case FormatErrc::BadMagic:
        return "bad magic";
    case FormatErrc::VersionMismatch:
        return "version mismatch";
    case FormatErrc::Truncated:
        return "truncated payload";
    case FormatErrc::LabelCountMismatch:
        return "label count mismatch";
    case FormatErrc::ShapeMismatch:
        return "shape mismatch";
    case FormatErrc::BadManifest:
        return "bad manifest";
    case FormatErrc::EmptySet:
        return "empty set";
    }
    return "format error";
}

} // namespace pscreen
