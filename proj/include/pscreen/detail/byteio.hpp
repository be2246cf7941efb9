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

#include <pscreen/errors.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pscreen::detail {

/// Little-endian byte sink.
class ByteWriter {
  public:
    void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }

    const std::vector<char> &data() const { return buf_; }

  private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i)
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    std::vector<char> buf_;
};

/// Little-endian byte source over an in-memory file; every read is bounds checked.
class ByteReader {
  public:
    explicit ByteReader(std::span<const char> data) : data_(data) {}

    std::string bytes(std::size_t n, const char *what) {
        need(n, what);
        std::string s(data_.data() + pos_, n);
        pos_ += n;
        return s;
    }
    std::uint8_t u8(const char *what) { return static_cast<std::uint8_t>(get(1, what)); }
    std::uint16_t u16(const char *what) { return static_cast<std::uint16_t>(get(2, what)); }
    std::uint32_t u32(const char *what) { return static_cast<std::uint32_t>(get(4, what)); }
    float f32(const char *what) { return std::bit_cast<float>(u32(what)); }

    std::size_t remaining() const { return data_.size() - pos_; }

    void need(std::size_t n, const char *what) const {
        if (remaining() < n)
            throw FormatError(FormatErrc::Truncated, std::string("file ends inside ") + what);
    }

  private:
    std::uint64_t get(int n, const char *what) {
        need(static_cast<std::size_t>(n), what);
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i)
            v |= std::uint64_t{static_cast<unsigned char>(data_[pos_ + i])} << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
    std::span<const char> data_;
    std::size_t pos_ = 0;
};

std::vector<char> read_file(const std::string &path);
void write_file(const std::string &path, std::span<const char> bytes);

} // namespace pscreen::detail
