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

#include <pscreen/trace_io.hpp>

#include <pscreen/detail/byteio.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <limits>

namespace pscreen {

namespace {

constexpr char kMagic[] = "PSCT";

std::uint32_t checked_u32(Index v, const char *what) {
    if (v < 0 || static_cast<std::uint64_t>(v) > std::numeric_limits<std::uint32_t>::max())
        throw FormatError(FormatErrc::ShapeMismatch, std::string(what) + " does not fit in u32");
    return static_cast<std::uint32_t>(v);
}

} // namespace

std::vector<char> encode_traceset(const TraceSet &set) {
    if (static_cast<Index>(set.labels.size()) != set.size())
        throw FormatError(FormatErrc::LabelCountMismatch,
                          std::to_string(set.size()) + " traces but " +
                              std::to_string(set.labels.size()) + " labels");
    const nlohmann::json header = {{"labels", set.labels}, {"meta", set.meta}};
    const std::string meta = header.dump();

    detail::ByteWriter w;
    w.bytes({kMagic, 4});
    w.u16(kTraceFormatVersion);
    w.u8(0);
    w.u8(0);
    w.u32(checked_u32(set.size(), "trace count"));
    w.u32(checked_u32(set.length(), "sample count"));
    w.u32(checked_u32(static_cast<Index>(meta.size()), "metadata length"));
    w.bytes(meta);
    for (Index i = 0; i < set.size(); ++i)
        for (Index j = 0; j < set.length(); ++j)
            w.f32(set.samples(i, j));
    return w.data();
}

TraceSet decode_traceset(std::span<const char> bytes) {
    detail::ByteReader r(bytes);
    if (r.remaining() < 4 || r.bytes(4, "magic") != std::string_view(kMagic, 4))
        throw FormatError(FormatErrc::BadMagic, "not a PSCT trace container");
    const auto version = r.u16("header");
    if (version != kTraceFormatVersion)
        throw FormatError(FormatErrc::VersionMismatch,
                          "unsupported PSCT version " + std::to_string(version));
    r.u8("header");
    r.u8("header");
    const std::uint32_t n_traces = r.u32("header");
    const std::uint32_t n_samples = r.u32("header");
    const std::uint32_t meta_len = r.u32("header");
    if (n_traces == 0)
        throw FormatError(FormatErrc::EmptySet, "container holds no traces");
    const std::string meta_text = r.bytes(meta_len, "metadata");

    TraceSet set;
    try {
        const auto header = nlohmann::json::parse(meta_text);
        set.labels = header.at("labels").get<std::vector<std::string>>();
        if (header.contains("meta"))
            set.meta = header.at("meta").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(FormatErrc::BadManifest, std::string("metadata: ") + e.what());
    }
    if (set.labels.size() != n_traces)
        throw FormatError(FormatErrc::LabelCountMismatch,
                          std::to_string(n_traces) + " traces but " +
                              std::to_string(set.labels.size()) + " labels");

    const std::uint64_t count = std::uint64_t{n_traces} * n_samples;
    r.need(count * 4, "sample payload");
    set.samples.resize(n_traces, n_samples);
    for (Index i = 0; i < set.size(); ++i)
        for (Index j = 0; j < set.length(); ++j)
            set.samples(i, j) = r.f32("sample payload");
    return set;
}

void write_traceset(const TraceSet &set, const std::string &path) {
    detail::write_file(path, encode_traceset(set));
}

TraceSet read_traceset(const std::string &path) { return decode_traceset(detail::read_file(path)); }

void write_traceset_csv(const TraceSet &set, const std::string &path) {
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw FormatError(FormatErrc::Io, "cannot open " + path + " for writing");
    std::fputs("trace_id,label", f);
    for (Index j = 0; j < set.length(); ++j)
        std::fprintf(f, ",s%lld", static_cast<long long>(j));
    std::fputc('\n', f);
    for (Index i = 0; i < set.size(); ++i) {
        std::fprintf(f, "%lld,%s", static_cast<long long>(i),
                     set.labels[static_cast<std::size_t>(i)].c_str());
        for (Index j = 0; j < set.length(); ++j)
            std::fprintf(f, ",%.9g", static_cast<double>(set.samples(i, j)));
        std::fputc('\n', f);
    }
    std::fclose(f);
}

} // namespace pscreen
