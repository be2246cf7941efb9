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

#include <pscreen/trace.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pscreen {

// PSCT container, little-endian:
//   "PSCT" | u16 version=1 | u8 flags=0 | u8 reserved=0 |
//   u32 n_traces | u32 n_samples | u32 meta_len | meta JSON |
//   n_traces * n_samples float32, trace-major.
// The JSON object holds {"labels": [...], "meta": {...}}.

inline constexpr std::uint16_t kTraceFormatVersion = 1;

std::vector<char> encode_traceset(const TraceSet &set);
TraceSet decode_traceset(std::span<const char> bytes);

void write_traceset(const TraceSet &set, const std::string &path);
TraceSet read_traceset(const std::string &path);

/// `trace_id,label,s0,...,s{L-1}` with 9 significant digits.
void write_traceset_csv(const TraceSet &set, const std::string &path);

} // namespace pscreen
