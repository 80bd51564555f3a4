// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "squeezekv/profiler.hpp"

namespace squeezekv {

// Binary prefill trace, little-endian throughout:
//
//   bytes 0..7    magic "SQZTRC01"
//   bytes 8..23   u32 n_layer, u32 d_model, u32 prompt_len, u32 flags
//   payload       flags bit 0 clear: for layer, for token: f32[d_model] A then f32[d_model] B
//                 flags bit 0 set:   f32[n_layer * prompt_len] per-token cosines
inline constexpr std::string_view kTraceMagic = "SQZTRC01";
inline constexpr std::uint32_t kTraceFlagCompact = 1u;
inline constexpr std::size_t kTraceHeaderBytes = 24;

std::vector<std::uint8_t> encode_trace(const PrefillTrace& trace);
PrefillTrace decode_trace(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

void save_trace(const PrefillTrace& trace, const std::filesystem::path& path);
PrefillTrace load_trace(const std::filesystem::path& path);

}  // namespace squeezekv
