// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/trace_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "squeezekv/error.hpp"

namespace squeezekv {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_floats(std::vector<std::uint8_t>& out, std::span<const float> v) {
    for (float f : v) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

void get_floats(const std::uint8_t* p, std::span<float> dst) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::bit_cast<float>(get_u32(p + 4 * i));
}

}  // namespace

std::vector<std::uint8_t> encode_trace(const PrefillTrace& trace) {
    trace.validate();
    std::vector<std::uint8_t> out;
    const std::size_t pairs = static_cast<std::size_t>(trace.n_layer) * trace.prompt_len;
    out.reserve(kTraceHeaderBytes + (trace.compact ? pairs * 4 : pairs * 8 * trace.d_model));
    out.insert(out.end(), kTraceMagic.begin(), kTraceMagic.end());
    put_u32(out, trace.n_layer);
    put_u32(out, trace.d_model);
    put_u32(out, trace.prompt_len);
    put_u32(out, trace.compact ? kTraceFlagCompact : 0u);
    if (trace.compact) {
        put_floats(out, trace.cosines);
        return out;
    }
    for (std::size_t l = 0; l < trace.n_layer; ++l) {
        for (std::size_t t = 0; t < trace.prompt_len; ++t) {
            put_floats(out, trace.pre_vec(l, t));
            put_floats(out, trace.post_vec(l, t));
        }
    }
    return out;
}

PrefillTrace decode_trace(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    if (bytes.size() < kTraceMagic.size() ||
        std::memcmp(bytes.data(), kTraceMagic.data(), kTraceMagic.size()) != 0) {
        throw FormatError(origin + ": not a trace file (bad magic, expected SQZTRC01)");
    }
    if (bytes.size() < kTraceHeaderBytes) {
        throw FormatError(origin + ": truncated header: expected " + std::to_string(kTraceHeaderBytes) +
                          " bytes, got " + std::to_string(bytes.size()));
    }
    PrefillTrace t;
    t.n_layer = get_u32(bytes.data() + 8);
    t.d_model = get_u32(bytes.data() + 12);
    t.prompt_len = get_u32(bytes.data() + 16);
    const std::uint32_t flags = get_u32(bytes.data() + 20);
    if ((flags & ~kTraceFlagCompact) != 0) {
        throw FormatError(origin + ": unknown flag bits in " + std::to_string(flags));
    }
    if (t.n_layer == 0 || t.d_model == 0 || t.prompt_len == 0) {
        throw FormatError(origin + ": header has a zero dimension");
    }
    t.compact = (flags & kTraceFlagCompact) != 0;

    const std::uint64_t pairs = static_cast<std::uint64_t>(t.n_layer) * t.prompt_len;
    const std::uint64_t payload = t.compact ? pairs * 4 : pairs * 8 * static_cast<std::uint64_t>(t.d_model);
    const std::uint64_t expected = kTraceHeaderBytes + payload;
    if (bytes.size() < expected) {
        throw FormatError(origin + ": truncated payload: expected " + std::to_string(payload) + " bytes, got " +
                          std::to_string(bytes.size() - kTraceHeaderBytes));
    }
    if (bytes.size() > expected) {
        throw FormatError(origin + ": shape inconsistency: header implies " + std::to_string(expected) +
                          " bytes but file has " + std::to_string(bytes.size()));
    }

    const std::uint8_t* p = bytes.data() + kTraceHeaderBytes;
    if (t.compact) {
        t.cosines.resize(pairs);
        get_floats(p, t.cosines);
    } else {
        t.pre.resize(pairs * t.d_model);
        t.post.resize(pairs * t.d_model);
        for (std::size_t l = 0; l < t.n_layer; ++l) {
            for (std::size_t tok = 0; tok < t.prompt_len; ++tok) {
                get_floats(p, t.pre_vec(l, tok));
                p += 4 * t.d_model;
                get_floats(p, t.post_vec(l, tok));
                p += 4 * t.d_model;
            }
        }
    }
    try {
        t.validate();
    } catch (const FormatError& e) {
        throw FormatError(origin + ": " + e.what());
    }
    return t;
}

void save_trace(const PrefillTrace& trace, const std::filesystem::path& path) {
    const auto bytes = encode_trace(trace);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

PrefillTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_trace(bytes, path.string());
}

}  // namespace squeezekv
