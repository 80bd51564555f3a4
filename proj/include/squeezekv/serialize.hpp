// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "squeezekv/eviction.hpp"
#include "squeezekv/grouping.hpp"
#include "squeezekv/kv_model.hpp"
#include "squeezekv/profiler.hpp"
#include "squeezekv/simulator.hpp"
#include "squeezekv/toy_model.hpp"

namespace squeezekv {

using Json = nlohmann::ordered_json;

/// One config document: model shape, run sizes and the toy-model extras.
///
///   {"n_layer":4, "d_model":64, "n_heads":4, "kv_dim":64, "bytes_per_scalar":2,
///    "max_context":4096, "prompt_len":32, "gen_len":32, "batch":1, "seed":7,
///    "vocab":256, "weight_scale":0.15}
///
/// n_layer, d_model and n_heads are required; kv_dim defaults to d_model.
/// Unknown keys are rejected.
struct RunConfig {
    ModelShape shape;
    SimConfig sim;
    std::uint32_t vocab = 256;
    double weight_scale = 0.15;

    ToyModelSpec toy_spec() const;
};

Json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& j);

Json to_json(const CosineProfile& profile);
CosineProfile profile_from_json(const Json& j);

Json to_json(const LayerGroups& groups);
/// {"g1":[...],"g2":[...],"g3":[...]}; n_layer is the size of the union.
LayerGroups groups_from_json(const Json& j);

Json to_json(const BudgetPlan& plan);
BudgetPlan plan_from_json(const Json& j);

/// {"policy":"h2o","recent_fraction":0.5} / {"policy":"streaming","n_sink":4}
Json to_json(const EvictionPolicy& policy);
EvictionPolicy policy_from_json(const Json& j);

Json to_json(const SimReport& report);
SimReport report_from_json(const Json& j);

/// Flat rows (step, layer, retained, bytes, mass_retained). Step 0 is the
/// cache right after prefill; later steps report the post-append state.
std::string report_csv(const SimReport& report);

/// Reads a JSON document, mapping parse errors to FormatError and missing
/// files to IoError.
Json read_json_file(const std::filesystem::path& path);

/// Writes text, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double v);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const Json& j);

}  // namespace squeezekv
