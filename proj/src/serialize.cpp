// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "squeezekv/error.hpp"

namespace squeezekv {

namespace {

template <typename T>
T get_field(const Json& j, const char* key, const char* what) {
    if (!j.contains(key)) throw FormatError(std::string(what) + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string(what) + ": bad value for '" + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const char* what) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return get_field<T>(j, key, what);
}

void require_object(const Json& j, const char* what) {
    if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 16);
        if (used != s.size()) throw FormatError("bad fingerprint '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw FormatError("bad fingerprint '" + s + "'");
    }
}

Json budget_value(TokenCount b) { return b == kUnboundedBudget ? Json(nullptr) : Json(b); }

TokenCount budget_from(const Json& j) { return j.is_null() ? kUnboundedBudget : j.get<TokenCount>(); }

}  // namespace

ToyModelSpec RunConfig::toy_spec() const {
    ToyModelSpec spec;
    spec.shape = shape;
    spec.seed = sim.seed;
    spec.vocab = vocab;
    spec.weight_scale = weight_scale;
    return spec;
}

Json to_json(const RunConfig& cfg) {
    Json j;
    j["n_layer"] = cfg.shape.n_layer;
    j["d_model"] = cfg.shape.d_model;
    j["n_heads"] = cfg.shape.n_heads;
    j["kv_dim"] = cfg.shape.kv_dim;
    j["bytes_per_scalar"] = cfg.shape.bytes_per_scalar;
    j["max_context"] = cfg.shape.max_context;
    j["prompt_len"] = cfg.sim.prompt_len;
    j["gen_len"] = cfg.sim.gen_len;
    j["batch"] = cfg.sim.batch;
    j["seed"] = cfg.sim.seed;
    j["vocab"] = cfg.vocab;
    j["weight_scale"] = cfg.weight_scale;
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    constexpr const char* what = "config";
    require_object(j, what);
    static const std::set<std::string> known = {"n_layer",    "d_model",  "n_heads", "kv_dim", "bytes_per_scalar",
                                                "max_context", "prompt_len", "gen_len", "batch",  "seed",
                                                "vocab",      "weight_scale"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw FormatError("config: unknown key '" + key + "'");
    }
    RunConfig cfg;
    cfg.shape.n_layer = get_field<std::uint32_t>(j, "n_layer", what);
    cfg.shape.d_model = get_field<std::uint32_t>(j, "d_model", what);
    cfg.shape.n_heads = get_field<std::uint32_t>(j, "n_heads", what);
    cfg.shape.kv_dim = get_or<std::uint32_t>(j, "kv_dim", cfg.shape.d_model, what);
    cfg.shape.bytes_per_scalar = get_or<std::uint32_t>(j, "bytes_per_scalar", 2, what);
    cfg.shape.max_context = get_or<std::uint32_t>(j, "max_context", 4096, what);
    cfg.sim.prompt_len = get_or<TokenCount>(j, "prompt_len", 1, what);
    cfg.sim.gen_len = get_or<TokenCount>(j, "gen_len", 0, what);
    cfg.sim.batch = get_or<TokenCount>(j, "batch", 1, what);
    cfg.sim.seed = get_or<std::uint64_t>(j, "seed", 0, what);
    cfg.vocab = get_or<std::uint32_t>(j, "vocab", 256, what);
    cfg.weight_scale = get_or<double>(j, "weight_scale", 0.15, what);
    try {
        cfg.shape.validate();
        cfg.sim.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    return cfg;
}

Json to_json(const CosineProfile& profile) {
    Json j;
    Json layers = Json::array();
    for (const auto& l : profile.layers) layers.push_back({{"layer", l.layer}, {"mean_cos", l.mean_cos}});
    j["layers"] = std::move(layers);
    j["prompt_len"] = profile.prompt_len;
    if (!profile.source.empty()) j["source"] = profile.source;
    if (!profile.token_cosines.empty()) j["token_cosines"] = profile.token_cosines;
    return j;
}

CosineProfile profile_from_json(const Json& j) {
    constexpr const char* what = "profile";
    require_object(j, what);
    CosineProfile p;
    const auto& layers = j.contains("layers") ? j.at("layers") : throw FormatError("profile: missing key 'layers'");
    if (!layers.is_array()) throw FormatError("profile: 'layers' must be an array");
    for (const auto& l : layers) {
        LayerSimilarity s;
        s.layer = get_field<std::uint32_t>(l, "layer", what);
        s.mean_cos = get_field<double>(l, "mean_cos", what);
        if (!(s.mean_cos >= -1.0 && s.mean_cos <= 1.0)) {
            throw FormatError("profile: mean_cos of layer " + std::to_string(s.layer) + " is outside [-1, 1]");
        }
        if (s.layer != p.layers.size()) throw FormatError("profile: layers must be listed in order from 0");
        p.layers.push_back(s);
    }
    p.prompt_len = get_field<std::uint32_t>(j, "prompt_len", what);
    p.source = get_or<std::string>(j, "source", "", what);
    return p;
}

Json to_json(const LayerGroups& groups) {
    Json j;
    j["g1"] = groups.g1();
    j["g2"] = groups.g2();
    j["g3"] = groups.g3();
    return j;
}

LayerGroups groups_from_json(const Json& j) {
    constexpr const char* what = "groups";
    require_object(j, what);
    LayerGroups g;
    std::set<std::uint32_t> seen;
    const char* names[] = {"g1", "g2", "g3"};
    for (int k = 0; k < 3; ++k) {
        g.members[k] = get_field<std::vector<std::uint32_t>>(j, names[k], what);
        std::sort(g.members[k].begin(), g.members[k].end());
        for (auto l : g.members[k]) {
            if (!seen.insert(l).second) throw FormatError("groups: layer " + std::to_string(l) + " listed twice");
        }
    }
    g.n_layer = static_cast<std::uint32_t>(seen.size());
    if (!seen.empty() && *seen.rbegin() != g.n_layer - 1) {
        throw FormatError("groups: layer indices must cover 0.." + std::to_string(g.n_layer - 1));
    }
    return g;
}

Json to_json(const BudgetPlan& plan) {
    Json j;
    j["b_init"] = plan.b_init;
    j["squeeze_ratio"] = plan.squeeze_ratio;
    j["groups"] = to_json(plan.groups);
    j["budgets"] = plan.budgets;
    j["centroids"] = plan.groups.centroids;
    j["total_budget"] = plan.total();
    return j;
}

BudgetPlan plan_from_json(const Json& j) {
    constexpr const char* what = "plan";
    require_object(j, what);
    BudgetPlan plan;
    plan.b_init = get_field<TokenCount>(j, "b_init", what);
    plan.squeeze_ratio = get_field<double>(j, "squeeze_ratio", what);
    plan.groups = groups_from_json(j.at("groups"));
    plan.budgets = get_field<std::vector<TokenCount>>(j, "budgets", what);
    if (plan.budgets.size() != plan.groups.n_layer) {
        throw FormatError("plan: " + std::to_string(plan.budgets.size()) + " budgets for " +
                          std::to_string(plan.groups.n_layer) + " grouped layers");
    }
    if (j.contains("centroids")) plan.groups.centroids = get_field<std::array<double, 3>>(j, "centroids", what);
    return plan;
}

Json to_json(const EvictionPolicy& policy) {
    Json j;
    j["policy"] = to_string(policy.kind);
    if (policy.kind == PolicyKind::streaming) j["n_sink"] = policy.n_sink;
    if (policy.kind == PolicyKind::h2o) j["recent_fraction"] = policy.recent_fraction;
    return j;
}

EvictionPolicy policy_from_json(const Json& j) {
    constexpr const char* what = "policy";
    require_object(j, what);
    EvictionPolicy p;
    try {
        p.kind = parse_policy_kind(get_field<std::string>(j, "policy", what));
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("policy: ") + e.what());
    }
    p.n_sink = get_or<std::uint32_t>(j, "n_sink", 4, what);
    p.recent_fraction = get_or<double>(j, "recent_fraction", 0.5, what);
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("policy: ") + e.what());
    }
    return p;
}

Json to_json(const SimReport& r) {
    Json j;
    RunConfig echo;
    echo.shape = r.shape;
    echo.sim.prompt_len = r.prompt_len;
    echo.sim.gen_len = r.gen_len;
    echo.sim.batch = r.batch;
    echo.sim.seed = r.model_seed;
    Json config = to_json(echo);
    config.erase("vocab");
    config.erase("weight_scale");
    j["config"] = std::move(config);
    j["prompt_seed"] = r.prompt_seed;
    j["mode"] = to_string(r.mode);
    j["policy"] = to_json(r.policy);
    j["plan"] = to_json(r.plan);
    Json budgets = Json::array();
    for (auto b : r.effective_budgets) budgets.push_back(budget_value(b));
    j["effective_budgets"] = std::move(budgets);
    j["prefill"] = {{"retained", r.prefill_retained}, {"bytes", r.prefill_bytes}};
    Json steps = Json::array();
    for (const auto& s : r.steps) {
        Json st;
        st["step"] = s.step;
        st["token"] = s.token;
        st["after_evict"] = s.after_evict;
        st["retained"] = s.retained;
        st["bytes_after_evict"] = s.bytes_after_evict;
        st["bytes"] = s.bytes;
        st["mass_retained"] = s.mass_retained;
        steps.push_back(std::move(st));
    }
    j["steps"] = std::move(steps);
    j["peak_bytes"] = r.peak_bytes;
    j["mean_mass_retained"] = r.mean_mass_retained();
    j["generated"] = r.generated;
    const std::size_t d = r.shape.d_model;
    if (r.hidden.size() >= d && d > 0) {
        j["final_hidden"] = std::vector<float>(r.hidden.end() - static_cast<std::ptrdiff_t>(d), r.hidden.end());
    }
    j["fingerprint"] = hex64(r.fingerprint);
    return j;
}

SimReport report_from_json(const Json& j) {
    constexpr const char* what = "report";
    require_object(j, what);
    SimReport r;
    const auto cfg = run_config_from_json(j.at("config"));
    r.shape = cfg.shape;
    r.prompt_len = cfg.sim.prompt_len;
    r.gen_len = cfg.sim.gen_len;
    r.batch = cfg.sim.batch;
    r.model_seed = cfg.sim.seed;
    r.prompt_seed = get_or<std::uint64_t>(j, "prompt_seed", 0, what);
    try {
        r.mode = parse_cache_mode(get_field<std::string>(j, "mode", what));
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("report: ") + e.what());
    }
    r.policy = policy_from_json(j.at("policy"));
    r.plan = plan_from_json(j.at("plan"));
    for (const auto& b : j.at("effective_budgets")) r.effective_budgets.push_back(budget_from(b));
    r.prefill_retained = get_field<std::vector<TokenCount>>(j.at("prefill"), "retained", what);
    r.prefill_bytes = get_field<Bytes>(j.at("prefill"), "bytes", what);
    for (const auto& st : j.at("steps")) {
        StepRecord s;
        s.step = get_field<std::uint64_t>(st, "step", what);
        s.token = get_field<std::uint32_t>(st, "token", what);
        s.after_evict = get_field<std::vector<TokenCount>>(st, "after_evict", what);
        s.retained = get_field<std::vector<TokenCount>>(st, "retained", what);
        s.bytes_after_evict = get_field<Bytes>(st, "bytes_after_evict", what);
        s.bytes = get_field<Bytes>(st, "bytes", what);
        s.mass_retained = get_field<std::vector<double>>(st, "mass_retained", what);
        r.steps.push_back(std::move(s));
    }
    r.peak_bytes = get_field<Bytes>(j, "peak_bytes", what);
    r.generated = get_field<std::vector<std::uint32_t>>(j, "generated", what);
    if (j.contains("final_hidden")) r.hidden = get_field<std::vector<float>>(j, "final_hidden", what);
    r.fingerprint = parse_hex64(get_field<std::string>(j, "fingerprint", what));
    return r;
}

std::string report_csv(const SimReport& r) {
    std::ostringstream out;
    out << "step,layer,retained,bytes,mass_retained\n";
    for (std::size_t l = 0; l < r.prefill_retained.size(); ++l) {
        out << 0 << ',' << l << ',' << r.prefill_retained[l] << ',' << r.prefill_bytes << ',' << 1 << '\n';
    }
    for (const auto& s : r.steps) {
        for (std::size_t l = 0; l < s.retained.size(); ++l) {
            out << s.step << ',' << l << ',' << s.retained[l] << ',' << s.bytes << ',' << format_number(s.mass_retained[l]) << '\n';
        }
    }
    return out.str();
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": invalid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace squeezekv
