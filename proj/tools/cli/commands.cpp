// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "squeezekv/error.hpp"
#include "squeezekv/serialize.hpp"
#include "squeezekv/trace_io.hpp"

#ifndef SQUEEZEKV_VERSION
#define SQUEEZEKV_VERSION "0.0.0"
#endif

namespace squeezekv::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestPrefix = "# manifest: ";

/// Provenance block embedded in every artifact. The timestamp comes from
/// SOURCE_DATE_EPOCH (epoch 0 when unset) so reruns stay byte-identical.
struct Manifest {
    std::string command;
    std::vector<std::string> args;
    std::vector<std::string> config_paths;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["args"] = args;
        j["config_paths"] = config_paths;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        j["seed"] = seed;
        j["tool_version"] = SQUEEZEKV_VERSION;
        j["timestamp"] = timestamp();
        return j;
    }

    static std::string timestamp() {
        std::time_t t = 0;
        if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
            try {
                t = static_cast<std::time_t>(std::stoll(env));
            } catch (const std::logic_error&) {
                t = 0;
            }
        }
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::ostringstream os;
        os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return os.str();
    }
};

void write_json_artifact(const fs::path& path, Json body, const Manifest& m) {
    body["manifest"] = m.to_json();
    write_text_file(path, dump_json(body));
}

void write_csv_artifact(const fs::path& path, const std::string& csv, const Manifest& m) {
    write_text_file(path, kManifestPrefix + m.to_json().dump() + "\n" + csv);
}

struct PolicyArgs {
    std::string name = "sliding_window";
    std::uint32_t n_sink = 4;
    double recent_fraction = 0.5;
    std::string file;

    void attach(CLI::App* app) {
        app->add_option("--policy", name, "Eviction policy: sliding_window, streaming or h2o")
            ->check(CLI::IsMember({"sliding_window", "streaming", "h2o"}));
        app->add_option("--n-sink", n_sink, "Sink tokens kept by the streaming policy");
        app->add_option("--recent-fraction", recent_fraction, "Recent-window share of the h2o budget");
        app->add_option("--policy-file", file, "JSON policy document (overrides --policy)");
    }

    EvictionPolicy resolve(Manifest& m) const {
        if (!file.empty()) {
            m.config_paths.push_back(file);
            return policy_from_json(read_json_file(file));
        }
        EvictionPolicy p;
        p.kind = parse_policy_kind(name);
        p.n_sink = n_sink;
        p.recent_fraction = recent_fraction;
        p.validate();
        return p;
    }
};

struct BudgetArgs {
    std::optional<TokenCount> b_init;
    std::optional<double> fraction;
    double squeeze_ratio = kDefaultSqueezeRatio;

    void attach(CLI::App* app, bool with_ratio = true) {
        auto* abs = app->add_option("--b-init", b_init, "Per-layer budget in tokens before reallocation");
        auto* frac = app->add_option("--budget", fraction, "Per-layer budget as a fraction of prompt length");
        abs->excludes(frac);
        if (with_ratio) {
            app->add_option("--squeeze-ratio", squeeze_ratio, "Share of b_init kept by the least important group")
                ->check(CLI::Range(kMinSqueezeRatio, 1.0));
        }
    }

    TokenCount resolve(TokenCount prompt_len) const {
        if (b_init) {
            if (*b_init < 1) throw InvalidArgument("--b-init must be >= 1");
            return *b_init;
        }
        return budget_from_fraction(fraction.value_or(0.2), prompt_len);
    }
};

struct ModelArgs {
    std::string config;
    std::optional<std::uint64_t> seed;

    RunConfig load(Manifest& m) const {
        m.config_paths.push_back(config);
        RunConfig cfg = run_config_from_json(read_json_file(config));
        if (seed) cfg.sim.seed = *seed;
        m.seed = cfg.sim.seed;
        return cfg;
    }
};

std::vector<std::uint32_t> prompt_for(const RunConfig& cfg) {
    return make_prompt(cfg.vocab, static_cast<std::size_t>(cfg.sim.prompt_len), cfg.sim.seed);
}

BudgetPlan plan_from_profile(const CosineProfile& profile, TokenCount b_init, double ratio,
                             const EvictionPolicy& policy) {
    return allocate_budgets(cluster_layers(profile), b_init, ratio, policy.min_budget());
}

// ---------------------------------------------------------------- profile

struct ProfileCmd {
    std::vector<std::string> traces;
    ModelArgs model;
    std::string out_dir = ".";
    std::string out_name = "profile.json";
    std::string emit_trace;
    bool compact = false;
    bool token_cosines = false;
    unsigned threads = 1;

    void attach(CLI::App* app) {
        auto* t = app->add_option("--trace", traces, "SQZTRC01 trace file(s); several are averaged");
        auto* c = app->add_option("--config", model.config, "Toy-model config JSON (profiles its prefill)");
        t->excludes(c);
        app->add_option("--seed", model.seed, "Override the config seed");
        app->add_option("--out-dir", out_dir, "Directory for outputs");
        app->add_option("--out", out_name, "Profile file name");
        app->add_option("--emit-trace", emit_trace, "Also write the toy prefill trace to this file name");
        app->add_flag("--compact", compact, "Write the emitted trace in compact (cosines only) form");
        app->add_flag("--token-cosines", token_cosines, "Include per-token cosines in the profile");
        app->add_option("--threads", threads, "Worker threads for per-layer reductions");
    }

    int run(const Manifest& base, std::ostream& out) const {
        Manifest m = base;
        ProfileOptions opts;
        opts.keep_token_cosines = token_cosines;
        opts.threads = threads;
        CosineProfile profile;
        if (!traces.empty()) {
            std::vector<CosineProfile> parts;
            for (const auto& path : traces) {
                m.inputs.push_back(path);
                opts.source = fs::path(path).filename().string();
                parts.push_back(profile_layers(load_trace(path), opts));
            }
            profile = average_profiles(parts);
            if (parts.size() == 1) profile.source = parts.front().source;
        } else if (!model.config.empty()) {
            const RunConfig cfg = model.load(m);
            const ToyModel toy(cfg.toy_spec());
            const auto prefill = toy_prefill(toy, prompt_for(cfg));
            opts.source = "toy:seed=" + std::to_string(cfg.sim.seed);
            profile = profile_layers(prefill.trace, opts);
            if (!emit_trace.empty()) {
                const fs::path trace_path = fs::path(out_dir) / emit_trace;
                fs::create_directories(trace_path.parent_path());
                save_trace(compact ? prefill.trace.to_compact() : prefill.trace, trace_path);
                m.outputs.push_back(trace_path.string());
            }
        } else {
            throw InvalidArgument("profile needs --trace or --config");
        }
        const fs::path path = fs::path(out_dir) / out_name;
        m.outputs.push_back(path.string());
        write_json_artifact(path, to_json(profile), m);
        out << path.string() << "\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- plan

struct PlanCmd {
    std::string profile_path;
    std::string groups_path;
    std::optional<TokenCount> prompt_len;
    BudgetArgs budget;
    PolicyArgs policy;
    std::string out_dir = ".";
    std::string out_name = "plan.json";

    void attach(CLI::App* app) {
        auto* p = app->add_option("--profile", profile_path, "Cosine profile JSON");
        auto* g = app->add_option("--groups", groups_path, "Explicit groups JSON {\"g1\":[],\"g2\":[],\"g3\":[]}");
        p->excludes(g);
        app->add_option("--prompt-len", prompt_len, "Prompt length for --budget when using --groups");
        budget.attach(app);
        policy.attach(app);
        app->add_option("--out-dir", out_dir, "Directory for outputs");
        app->add_option("--out", out_name, "Plan file name");
    }

    int run(const Manifest& base, std::ostream& out) const {
        Manifest m = base;
        const EvictionPolicy pol = policy.resolve(m);
        LayerGroups groups;
        TokenCount n_prompt = prompt_len.value_or(0);
        if (!profile_path.empty()) {
            m.inputs.push_back(profile_path);
            const auto profile = profile_from_json(read_json_file(profile_path));
            groups = cluster_layers(profile);
            if (!prompt_len) n_prompt = profile.prompt_len;
        } else if (!groups_path.empty()) {
            m.inputs.push_back(groups_path);
            groups = groups_from_json(read_json_file(groups_path));
        } else {
            throw InvalidArgument("plan needs --profile or --groups");
        }
        if (!budget.b_init && n_prompt == 0) throw InvalidArgument("--budget needs a prompt length");
        const TokenCount b_init = budget.resolve(n_prompt);
        const BudgetPlan plan = allocate_budgets(groups, b_init, budget.squeeze_ratio, pol.min_budget());
        const fs::path path = fs::path(out_dir) / out_name;
        m.outputs.push_back(path.string());
        write_json_artifact(path, to_json(plan), m);
        out << path.string() << "\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
    ModelArgs model;
    std::string plan_path;
    BudgetArgs budget;
    PolicyArgs policy;
    std::optional<TokenCount> gen_len;
    std::string mode = "squeeze";
    std::string out_dir = ".";
    std::string name;

    void attach(CLI::App* app) {
        app->add_option("--config", model.config, "Toy-model config JSON")->required();
        app->add_option("--seed", model.seed, "Override the config seed");
        app->add_option("--plan", plan_path, "Budget plan JSON; computed from the prefill profile when omitted");
        budget.attach(app);
        policy.attach(app);
        app->add_option("--gen-len", gen_len, "Tokens to generate (defaults to the config's gen_len)");
        app->add_option("--mode", mode, "squeeze, uniform or full")->check(CLI::IsMember({"squeeze", "uniform", "full"}));
        app->add_option("--out-dir", out_dir, "Directory for outputs");
        app->add_option("--name", name, "Output base name (default report_<mode>)");
    }

    int run(const Manifest& base, std::ostream& out) const {
        Manifest m = base;
        const RunConfig cfg = model.load(m);
        const EvictionPolicy pol = policy.resolve(m);
        const ToyModel toy(cfg.toy_spec());
        const auto prompt = prompt_for(cfg);

        BudgetPlan plan;
        if (!plan_path.empty()) {
            m.inputs.push_back(plan_path);
            plan = plan_from_json(read_json_file(plan_path));
        } else {
            const auto profile = profile_layers(toy_prefill(toy, prompt).trace);
            const TokenCount b_init = budget.resolve(cfg.sim.prompt_len);
            plan = plan_from_profile(profile, b_init, budget.squeeze_ratio, pol);
        }

        DecodeOptions opts;
        opts.gen_len = gen_len.value_or(cfg.sim.gen_len);
        opts.mode = parse_cache_mode(mode);
        opts.batch = cfg.sim.batch;
        opts.prompt_seed = cfg.sim.seed;
        const SimReport report = simulate_decode(toy, prompt, plan, pol, opts);

        const std::string stem = name.empty() ? "report_" + mode : name;
        const fs::path json_path = fs::path(out_dir) / (stem + ".json");
        const fs::path csv_path = fs::path(out_dir) / (stem + ".csv");
        m.outputs = {json_path.string(), csv_path.string()};
        write_json_artifact(json_path, to_json(report), m);
        write_csv_artifact(csv_path, report_csv(report), m);
        out << json_path.string() << "\n" << csv_path.string() << "\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- sweep

struct SweepRow {
    double squeeze_ratio = 1.0;
    TokenCount b_init = 0;
    std::size_t g3_layers = 0;
    TokenCount g3_budget = 0;
    TokenCount other_budget = 0;
    TokenCount total_budget = 0;
    TokenCount global_budget = 0;
    bool conserving = false;
    Bytes peak_bytes = 0;
    double mean_mass = 0.0;
    double min_mass = 0.0;
    std::uint64_t fingerprint = 0;
    std::string status = "ok";
};

struct SweepCmd {
    ModelArgs model;
    PolicyArgs policy;
    BudgetArgs budget;
    std::vector<double> ratios;
    std::vector<double> budgets;
    std::optional<TokenCount> gen_len;
    unsigned jobs = 0;
    std::string out_dir = ".";
    std::string out_name = "sweep.csv";

    void attach(CLI::App* app) {
        app->add_option("--config", model.config, "Toy-model config JSON")->required();
        app->add_option("--seed", model.seed, "Override the config seed");
        policy.attach(app);
        budget.attach(app);
        auto* r = app->add_option("--squeeze-ratios", ratios, "Comma-separated squeeze ratios")->delimiter(',');
        auto* b = app->add_option("--budgets", budgets, "Comma-separated budget fractions of prompt length")
                      ->delimiter(',');
        r->excludes(b);
        app->add_option("--gen-len", gen_len, "Tokens to generate (defaults to the config's gen_len)");
        app->add_option("--jobs", jobs, "Concurrent simulations (0 = hardware threads, capped at 8)");
        app->add_option("--out-dir", out_dir, "Directory for outputs");
        app->add_option("--out", out_name, "Sweep CSV file name");
    }

    int run(const Manifest& base, std::ostream& out) const {
        Manifest m = base;
        const RunConfig cfg = model.load(m);
        const EvictionPolicy pol = policy.resolve(m);
        const ToyModel toy(cfg.toy_spec());
        const auto prompt = prompt_for(cfg);
        const auto profile = profile_layers(toy_prefill(toy, prompt).trace);
        const LayerGroups groups = cluster_layers(profile);
        const std::size_t n = cfg.shape.n_layer;

        struct Point {
            double ratio;
            TokenCount b_init;
        };
        std::vector<Point> points;
        if (!budgets.empty()) {
            for (double f : budgets) points.push_back({budget.squeeze_ratio, budget_from_fraction(f, cfg.sim.prompt_len)});
        } else {
            std::vector<double> rs = ratios;
            if (rs.empty()) {
                for (int i = 1; i <= 10; ++i) rs.push_back(i / 10.0);
            }
            const TokenCount b_init = budget.resolve(cfg.sim.prompt_len);
            for (double r : rs) points.push_back({r, b_init});
        }
        for (const auto& p : points) {
            if (!(p.ratio >= kMinSqueezeRatio && p.ratio <= 1.0)) {
                throw InvalidArgument("squeeze ratio " + std::to_string(p.ratio) + " outside [0.05, 1]");
            }
        }

        DecodeOptions opts;
        opts.gen_len = gen_len.value_or(cfg.sim.gen_len);
        opts.mode = CacheMode::squeeze;
        opts.batch = cfg.sim.batch;
        opts.prompt_seed = cfg.sim.seed;

        std::vector<SweepRow> rows(points.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < points.size(); i = next++) {
                SweepRow& row = rows[i];
                row.squeeze_ratio = points[i].ratio;
                row.b_init = points[i].b_init;
                row.global_budget = n * points[i].b_init;
                try {
                    const BudgetPlan plan = allocate_budgets(groups, row.b_init, row.squeeze_ratio, pol.min_budget());
                    row.g3_layers = groups.g3().size();
                    row.g3_budget = groups.g3().empty() ? 0 : plan.budgets[groups.g3().front()];
                    row.other_budget = plan.budgets[groups.g1().empty() ? groups.g2().front() : groups.g1().front()];
                    row.total_budget = plan.total();
                    row.conserving = row.total_budget <= row.global_budget && row.total_budget + n > row.global_budget;
                    const SimReport rep = simulate_decode(toy, prompt, plan, pol, opts);
                    row.peak_bytes = rep.peak_bytes;
                    row.mean_mass = rep.mean_mass_retained();
                    row.min_mass = rep.min_mass_retained();
                    row.fingerprint = rep.fingerprint;
                } catch (const Error& e) {
                    row.status = e.what();
                }
            }
        };
        unsigned n_jobs = jobs != 0 ? jobs : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
        n_jobs = std::min<unsigned>(n_jobs, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < n_jobs; ++w) pool.emplace_back(worker);
        }

        std::ostringstream csv;
        csv << "squeeze_ratio,b_init,g3_layers,g3_budget,other_budget,total_budget,global_budget,conserving,"
               "peak_bytes,mean_mass_retained,min_mass_retained,fingerprint,status\n";
        for (const auto& r : rows) {
            std::ostringstream fp;
            fp << std::hex << std::setw(16) << std::setfill('0') << r.fingerprint;
            std::string status = r.status;
            std::replace(status.begin(), status.end(), ',', ';');
            csv << format_number(r.squeeze_ratio) << ',' << r.b_init << ',' << r.g3_layers << ',' << r.g3_budget << ','
                << r.other_budget << ',' << r.total_budget << ',' << r.global_budget << ','
                << (r.conserving ? "true" : "false") << ',' << r.peak_bytes << ',' << format_number(r.mean_mass)
                << ',' << format_number(r.min_mass) << ',' << fp.str() << ',' << status << '\n';
        }
        const fs::path path = fs::path(out_dir) / out_name;
        m.outputs.push_back(path.string());
        write_csv_artifact(path, csv.str(), m);
        out << path.string() << "\n";
        const bool failed = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status != "ok"; });
        return failed ? kExitConstraint : kExitOk;
    }
};

// ---------------------------------------------------------------- report

struct ReportCmd {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::string prefix = "report";

    void attach(CLI::App* app) {
        app->add_option("reports", inputs, "SimReport JSON files")->required();
        app->add_option("--out-dir", out_dir, "Directory for outputs");
        app->add_option("--prefix", prefix, "Output file prefix");
    }

    int run(const Manifest& base, std::ostream& out) const {
        Manifest m = base;
        std::vector<SimReport> reports;
        std::vector<std::string> labels;
        for (const auto& path : inputs) {
            m.inputs.push_back(path);
            reports.push_back(report_from_json(read_json_file(path)));
            labels.push_back(fs::path(path).stem().string());
        }
        std::optional<Bytes> full_peak;
        for (const auto& r : reports) {
            if (r.mode == CacheMode::full) full_peak = std::max(full_peak.value_or(0), r.peak_bytes);
        }

        // Per-token memory series, one column per report.
        std::size_t max_steps = 0;
        for (const auto& r : reports) max_steps = std::max(max_steps, r.steps.size());
        std::ostringstream series;
        series << "step";
        for (const auto& l : labels) series << ',' << l << "_bytes";
        series << '\n';
        for (std::size_t s = 0; s <= max_steps; ++s) {
            series << s;
            for (const auto& r : reports) {
                series << ',';
                if (s == 0) {
                    series << r.prefill_bytes;
                } else if (s <= r.steps.size()) {
                    series << r.steps[s - 1].bytes;
                }
            }
            series << '\n';
        }

        std::ostringstream summary;
        summary << "label,mode,policy,prompt_len,gen_len,b_init,squeeze_ratio,peak_bytes,final_bytes,"
                   "bytes_per_token,mean_mass_retained,min_mass_retained,savings_vs_full\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            const Bytes final_bytes = r.steps.empty() ? r.prefill_bytes : r.steps.back().bytes;
            const TokenCount tokens = r.prompt_len + r.steps.size();
            summary << labels[i] << ',' << to_string(r.mode) << ',' << to_string(r.policy.kind) << ','
                    << r.prompt_len << ',' << r.gen_len << ',' << r.plan.b_init << ',' << format_number(r.plan.squeeze_ratio) << ','
                    << r.peak_bytes << ',' << final_bytes << ','
                    << format_number(static_cast<double>(final_bytes) / static_cast<double>(tokens)) << ','
                    << format_number(r.mean_mass_retained()) << ',' << format_number(r.min_mass_retained()) << ',';
            if (full_peak && *full_peak > 0) {
                summary << format_number(1.0 - static_cast<double>(r.peak_bytes) / static_cast<double>(*full_peak));
            }
            summary << '\n';
        }

        const fs::path series_path = fs::path(out_dir) / (prefix + "_memory.csv");
        const fs::path summary_path = fs::path(out_dir) / (prefix + "_summary.csv");
        m.outputs = {series_path.string(), summary_path.string()};
        write_csv_artifact(series_path, series.str(), m);
        write_csv_artifact(summary_path, summary.str(), m);
        out << series_path.string() << "\n" << summary_path.string() << "\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- replay

Json manifest_of(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string first;
    std::getline(in, first);
    if (first.rfind(kManifestPrefix, 0) == 0) {
        try {
            return Json::parse(first.substr(std::string(kManifestPrefix).size()));
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(path + ": bad manifest line: " + e.what());
        }
    }
    const Json doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("manifest")) throw FormatError(path + ": no embedded manifest");
    return doc.at("manifest");
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::invalid_argument:
            return kExitUsage;
        case ErrorKind::input_format:
        case ErrorKind::io:
            return kExitInputFormat;
        case ErrorKind::constraint:
        case ErrorKind::overflow:
            return kExitConstraint;
    }
    return kExitConstraint;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"squeezekv: layer-wise KV-cache budget planning and eviction simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SQUEEZEKV_VERSION);

    ProfileCmd profile;
    PlanCmd plan;
    SimulateCmd simulate;
    SweepCmd sweep;
    ReportCmd report;
    std::string replay_path;

    profile.attach(app.add_subcommand("profile", "Per-layer cosine profile from a trace or the toy model"));
    plan.attach(app.add_subcommand("plan", "Cluster layers and allocate per-layer budgets"));
    simulate.attach(app.add_subcommand("simulate", "Decode the toy model under a budget plan"));
    sweep.attach(app.add_subcommand("sweep", "Simulate one row per squeeze ratio or budget"));
    report.attach(app.add_subcommand("report", "Compare SimReports and emit plot data"));
    auto* replay = app.add_subcommand("replay", "Rerun the command recorded in an artifact's manifest");
    replay->add_option("artifact", replay_path, "JSON or CSV artifact with an embedded manifest")->required();

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("squeezekv");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Manifest m;
    m.command = app.get_subcommands().front()->get_name();
    m.args = args;

    try {
        if (m.command == "profile") return profile.run(m, out);
        if (m.command == "plan") return plan.run(m, out);
        if (m.command == "simulate") return simulate.run(m, out);
        if (m.command == "sweep") return sweep.run(m, out);
        if (m.command == "report") return report.run(m, out);
        if (m.command == "replay") {
            const Json manifest = manifest_of(replay_path);
            return run(manifest.at("args").get<std::vector<std::string>>(), out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputFormat;
    }
    return kExitUsage;
}

}  // namespace squeezekv::cli
