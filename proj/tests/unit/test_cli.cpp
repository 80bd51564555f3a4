// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "cli_harness.hpp"
#include "squeezekv/serialize.hpp"

using namespace squeezekv;
using namespace squeezekv::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = SQUEEZEKV_TEST_TMP;

fs::path write_config(const fs::path& dir) {
    const auto path = dir / "model.json";
    spit(path, R"({"n_layer":8,"d_model":32,"n_heads":4,"prompt_len":40,"gen_len":12,"seed":7})");
    return path;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"bogus"}).code == 2);
    CHECK(run_cli({"plan", "--b-init", "10"}).code == 2);
    CHECK(run_cli({"--version"}).code == 0);
}

TEST_CASE("profile plan simulate pipeline") {
    const auto dir = fresh_dir(kRoot / "pipeline");
    const auto cfg = write_config(dir).string();
    const auto d = dir.string();
    REQUIRE(run_cli({"profile", "--config", cfg, "--out-dir", d, "--emit-trace", "trace.bin"}).code == 0);
    CHECK(fs::exists(dir / "profile.json"));
    CHECK(fs::exists(dir / "trace.bin"));

    const auto from_trace = dir / "from_trace";
    REQUIRE(run_cli({"profile", "--trace", (dir / "trace.bin").string(), "--out-dir", from_trace.string()}).code == 0);
    const auto a = read_json_file(dir / "profile.json");
    const auto b = read_json_file(from_trace / "profile.json");
    CHECK(a["layers"] == b["layers"]);

    REQUIRE(run_cli({"plan", "--profile", (dir / "profile.json").string(), "--budget", "0.25", "--policy", "h2o",
                 "--out-dir", d})
                .code == 0);
    const auto plan = plan_from_json(read_json_file(dir / "plan.json"));
    CHECK(plan.b_init == 10);
    CHECK(plan.budgets.size() == 8);

    for (const char* mode : {"squeeze", "uniform", "full"}) {
        REQUIRE(run_cli({"simulate", "--config", cfg, "--plan", (dir / "plan.json").string(), "--policy", "h2o", "--mode",
                     mode, "--out-dir", d})
                    .code == 0);
    }
    const auto sq = read_json_file(dir / "report_squeeze.json");
    const auto full = read_json_file(dir / "report_full.json");
    CHECK(sq["peak_bytes"].get<std::uint64_t>() < full["peak_bytes"].get<std::uint64_t>());

    REQUIRE(run_cli({"report", (dir / "report_full.json").string(), (dir / "report_squeeze.json").string(), "--out-dir", d})
                .code == 0);
}

TEST_CASE("outputs are byte-identical across reruns and replay") {
    const auto dir = fresh_dir(kRoot / "determinism");
    const auto cfg = write_config(dir).string();
    const std::vector<std::string> args{"simulate", "--config", cfg, "--budget", "0.3", "--policy", "streaming",
                                        "--n-sink", "2", "--out-dir", dir.string()};
    REQUIRE(run_cli(args).code == 0);
    const auto json1 = slurp(dir / "report_squeeze.json");
    const auto csv1 = slurp(dir / "report_squeeze.csv");
    REQUIRE(run_cli(args).code == 0);
    CHECK(slurp(dir / "report_squeeze.json") == json1);
    REQUIRE(run_cli({"replay", (dir / "report_squeeze.csv").string()}).code == 0);
    CHECK(slurp(dir / "report_squeeze.json") == json1);
    CHECK(slurp(dir / "report_squeeze.csv") == csv1);
}

TEST_CASE("input errors exit 3") {
    const auto dir = fresh_dir(kRoot / "errors");
    CHECK(run_cli({"profile", "--trace", (dir / "missing.bin").string(), "--out-dir", dir.string()}).code == 3);
    spit(dir / "bad.bin", "NOTATRACE_________________");
    CHECK(run_cli({"profile", "--trace", (dir / "bad.bin").string(), "--out-dir", dir.string()}).code == 3);
    spit(dir / "bad.json", "{");
    CHECK(run_cli({"plan", "--profile", (dir / "bad.json").string(), "--b-init", "8", "--out-dir", dir.string()}).code == 3);
}

TEST_CASE("constraint violations exit 4") {
    const auto dir = fresh_dir(kRoot / "constraints");
    spit(dir / "all_g3.json", R"({"g1":[],"g2":[],"g3":[0,1,2]})");
    const auto r = run_cli({"plan", "--groups", (dir / "all_g3.json").string(), "--b-init", "100", "--out-dir", dir.string()});
    CHECK(r.code == 4);
    CHECK(r.err.find("g3") != std::string::npos);
    spit(dir / "groups.json", R"({"g1":[0],"g2":[1],"g3":[2]})");
    CHECK(run_cli({"plan", "--groups", (dir / "groups.json").string(), "--b-init", "2", "--squeeze-ratio", "0.1",
               "--policy", "h2o", "--out-dir", dir.string()})
              .code == 4);
}

TEST_CASE("sweep emits one row per ratio") {
    const auto dir = fresh_dir(kRoot / "sweep");
    const auto cfg = write_config(dir).string();
    REQUIRE(run_cli({"sweep", "--config", cfg, "--b-init", "20", "--policy", "h2o", "--jobs", "3", "--out-dir",
                 dir.string()})
                .code == 0);
    const auto text = slurp(dir / "sweep.csv");
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 12);  // manifest, header, 10 rows
    CHECK(text.find(",false,") == std::string::npos);
}
