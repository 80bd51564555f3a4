// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace squeezekv::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitInputFormat = 3,
    kExitConstraint = 4,
};

/// Entry point shared by the `squeezekv` binary and the tests. `args` excludes
/// the program name. Subcommands: profile, plan, simulate, sweep, report, replay.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace squeezekv::cli
