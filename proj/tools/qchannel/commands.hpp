// Copyright 2026 The qchannel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

#include "qchannel/config.hpp"

namespace qchannel::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadConfig = 2, kRuntimeError = 3 };

/// Settings a command starts from before the config file and flags apply.
Settings command_defaults(const std::string& command);

/// Per-realization seed: derive_seed(derive_seed(master, depth), realization).
std::uint64_t realization_seed(std::uint64_t master, int depth, std::size_t realization);

/// Runs a validated configuration, writes its tables and manifest, and
/// returns the process exit code.
int run(const RunConfig& config);

}  // namespace qchannel::cli
