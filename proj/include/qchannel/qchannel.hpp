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

// Umbrella header for the engines and analysis. config.hpp, io.hpp and
// checks.hpp pull in Boost.PropertyTree and nlohmann/json and are included
// separately.

#pragma once

#include "qchannel/analysis.hpp"
#include "qchannel/channel_exact.hpp"
#include "qchannel/channel_lowrank.hpp"
#include "qchannel/gates.hpp"
#include "qchannel/kraus.hpp"
#include "qchannel/linalg.hpp"
#include "qchannel/oracle.hpp"
#include "qchannel/parallel.hpp"
#include "qchannel/register_ops.hpp"
#include "qchannel/rng.hpp"
#include "qchannel/slice_stream.hpp"
#include "qchannel/trajectory.hpp"
#include "qchannel/version.hpp"
