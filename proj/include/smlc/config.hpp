// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Line-based `key = value` scenario files. A file must name its plant; every
// other key defaults to the preset of that plant (acc -> scenario1,
// numeric2 -> scenario2).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smlc/sim.hpp"

namespace smlc {

/// "scenario1" (cruise control) or "scenario2" (second-order numeric plant).
ScenarioConfig preset(const std::string& name);

const std::vector<std::string>& preset_names();

const std::vector<std::string>& config_keys();

ScenarioConfig parse_config(const std::filesystem::path& path);

ScenarioConfig parse_config_text(const std::string& text);

/// Sets one key on an existing config; `line` is only used in messages.
void apply_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                        int line = 0);

/// One `key = value` line per key, in config_keys() order.
std::string format_config(const ScenarioConfig& cfg);

}  // namespace smlc
