/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flowgnn/plan.hpp"

namespace flowgnn {

using Settings = std::map<std::string, std::string>;

/// Reads "key = value" lines; '#' starts a comment. Throws ConfigError with the line number.
Settings read_settings_file(const std::string& path);
Settings parse_settings(std::string_view text);

/// Applies one setting. Keys use the names listed by `plan_keys()` ("lambda" is accepted for
/// explosion_factor); throws ConfigError on an unknown key or a malformed value.
void apply_setting(PipelinePlan& plan, const std::string& key, const std::string& value);
void apply_settings(PipelinePlan& plan, const Settings& settings);

/// Every plan key with its current value, for echoing into run metadata.
Settings describe_plan(const PipelinePlan& plan);
std::vector<std::string> plan_keys();

}  // namespace flowgnn
