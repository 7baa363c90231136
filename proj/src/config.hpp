// SPDX-License-Identifier: Apache-2.0
//
// ambc-chest: channel estimation for ambient backscatter readers with large ULAs
// Copyright (C) 2026 The ambc-chest authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef AMBC_CONFIG_HPP
#define AMBC_CONFIG_HPP

#include "experiments.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace ambc
{
    // Flat dotted keys, e.g. "array.num_antennas", "estimator.separation".
    std::vector<std::string> config_keys();

    // Throws Error(unknown_key) for keys outside config_keys() and
    // Error(invalid_argument) for values of the wrong type.
    void set_config_value(ExperimentConfig &cfg, const std::string &key, const nlohmann::json &value);

    // "key=value"; the value is parsed as JSON when possible, else taken as a string.
    void apply_override(ExperimentConfig &cfg, const std::string &assignment);

    // Nested objects are flattened to dotted keys before they are applied.
    ExperimentConfig config_from_json(const nlohmann::json &doc, ExperimentConfig base = {});
    ExperimentConfig load_config(const std::string &path, ExperimentConfig base = {});

    nlohmann::json config_to_json(const ExperimentConfig &cfg);
}

#endif
