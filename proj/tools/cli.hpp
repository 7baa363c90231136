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

#ifndef AMBC_TOOLS_CLI_HPP
#define AMBC_TOOLS_CLI_HPP

#include <optional>
#include <string>
#include <vector>

namespace ambc_cli
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_failure = 1,
        exit_usage = 2,
        exit_io = 3,
        exit_numerical = 4
    };

    struct CliCommand
    {
        std::string subcommand; // estimate | bounds | mse-sweep | outage-sweep | selftest
        std::string config_path;
        std::string output_path = "-";
        std::string format = "csv";
        std::vector<std::string> overrides; // key=value, applied after the config file
    };

    struct ParseResult
    {
        std::optional<CliCommand> command;
        int exit_code = exit_ok;
        std::string message; // usage/help text when no command was produced
    };

    // args excludes the program name.
    ParseResult parse_cli(const std::vector<std::string> &args);

    int run_command(const CliCommand &cmd);

    int main_entry(int argc, char **argv);
}

#endif
