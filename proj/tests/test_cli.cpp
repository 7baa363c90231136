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

#include <doctest.h>

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ambc_cli;

namespace
{
    int run(const std::vector<std::string> &args)
    {
        const ParseResult p = parse_cli(args);
        if (!p.command)
            return p.exit_code;
        return run_command(*p.command);
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
}

TEST_CASE("parsing")
{
    const ParseResult p = parse_cli({"mse-sweep", "--set", "trials=100", "-s", "seed=3", "-f", "json", "-o", "x.json"});
    REQUIRE(p.command);
    CHECK(p.command->subcommand == "mse-sweep");
    CHECK(p.command->overrides == std::vector<std::string>{"trials=100", "seed=3"});
    CHECK(p.command->format == "json");
    CHECK(p.command->output_path == "x.json");

    const ParseResult d = parse_cli({"bounds"});
    REQUIRE(d.command);
    CHECK(d.command->output_path == "-");
    CHECK(d.command->format == "csv");
}

TEST_CASE("usage errors exit 2")
{
    CHECK(parse_cli({"bogus"}).exit_code == exit_usage);
    CHECK(parse_cli({}).exit_code == exit_usage);
    CHECK(parse_cli({"bounds", "-f", "xml"}).exit_code == exit_usage);
    CHECK(parse_cli({"bounds", "--set", "nonsense=1"}).exit_code == exit_usage);
    CHECK(parse_cli({"bounds", "--set", "trials"}).exit_code == exit_usage);
    CHECK(parse_cli({"bounds", "-c", "/nonexistent/cfg.json"}).exit_code == exit_usage);
    CHECK(parse_cli({"estimate", "-f", "csv"}).exit_code == exit_usage);
    CHECK(run({"bounds", "--set", "trials=abc"}) == exit_usage);
    CHECK(run({"bounds", "--set", "eta=2"}) == exit_usage);

    const ParseResult h = parse_cli({"--help"});
    CHECK_FALSE(h.command);
    CHECK(h.exit_code == exit_ok);
    CHECK(h.message.find("mse-sweep") != std::string::npos);
}

TEST_CASE("io and numerical failures")
{
    CHECK(run({"bounds", "-o", "/nonexistent/dir/out.csv"}) == exit_io);
    CHECK(run({"bounds", "--set", "theta0=0.3", "--set", "theta1=0.3"}) == exit_numerical);
}

TEST_CASE("overrides reach the sweep")
{
    const auto out = std::filesystem::temp_directory_path() / "ambc_cli_test.csv";
    REQUIRE(run({"mse-sweep", "--set", "trials=100", "--set", "array.num_antennas=16", "--set", "snr_points_db=[5]",
                 "-o", out.string()}) == exit_ok);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("metric,snr_db,value,bound_crlb,bound_lcrlb,trials,seed\n", 0) == 0);
    CHECK(csv.find("theta0,5,") != std::string::npos);
    CHECK(csv.find(",100,20190417\n") != std::string::npos);
    std::filesystem::remove(out);

    const auto cfg = std::filesystem::temp_directory_path() / "ambc_cli_test.json";
    {
        std::ofstream c(cfg);
        c << R"({"trials": 7, "snr_points_db": [0], "array": {"num_antennas": 8}})";
    }
    REQUIRE(run({"outage-sweep", "-c", cfg.string(), "-f", "json", "-o", out.string()}) == exit_ok);
    CHECK(slurp(out).find("\"trials\": 7") != std::string::npos);
    std::filesystem::remove(out);
    std::filesystem::remove(cfg);
}
