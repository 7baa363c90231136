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

#include "cli.hpp"

#include <ambc/ambc.h>
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>

namespace ambc_cli
{
    namespace
    {
        int exit_for(ambc_status s)
        {
            switch (s)
            {
            case AMBC_OK: return exit_ok;
            case AMBC_ERR_INVALID_ARGUMENT:
            case AMBC_ERR_UNKNOWN_KEY:
            case AMBC_ERR_DOMAIN: return exit_usage;
            case AMBC_ERR_IO: return exit_io;
            case AMBC_ERR_SINGULAR_FISHER:
            case AMBC_ERR_DEGENERATE_GEOMETRY:
            case AMBC_ERR_ILL_CONDITIONED_PILOTS: return exit_numerical;
            default: return exit_failure;
            }
        }

        int report(ambc_status s, const char *what)
        {
            if (s != AMBC_OK)
                std::cerr << "ambc " << what << ": " << ambc_last_error() << '\n';
            return exit_for(s);
        }

        struct ConfigDeleter
        {
            void operator()(ambc_config *c) const { ambc_config_destroy(c); }
        };
        struct TableDeleter
        {
            void operator()(ambc_table *t) const { ambc_table_destroy(t); }
        };
        using ConfigPtr = std::unique_ptr<ambc_config, ConfigDeleter>;
        using TablePtr = std::unique_ptr<ambc_table, TableDeleter>;

        int write_text(const std::string &text, const std::string &path)
        {
            if (path == "-")
            {
                std::cout << text << '\n';
                return exit_ok;
            }
            std::FILE *f = std::fopen(path.c_str(), "wb");
            if (!f)
            {
                std::cerr << "ambc: cannot open '" << path << "' for writing\n";
                return exit_io;
            }
            const bool ok = std::fputs(text.c_str(), f) >= 0 && std::fputc('\n', f) != EOF;
            const bool closed = std::fclose(f) == 0;
            if (!ok || !closed)
            {
                std::cerr << "ambc: write to '" << path << "' failed\n";
                return exit_io;
            }
            return exit_ok;
        }
    }

    ParseResult parse_cli(const std::vector<std::string> &args)
    {
        CLI::App app{"Channel estimation for ambient backscatter readers with a uniform linear array", "ambc"};
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(ambc_version()));

        CliCommand cmd;
        const std::vector<std::pair<std::string, std::string>> subs = {
            {"estimate", "Single-trial estimate (JSON report)"},
            {"bounds", "CRLB / LCRLB table at the configured nominal gains"},
            {"mse-sweep", "Monte-Carlo MSE of DoAs, gains and channel vectors versus transmit SNR"},
            {"outage-sweep", "Selection-combining outage with perfect and estimated CSI"},
            {"selftest", "Run the built-in consistency checks"}};

        for (const auto &[name, help] : subs)
        {
            CLI::App *sub = app.add_subcommand(name, help);
            if (name == "selftest")
                continue;
            sub->add_option("-c,--config", cmd.config_path, "JSON configuration file")->check(CLI::ExistingFile);
            sub->add_option("-o,--output", cmd.output_path, "Output path, '-' for stdout");
            sub->add_option("-s,--set", cmd.overrides, "Override a config entry, key=value (repeatable)");
            if (name != "estimate")
                sub->add_option("-f,--format", cmd.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        }

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &e)
        {
            return {std::nullopt, exit_ok, app.help()};
        }
        catch (const CLI::CallForVersion &e)
        {
            return {std::nullopt, exit_ok, std::string(ambc_version())};
        }
        catch (const CLI::ParseError &e)
        {
            return {std::nullopt, exit_usage, std::string(e.what()) + "\n" + app.help()};
        }

        cmd.subcommand = app.get_subcommands().front()->get_name();
        for (const auto &o : cmd.overrides)
        {
            const auto eq = o.find('=');
            if (eq == std::string::npos || eq == 0)
                return {std::nullopt, exit_usage, "override '" + o + "' is not of the form key=value"};
            const std::string key = o.substr(0, eq);
            if (!ambc_config_has_key(key.c_str()))
                return {std::nullopt, exit_usage, "unknown config key '" + key + "'"};
        }
        return {cmd, exit_ok, {}};
    }

    int run_command(const CliCommand &cmd)
    {
        if (cmd.subcommand == "selftest")
        {
            int passed = 0;
            const ambc_status s = ambc_selftest(
                [](const char *text, void *) { std::cout << text; }, nullptr, &passed);
            if (s != AMBC_OK)
                return report(s, "selftest");
            return passed ? exit_ok : exit_failure;
        }

        ambc_config *raw = nullptr;
        if (const ambc_status s = ambc_config_create(&raw); s != AMBC_OK)
            return report(s, "config");
        ConfigPtr cfg(raw);

        if (!cmd.config_path.empty())
            if (const ambc_status s = ambc_config_load(cfg.get(), cmd.config_path.c_str()); s != AMBC_OK)
                return report(s, "config");

        for (const auto &o : cmd.overrides)
        {
            const auto eq = o.find('=');
            const std::string key = o.substr(0, eq), value = o.substr(eq + 1);
            if (const ambc_status s = ambc_config_set(cfg.get(), key.c_str(), value.c_str()); s != AMBC_OK)
                return report(s, "--set");
        }

        if (cmd.subcommand == "estimate")
        {
            char *json = nullptr;
            if (const ambc_status s = ambc_run_estimate(cfg.get(), &json); s != AMBC_OK)
                return report(s, "estimate");
            const std::string text(json);
            ambc_string_free(json);
            return write_text(text, cmd.output_path);
        }

        ambc_table *table_raw = nullptr;
        ambc_status s = AMBC_ERR_INVALID_ARGUMENT;
        if (cmd.subcommand == "bounds")
            s = ambc_run_bounds(cfg.get(), &table_raw);
        else if (cmd.subcommand == "mse-sweep")
            s = ambc_run_mse_sweep(cfg.get(), &table_raw);
        else if (cmd.subcommand == "outage-sweep")
            s = ambc_run_outage_sweep(cfg.get(), &table_raw);
        else
        {
            std::cerr << "ambc: unknown subcommand '" << cmd.subcommand << "'\n";
            return exit_usage;
        }
        if (s != AMBC_OK)
            return report(s, cmd.subcommand.c_str());
        TablePtr table(table_raw);

        const ambc_format fmt = cmd.format == "json" ? AMBC_FORMAT_JSON : AMBC_FORMAT_CSV;
        return report(ambc_table_write(table.get(), fmt, cmd.output_path.c_str()), "output");
    }

    int main_entry(int argc, char **argv)
    {
        std::vector<std::string> args(argv + 1, argv + argc);
        const ParseResult parsed = parse_cli(args);
        if (!parsed.command)
        {
            (parsed.exit_code == exit_ok ? std::cout : std::cerr) << parsed.message << '\n';
            return parsed.exit_code;
        }
        return run_command(*parsed.command);
    }
}
