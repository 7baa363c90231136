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

#include "results_io.hpp"
#include "config.hpp"
#include "error.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef AMBC_VERSION
#define AMBC_VERSION "0.0.0"
#endif
#ifndef AMBC_GIT_REVISION
#define AMBC_GIT_REVISION "unknown"
#endif

namespace ambc
{
    using nlohmann::json;

    namespace
    {
        std::string fmt17(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::vector<std::string> split_csv_line(const std::string &line)
        {
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ss(line);
            while (std::getline(ss, cell, ','))
                cells.push_back(cell);
            if (!line.empty() && line.back() == ',')
                cells.emplace_back();
            return cells;
        }

        double parse_double(const std::string &s)
        {
            // strtod reads the 17-digit form back to the identical double
            char *end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0')
                throw Error(ErrorCode::invalid_argument, "malformed number '" + s + "' in CSV");
            return v;
        }

        json optional_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

        json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

        template <typename Fn>
        void with_output(const std::string &path, Fn &&fn)
        {
            if (path == "-")
            {
                fn(std::cout);
                std::cout.flush();
                return;
            }
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open '" + path + "' for writing");
            fn(out);
            out.flush();
            if (!out)
                throw IoError("write to '" + path + "' failed");
        }
    }

    void write_csv(const SweepTable &table, std::ostream &out)
    {
        out << csv_header << '\n';
        for (const auto &r : table.rows)
        {
            out << r.metric << ',' << fmt17(r.snr_db) << ',' << fmt17(r.value) << ','
                << (r.bound_crlb ? fmt17(*r.bound_crlb) : "") << ','
                << (r.bound_lcrlb ? fmt17(*r.bound_lcrlb) : "") << ',' << r.trials << ',' << r.seed << '\n';
        }
    }

    json provenance_json()
    {
        return {{"tool", "ambc"}, {"version", AMBC_VERSION}, {"git_revision", AMBC_GIT_REVISION}};
    }

    json table_to_json(const SweepTable &table)
    {
        json rows = json::array();
        for (const auto &r : table.rows)
            rows.push_back({{"metric", r.metric},
                            {"snr_db", r.snr_db},
                            {"value", r.value},
                            {"bound_crlb", optional_json(r.bound_crlb)},
                            {"bound_lcrlb", optional_json(r.bound_lcrlb)},
                            {"trials", r.trials},
                            {"seed", r.seed}});
        json prov = provenance_json();
        prov["seed"] = table.config.seed;
        prov["trials"] = table.config.trials;
        json doc = {{"kind", table.kind},
                    {"provenance", prov},
                    {"config", config_to_json(table.config)},
                    {"diagnostics", table.diagnostics},
                    {"rows", rows}};
        if (!table.details.is_null())
            doc["details"] = table.details;
        return doc;
    }

    void emit_results(const SweepTable &table, OutputFormat format, const std::string &path)
    {
        if (table.rows.empty())
            std::cerr << "warning: result table '" << table.kind << "' is empty\n";
        with_output(path, [&](std::ostream &out) {
            if (format == OutputFormat::csv)
                write_csv(table, out);
            else
                out << table_to_json(table).dump(2) << '\n';
        });
    }

    std::vector<SweepRow> read_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line) || line != csv_header)
            throw Error(ErrorCode::invalid_argument, "CSV header mismatch");
        std::vector<SweepRow> rows;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            const auto c = split_csv_line(line);
            if (c.size() != 7)
                throw Error(ErrorCode::invalid_argument, "CSV row has " + std::to_string(c.size()) + " cells");
            SweepRow r;
            r.metric = c[0];
            r.snr_db = parse_double(c[1]);
            r.value = parse_double(c[2]);
            if (!c[3].empty())
                r.bound_crlb = parse_double(c[3]);
            if (!c[4].empty())
                r.bound_lcrlb = parse_double(c[4]);
            r.trials = std::stoll(c[5]);
            r.seed = std::stoull(c[6]);
            rows.push_back(std::move(r));
        }
        return rows;
    }

    std::vector<SweepRow> read_csv_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open '" + path + "'");
        return read_csv(in);
    }

    json estimate_report(const ExperimentConfig &cfg, const ChannelParams &truth, const EstimationResult &est,
                         double snr_db)
    {
        auto refined = [](const RefinedEstimate &r) {
            return json{{"bin", r.bin},
                        {"delta", r.delta},
                        {"theta", r.theta_hat},
                        {"gain", complex_json(r.gain_hat)},
                        {"clamped", r.clamped}};
        };
        auto coarse = [](const CoarseEstimate &c) {
            return json{{"bin", c.bin}, {"theta", c.theta_hat}, {"gain", complex_json(c.gain_hat)}, {"clamped", c.clamped}};
        };
        json doc;
        doc["kind"] = "estimate";
        doc["provenance"] = provenance_json();
        doc["config"] = config_to_json(cfg);
        doc["snr_db"] = snr_db;
        doc["truth"] = {{"h0", complex_json(truth.h0)},
                        {"h1", complex_json(truth.h1())},
                        {"h1_over_eta", complex_json(truth.h1() / truth.eta)},
                        {"theta0", truth.theta0},
                        {"theta1", truth.theta1},
                        {"eta", truth.eta}};
        doc["direct"] = {{"coarse", coarse(est.direct_coarse)}, {"refined", refined(est.direct)}};
        doc["backscatter"] = {{"coarse", coarse(est.backscatter_coarse)},
                              {"refined", refined(est.backscatter)},
                              {"h1_over_eta", complex_json(est.h1_over_eta)}};
        return doc;
    }

    json bounds_report(const BoundInputs &in, const BoundsResult &res)
    {
        json fisher = json::array();
        for (int r = 0; r < 4; ++r)
        {
            json row = json::array();
            for (int c = 0; c < 4; ++c)
                row.push_back(res.fisher(r, c));
            fisher.push_back(row);
        }
        return {{"inputs",
                 {{"abs_h0", in.abs_h0}, {"abs_h1", in.abs_h1}, {"omega0", in.omega0}, {"omega1", in.omega1},
                  {"theta0", in.theta0}, {"theta1", in.theta1}, {"eta", in.eta}, {"M", in.M}, {"N", in.N},
                  {"P_s", in.power}, {"sigma2", in.sigma2}, {"spacing_ratio", in.spacing_ratio}}},
                {"order", {"abs_h0", "abs_h1_over_eta", "theta0", "theta1"}},
                {"fisher", fisher},
                {"crlb_numeric", res.crlb_numeric},
                {"crlb_closed", res.crlb_closed},
                {"lcrlb", res.lcrlb},
                {"state0", bounds_state0(in)}};
    }

    void write_json(const json &doc, const std::string &path)
    {
        with_output(path, [&](std::ostream &out) { out << doc.dump(2) << '\n'; });
    }
}
