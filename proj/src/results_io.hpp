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

#ifndef AMBC_RESULTS_IO_HPP
#define AMBC_RESULTS_IO_HPP

#include "bounds.hpp"
#include "estimation.hpp"
#include "experiments.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace ambc
{
    enum class OutputFormat
    {
        csv,
        json
    };

    inline constexpr const char *csv_header = "metric,snr_db,value,bound_crlb,bound_lcrlb,trials,seed";

    // Doubles are written with 17 significant digits.
    void write_csv(const SweepTable &table, std::ostream &out);
    nlohmann::json table_to_json(const SweepTable &table);

    // Writes to `path`, or stdout when path is "-". Empty tables produce a
    // header-only CSV and a warning on stderr. Throws IoError.
    void emit_results(const SweepTable &table, OutputFormat format, const std::string &path);

    std::vector<SweepRow> read_csv(std::istream &in);
    std::vector<SweepRow> read_csv_file(const std::string &path);

    nlohmann::json provenance_json();

    nlohmann::json estimate_report(const ExperimentConfig &cfg, const ChannelParams &truth, const EstimationResult &est,
                                   double snr_db);

    nlohmann::json bounds_report(const BoundInputs &in, const BoundsResult &res);

    void write_json(const nlohmann::json &doc, const std::string &path);
}

#endif
