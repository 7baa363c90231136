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

#include "config.hpp"
#include "error.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace ambc
{
    using nlohmann::json;

    namespace
    {
        [[noreturn]] void bad_value(const std::string &key, const json &v, const char *expected)
        {
            throw Error(ErrorCode::invalid_argument,
                        "config key '" + key + "': expected " + expected + ", got " + v.dump());
        }

        double as_double(const std::string &key, const json &v)
        {
            if (!v.is_number())
                bad_value(key, v, "a number");
            return v.get<double>();
        }

        std::int64_t as_int(const std::string &key, const json &v)
        {
            if (v.is_number_integer())
                return v.get<std::int64_t>();
            if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()))
                return static_cast<std::int64_t>(v.get<double>());
            bad_value(key, v, "an integer");
        }

        bool as_bool(const std::string &key, const json &v)
        {
            if (!v.is_boolean())
                bad_value(key, v, "true or false");
            return v.get<bool>();
        }

        std::vector<double> as_list(const std::string &key, const json &v)
        {
            if (v.is_number())
                return {v.get<double>()};
            if (!v.is_array())
                bad_value(key, v, "a list of numbers");
            std::vector<double> out;
            for (const auto &x : v)
                out.push_back(as_double(key, x));
            return out;
        }

        cd as_complex(const std::string &key, const json &v)
        {
            if (v.is_number())
                return {v.get<double>(), 0.0};
            if (!v.is_array() || v.size() != 2)
                bad_value(key, v, "[re, im]");
            return {as_double(key, v[0]), as_double(key, v[1])};
        }

        std::string as_string(const std::string &key, const json &v)
        {
            if (!v.is_string())
                bad_value(key, v, "a string");
            return v.get<std::string>();
        }

        using Setter = std::function<void(ExperimentConfig &, const std::string &, const json &)>;

        const std::map<std::string, Setter> &setters()
        {
            static const std::map<std::string, Setter> table = {
                {"array.num_antennas", [](auto &c, auto &k, auto &v) { c.array.num_antennas = static_cast<int>(as_int(k, v)); }},
                {"array.spacing_ratio", [](auto &c, auto &k, auto &v) { c.array.spacing_ratio = as_double(k, v); }},
                {"N", [](auto &c, auto &k, auto &v) { c.N = static_cast<int>(as_int(k, v)); }},
                {"eta", [](auto &c, auto &k, auto &v) { c.eta = as_double(k, v); }},
                {"sigma2", [](auto &c, auto &k, auto &v) { c.sigma2 = as_double(k, v); }},
                {"snr_points_db", [](auto &c, auto &k, auto &v) { c.snr_points_db = as_list(k, v); }},
                {"trials", [](auto &c, auto &k, auto &v) { c.trials = as_int(k, v); }},
                {"seed", [](auto &c, auto &k, auto &v) {
                     if (v.is_number_unsigned())
                         c.seed = v.template get<std::uint64_t>();
                     else
                         c.seed = static_cast<std::uint64_t>(as_int(k, v));
                 }},
                {"theta0", [](auto &c, auto &k, auto &v) { c.theta0 = as_double(k, v); }},
                {"theta1", [](auto &c, auto &k, auto &v) { c.theta1 = as_double(k, v); }},
                {"random_angles", [](auto &c, auto &k, auto &v) { c.random_angles = as_bool(k, v); }},
                {"fading_mode", [](auto &c, auto &k, auto &v) {
                     const std::string s = as_string(k, v);
                     if (s == "fixed-angles-random-gains")
                         c.fading_mode = FadingMode::fixed_angles_random_gains;
                     else if (s == "fully-fixed")
                         c.fading_mode = FadingMode::fully_fixed;
                     else
                         bad_value(k, v, "\"fixed-angles-random-gains\" or \"fully-fixed\"");
                 }},
                {"channel.h0", [](auto &c, auto &k, auto &v) { c.fixed_channel.h0 = as_complex(k, v); }},
                {"channel.h_st", [](auto &c, auto &k, auto &v) { c.fixed_channel.h_st = as_complex(k, v); }},
                {"channel.h_tr", [](auto &c, auto &k, auto &v) { c.fixed_channel.h_tr = as_complex(k, v); }},
                {"outage_thresholds_db", [](auto &c, auto &k, auto &v) { c.outage_thresholds_db = as_list(k, v); }},
                {"outage_tag_state", [](auto &c, auto &k, auto &v) { c.outage_tag_state = static_cast<int>(as_int(k, v)); }},
                {"pilot_pattern", [](auto &c, auto &k, auto &v) {
                     const std::string s = as_string(k, v);
                     if (s == "alternating")
                         c.pilot_pattern = PilotPattern::alternating;
                     else if (s == "constant")
                         c.pilot_pattern = PilotPattern::constant;
                     else
                         bad_value(k, v, "\"alternating\" or \"constant\"");
                 }},
                {"estimator.ls_mode", [](auto &c, auto &k, auto &v) {
                     const std::string s = as_string(k, v);
                     if (s == "transpose")
                         c.estimator.ls_mode = LsMode::transpose;
                     else if (s == "conjugate")
                         c.estimator.ls_mode = LsMode::conjugate;
                     else
                         bad_value(k, v, "\"transpose\" or \"conjugate\"");
                 }},
                {"estimator.separation", [](auto &c, auto &k, auto &v) {
                     const std::string s = as_string(k, v);
                     if (s == "subtract")
                         c.estimator.separation = Separation::subtract;
                     else if (s == "two-peaks")
                         c.estimator.separation = Separation::two_peaks;
                     else
                         bad_value(k, v, "\"subtract\" or \"two-peaks\"");
                 }},
                {"estimator.grid_points", [](auto &c, auto &k, auto &v) { c.estimator.grid_points = static_cast<int>(as_int(k, v)); }},
                {"estimator.tolerance", [](auto &c, auto &k, auto &v) { c.estimator.tolerance = as_double(k, v); }},
                {"estimator.newton_polish", [](auto &c, auto &k, auto &v) { c.estimator.newton_polish = as_bool(k, v); }},
                {"threads", [](auto &c, auto &k, auto &v) {
                     const auto t = as_int(k, v);
                     if (t < 0)
                         bad_value(k, v, "a non-negative integer");
                     c.threads = static_cast<unsigned>(t);
                 }},
            };
            return table;
        }

        void flatten(const json &node, const std::string &prefix, std::vector<std::pair<std::string, json>> &out)
        {
            for (auto it = node.begin(); it != node.end(); ++it)
            {
                const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
                if (it->is_object())
                    flatten(*it, key, out);
                else
                    out.emplace_back(key, *it);
            }
        }

        json complex_json(cd z) { return json::array({z.real(), z.imag()}); }
    }

    std::vector<std::string> config_keys()
    {
        std::vector<std::string> keys;
        for (const auto &[k, _] : setters())
            keys.push_back(k);
        return keys;
    }

    void set_config_value(ExperimentConfig &cfg, const std::string &key, const json &value)
    {
        const auto &table = setters();
        const auto it = table.find(key);
        if (it == table.end())
            throw Error(ErrorCode::unknown_key, "unknown config key '" + key + "'");
        it->second(cfg, key, value);
    }

    void apply_override(ExperimentConfig &cfg, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorCode::invalid_argument, "override '" + assignment + "' is not of the form key=value");
        const std::string key = assignment.substr(0, eq);
        const std::string text = assignment.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded())
            value = text;
        set_config_value(cfg, key, value);
    }

    ExperimentConfig config_from_json(const json &doc, ExperimentConfig base)
    {
        if (!doc.is_object())
            throw Error(ErrorCode::invalid_argument, "config document must be a JSON object");
        std::vector<std::pair<std::string, json>> entries;
        flatten(doc, "", entries);
        for (const auto &[k, v] : entries)
            set_config_value(base, k, v);
        return base;
    }

    ExperimentConfig load_config(const std::string &path, ExperimentConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorCode::invalid_argument, "config file '" + path + "' is not valid JSON");
        return config_from_json(doc, std::move(base));
    }

    json config_to_json(const ExperimentConfig &c)
    {
        json j;
        j["array.num_antennas"] = c.array.num_antennas;
        j["array.spacing_ratio"] = c.array.spacing_ratio;
        j["N"] = c.N;
        j["eta"] = c.eta;
        j["sigma2"] = c.sigma2;
        j["snr_points_db"] = c.snr_points_db;
        j["trials"] = c.trials;
        j["seed"] = c.seed;
        j["theta0"] = c.theta0;
        j["theta1"] = c.theta1;
        j["random_angles"] = c.random_angles;
        j["fading_mode"] = c.fading_mode == FadingMode::fully_fixed ? "fully-fixed" : "fixed-angles-random-gains";
        j["channel.h0"] = complex_json(c.fixed_channel.h0);
        j["channel.h_st"] = complex_json(c.fixed_channel.h_st);
        j["channel.h_tr"] = complex_json(c.fixed_channel.h_tr);
        j["outage_thresholds_db"] = c.outage_thresholds_db;
        j["outage_tag_state"] = c.outage_tag_state;
        j["pilot_pattern"] = c.pilot_pattern == PilotPattern::constant ? "constant" : "alternating";
        j["estimator.ls_mode"] = c.estimator.ls_mode == LsMode::conjugate ? "conjugate" : "transpose";
        j["estimator.separation"] = c.estimator.separation == Separation::two_peaks ? "two-peaks" : "subtract";
        j["estimator.grid_points"] = c.estimator.grid_points;
        j["estimator.tolerance"] = c.estimator.tolerance;
        j["estimator.newton_polish"] = c.estimator.newton_polish;
        j["threads"] = c.threads;
        return j;
    }
}
