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

#ifndef AMBC_EXPERIMENTS_HPP
#define AMBC_EXPERIMENTS_HPP

#include "estimation.hpp"
#include "signal.hpp"

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ambc
{
    enum class FadingMode
    {
        fixed_angles_random_gains, // gains CN(0,1) per trial, angles from the config
        fully_fixed                // fixed_channel every trial
    };

    struct ExperimentConfig
    {
        ArrayConfig array{128, 0.5};
        int N = 1;
        double eta = 0.5;
        double sigma2 = 1.0;
        std::vector<double> snr_points_db{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
        std::int64_t trials = 10000;
        std::uint64_t seed = 20190417;
        double theta0 = -std::numbers::pi / 4.0;
        double theta1 = std::numbers::pi / 5.0;
        bool random_angles = false;
        FadingMode fading_mode = FadingMode::fixed_angles_random_gains;
        ChannelParams fixed_channel{};        // gains used in fully_fixed mode
        std::vector<double> outage_thresholds_db{-5.0, 0.0, 5.0};
        int outage_tag_state = 1;
        PilotPattern pilot_pattern = PilotPattern::alternating;
        EstimatorOptions estimator{};
        unsigned threads = 0;                 // 0: AMBC_THREADS, else hardware concurrency

        void validate() const;
        double pilot_power(double snr_db) const; // P_s = sigma2 10^(snr/10)
    };

    struct SweepRow
    {
        std::string metric;
        double snr_db = 0.0;
        double value = 0.0;
        std::optional<double> bound_crlb;
        std::optional<double> bound_lcrlb;
        std::int64_t trials = 0;
        std::uint64_t seed = 0;
    };

    struct SweepTable
    {
        std::string kind; // "mse-sweep", "outage-sweep", "bounds"
        ExperimentConfig config;
        std::vector<SweepRow> rows;
        std::map<std::string, std::int64_t> diagnostics;
        nlohmann::json details; // optional per-kind payload for the JSON bundle

        const SweepRow *find(const std::string &metric, double snr_db) const;
    };

    // Compensated (Neumaier) running mean.
    class MeanAccumulator
    {
    public:
        void add(double x);
        std::int64_t count() const { return n_; }
        double sum() const { return sum_ + comp_; }
        double mean() const; // throws Error(empty_input) when nothing was added

    private:
        double sum_ = 0.0;
        double comp_ = 0.0;
        std::int64_t n_ = 0;
    };

    double aggregate_mse(std::span<const double> squared_errors);

    // Per-trial stream seed: splitmix64(seed ^ splitmix64(trial)).
    std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

    unsigned resolve_threads(unsigned requested);

    // Runs body(i) for i in [0, n) on `threads` workers. Work items are independent.
    void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)> &body);

    // Draws the channel and both pilot frames of one trial.
    struct TrialData
    {
        ChannelParams channel;
        PilotFrame pilots;
        ReceivedFrame frame0;
        ReceivedFrame frame1;
    };
    TrialData simulate_trial(const ExperimentConfig &cfg, std::int64_t trial, double pilot_power);

    SweepTable run_mse_sweep(const ExperimentConfig &cfg);
    SweepTable run_outage_sweep(const ExperimentConfig &cfg);

    // Bounds at the config's nominal gains (fixed_channel) for every SNR point.
    SweepTable run_bounds_table(const ExperimentConfig &cfg);

    std::string outage_metric_name(bool estimated, double threshold_db);
}

#endif
