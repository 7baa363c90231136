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

#include "experiments.hpp"
#include "bounds.hpp"
#include "error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace ambc
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        double sq(double x) { return x * x; }

        std::string snr_label(double v)
        {
            std::ostringstream os;
            os << v;
            return os.str();
        }
    }

    void ExperimentConfig::validate() const
    {
        array.validate();
        if (N < 1)
            throw DomainError("config: N must be >= 1");
        if (!(eta > 0.0 && eta <= 1.0))
            throw DomainError("config: eta must lie in (0, 1]");
        if (!(sigma2 > 0.0))
            throw DomainError("config: sigma2 must be positive");
        if (snr_points_db.empty())
            throw DomainError("config: snr_points_db must not be empty");
        if (trials < 1)
            throw DomainError("config: trials must be >= 1");
        for (double t : {theta0, theta1})
            if (!(std::abs(t) <= std::numbers::pi / 2.0))
                throw DomainError("config: angles must lie in [-pi/2, pi/2]");
        if (outage_tag_state != 0 && outage_tag_state != 1)
            throw DomainError("config: outage_tag_state must be 0 or 1");
        if (estimator.grid_points < 3 || !(estimator.tolerance > 0.0))
            throw DomainError("config: estimator grid_points >= 3 and tolerance > 0 required");
    }

    double ExperimentConfig::pilot_power(double snr_db) const { return sigma2 * std::pow(10.0, snr_db / 10.0); }

    const SweepRow *SweepTable::find(const std::string &metric, double snr_db) const
    {
        for (const auto &r : rows)
            if (r.metric == metric && r.snr_db == snr_db)
                return &r;
        return nullptr;
    }

    void MeanAccumulator::add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        ++n_;
    }

    double MeanAccumulator::mean() const
    {
        if (n_ == 0)
            throw Error(ErrorCode::empty_input, "mean of an empty stream");
        return (sum_ + comp_) / static_cast<double>(n_);
    }

    double aggregate_mse(std::span<const double> squared_errors)
    {
        MeanAccumulator acc;
        for (double e : squared_errors)
            acc.add(e);
        return acc.mean();
    }

    std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return splitmix64(seed ^ splitmix64(trial)); }

    unsigned resolve_threads(unsigned requested)
    {
        if (requested > 0)
            return requested;
        if (const char *env = std::getenv("AMBC_THREADS"))
        {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0)
                return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)> &body)
    {
        threads = std::max(1u, threads);
        if (threads == 1 || n < 2)
        {
            for (std::int64_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        constexpr std::int64_t chunk = 64;
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;)
            {
                const std::int64_t start = next.fetch_add(chunk);
                if (start >= n)
                    return;
                const std::int64_t stop = std::min(n, start + chunk);
                try
                {
                    for (std::int64_t i = start; i < stop; ++i)
                        body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            const auto count = static_cast<unsigned>(std::min<std::int64_t>(threads, n));
            pool.reserve(count);
            for (unsigned t = 0; t < count; ++t)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    TrialData simulate_trial(const ExperimentConfig &cfg, std::int64_t trial, double pilot_power)
    {
        // The stream depends on (seed, trial) only, so every SNR point sees the same
        // channel draws and the same unit noise realisations.
        Rng rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
        TrialData d;
        if (cfg.fading_mode == FadingMode::fully_fixed)
        {
            d.channel = cfg.fixed_channel;
            d.channel.eta = cfg.eta;
            d.channel.theta0 = cfg.theta0;
            d.channel.theta1 = cfg.theta1;
        }
        else
        {
            d.channel = sample_channel(rng, AngleSampling{cfg.theta0, cfg.theta1, cfg.random_angles, cfg.eta});
        }
        d.pilots = make_pilots(cfg.N, pilot_power, cfg.pilot_pattern);
        d.frame0 = generate_frame(d.channel, cfg.array, d.pilots.with_tag_state(0), cfg.sigma2, rng);
        d.frame1 = generate_frame(d.channel, cfg.array, d.pilots.with_tag_state(1), cfg.sigma2, rng);
        return d;
    }

    namespace
    {
        enum MseMetric : std::size_t
        {
            m_theta0,
            m_theta1,
            m_abs_h0,
            m_abs_h1_over_eta,
            m_theta0_dft,
            m_theta1_dft,
            m_abs_h0_dft,
            m_abs_h1_over_eta_dft,
            m_channel_ls,
            m_channel_dft,
            m_channel_rotation,
            m_count
        };

        constexpr const char *mse_metric_names[m_count] = {
            "theta0",     "theta1",     "abs_h0",     "abs_h1_over_eta", "theta0_dft",      "theta1_dft",
            "abs_h0_dft", "abs_h1_over_eta_dft",      "channel_ls",      "channel_dft",     "channel_rotation"};

        struct MseTrial
        {
            std::array<double, m_count> err{};
            Eigen::Matrix4d fisher = Eigen::Matrix4d::Zero(); // reported coordinates
            bool singular = false;
            int clamped = 0;
        };

        MseTrial mse_trial(const ExperimentConfig &cfg, std::int64_t trial, double power)
        {
            const TrialData d = simulate_trial(cfg, trial, power);
            const EstimationResult est = estimate_all(d.frame0, d.frame1, d.pilots, cfg.array, cfg.eta, cfg.estimator);

            const ChannelParams &ch = d.channel;
            const double abs_h0 = std::abs(ch.h0);
            const double abs_h1 = std::abs(ch.h1());
            const double M = cfg.array.num_antennas;

            MseTrial t;
            t.err[m_theta0] = sq(est.direct.theta_hat - ch.theta0);
            t.err[m_theta1] = sq(est.backscatter.theta_hat - ch.theta1);
            t.err[m_abs_h0] = sq(std::abs(est.direct.gain_hat) - abs_h0);
            t.err[m_abs_h1_over_eta] = sq(std::abs(est.backscatter.gain_hat) / cfg.eta - abs_h1 / cfg.eta);
            t.err[m_theta0_dft] = sq(est.direct_coarse.theta_hat - ch.theta0);
            t.err[m_theta1_dft] = sq(est.backscatter_coarse.theta_hat - ch.theta1);
            t.err[m_abs_h0_dft] = sq(std::abs(est.direct_coarse.gain_hat) - abs_h0);
            t.err[m_abs_h1_over_eta_dft] = sq(std::abs(est.backscatter_coarse.gain_hat) / cfg.eta - abs_h1 / cfg.eta);

            const CVector h = composite_channel(ch, cfg.array, 1);
            t.err[m_channel_ls] = (h - est.ls_channels[1]).squaredNorm() / M;
            t.err[m_channel_dft] = (h - est.coarse_channels[1]).squaredNorm() / M;
            t.err[m_channel_rotation] = (h - est.reconstructed_channels[1]).squaredNorm() / M;

            t.clamped = int(est.direct.clamped) + int(est.backscatter.clamped) + int(est.direct_coarse.clamped) +
                        int(est.backscatter_coarse.clamped);

            BoundInputs in;
            in.abs_h0 = abs_h0;
            in.abs_h1 = abs_h1;
            in.omega0 = std::arg(ch.h0);
            in.omega1 = std::arg(ch.h1());
            in.theta0 = ch.theta0;
            in.theta1 = ch.theta1;
            in.eta = cfg.eta;
            in.M = cfg.array.num_antennas;
            in.N = cfg.N;
            in.power = power;
            in.sigma2 = cfg.sigma2;
            in.spacing_ratio = cfg.array.spacing_ratio;
            try
            {
                t.fisher = fisher_matrix_reported(in);
                t.singular = !(fisher_condition(t.fisher) <= 1e12);
            }
            catch (const DomainError &)
            {
                t.singular = true; // |theta| = pi/2
            }
            return t;
        }
    }

    SweepTable run_mse_sweep(const ExperimentConfig &cfg)
    {
        cfg.validate();
        const unsigned threads = resolve_threads(cfg.threads);

        SweepTable table;
        table.kind = "mse-sweep";
        table.config = cfg;

        std::vector<std::array<SweepRow, m_count>> per_snr;
        std::int64_t singular = 0, clamped = 0;

        for (double snr : cfg.snr_points_db)
        {
            const double power = cfg.pilot_power(snr);
            std::vector<MseTrial> results(static_cast<std::size_t>(cfg.trials));
            parallel_for(cfg.trials, threads,
                         [&](std::int64_t i) { results[static_cast<std::size_t>(i)] = mse_trial(cfg, i, power); });

            // ordered reduction: identical sums for any thread count
            std::array<MeanAccumulator, m_count> acc;
            std::array<MeanAccumulator, 16> fisher_acc;
            for (const MseTrial &t : results)
            {
                for (std::size_t k = 0; k < m_count; ++k)
                    acc[k].add(t.err[k]);
                clamped += t.clamped;
                if (t.singular)
                {
                    ++singular;
                    continue;
                }
                for (int k = 0; k < 16; ++k)
                    fisher_acc[static_cast<std::size_t>(k)].add(t.fisher(k / 4, k % 4));
            }

            // bounds from the Fisher information averaged over the non-singular draws
            std::optional<Bounds4> crlb_avg, lcrlb_avg;
            if (fisher_acc[0].count() > 0)
            {
                Eigen::Matrix4d mean;
                for (int k = 0; k < 16; ++k)
                    mean(k / 4, k % 4) = fisher_acc[static_cast<std::size_t>(k)].mean();
                try
                {
                    crlb_avg = crlb_from_fisher(mean);
                    lcrlb_avg = lcrlb_from_fisher(mean);
                }
                catch (const SingularFisher &)
                {
                }
            }

            std::array<SweepRow, m_count> rows;
            for (std::size_t k = 0; k < m_count; ++k)
            {
                rows[k].metric = mse_metric_names[k];
                rows[k].snr_db = snr;
                rows[k].value = acc[k].mean();
                rows[k].trials = cfg.trials;
                rows[k].seed = cfg.seed;
                if (k < 4 && crlb_avg)
                {
                    // bound order is |h0|, |h1|/eta, theta0, theta1
                    constexpr std::size_t bound_index[4] = {2, 3, 0, 1};
                    rows[k].bound_crlb = (*crlb_avg)[bound_index[k]];
                    rows[k].bound_lcrlb = (*lcrlb_avg)[bound_index[k]];
                }
            }
            per_snr.push_back(rows);
        }

        for (std::size_t k = 0; k < m_count; ++k)
            for (const auto &rows : per_snr)
                table.rows.push_back(rows[k]);

        table.diagnostics["singular_fisher_trials"] = singular;
        table.diagnostics["clamped_arcsin"] = clamped;
        return table;
    }

    std::string outage_metric_name(bool estimated, double threshold_db)
    {
        return std::string(estimated ? "outage_estimated" : "outage_perfect") + "_rt" + snr_label(threshold_db) + "dB";
    }

    SweepTable run_outage_sweep(const ExperimentConfig &cfg)
    {
        cfg.validate();
        const unsigned threads = resolve_threads(cfg.threads);
        const std::size_t T = cfg.outage_thresholds_db.size();
        const int B = cfg.outage_tag_state;

        SweepTable table;
        table.kind = "outage-sweep";
        table.config = cfg;

        std::vector<double> rho(T);
        for (std::size_t k = 0; k < T; ++k)
            rho[k] = std::pow(10.0, cfg.outage_thresholds_db[k] / 10.0);

        // rows[threshold][estimated][snr]
        std::vector<std::array<std::vector<SweepRow>, 2>> grid(T);

        for (double snr : cfg.snr_points_db)
        {
            const double power = cfg.pilot_power(snr);
            // per trial: selected-branch SNR with perfect and estimated CSI
            std::vector<std::array<double, 2>> gamma(static_cast<std::size_t>(cfg.trials));
            parallel_for(cfg.trials, threads, [&](std::int64_t i) {
                const TrialData d = simulate_trial(cfg, i, power);
                const EstimationResult est =
                    estimate_all(d.frame0, d.frame1, d.pilots, cfg.array, cfg.eta, cfg.estimator);
                const CVector h = composite_channel(d.channel, cfg.array, B);
                const Eigen::VectorXd g = h.cwiseAbs2() * (power / cfg.sigma2);
                Eigen::Index pick = 0;
                est.reconstructed_channels[static_cast<std::size_t>(B)].cwiseAbs2().maxCoeff(&pick);
                gamma[static_cast<std::size_t>(i)] = {g.maxCoeff(), g[pick]};
            });

            for (std::size_t k = 0; k < T; ++k)
            {
                for (int e = 0; e < 2; ++e)
                {
                    std::int64_t outages = 0;
                    for (const auto &gm : gamma)
                        outages += gm[static_cast<std::size_t>(e)] < rho[k] ? 1 : 0;
                    SweepRow r;
                    r.metric = outage_metric_name(e == 1, cfg.outage_thresholds_db[k]);
                    r.snr_db = snr;
                    r.value = static_cast<double>(outages) / static_cast<double>(cfg.trials);
                    r.trials = cfg.trials;
                    r.seed = cfg.seed;
                    grid[k][static_cast<std::size_t>(e)].push_back(r);
                }
            }
        }

        for (std::size_t k = 0; k < T; ++k)
            for (int e = 0; e < 2; ++e)
                for (const auto &r : grid[k][static_cast<std::size_t>(e)])
                    table.rows.push_back(r);
        table.diagnostics["tag_state"] = B;
        return table;
    }

    SweepTable run_bounds_table(const ExperimentConfig &cfg)
    {
        cfg.validate();
        SweepTable table;
        table.kind = "bounds";
        table.config = cfg;

        const char *names[4] = {"abs_h0", "abs_h1_over_eta", "theta0", "theta1"};
        std::vector<std::array<SweepRow, 6>> per_snr;
        for (double snr : cfg.snr_points_db)
        {
            BoundInputs in;
            in.abs_h0 = std::abs(cfg.fixed_channel.h0);
            in.abs_h1 = std::abs(cfg.eta * cfg.fixed_channel.h_st * cfg.fixed_channel.h_tr);
            in.omega0 = std::arg(cfg.fixed_channel.h0);
            in.omega1 = std::arg(cfg.fixed_channel.h_st * cfg.fixed_channel.h_tr);
            in.theta0 = cfg.theta0;
            in.theta1 = cfg.theta1;
            in.eta = cfg.eta;
            in.M = cfg.array.num_antennas;
            in.N = cfg.N;
            in.power = cfg.pilot_power(snr);
            in.sigma2 = cfg.sigma2;
            in.spacing_ratio = cfg.array.spacing_ratio;

            const BoundsResult b = compute_bounds(in);
            const auto s0 = bounds_state0(in);
            std::array<SweepRow, 6> rows;
            for (std::size_t k = 0; k < 4; ++k)
            {
                rows[k].metric = names[k];
                rows[k].value = b.crlb_numeric[k];
                rows[k].bound_crlb = b.crlb_closed[k];
                rows[k].bound_lcrlb = b.lcrlb[k];
            }
            rows[4].metric = "state0_abs_h0";
            rows[4].value = s0[0];
            rows[5].metric = "state0_theta0";
            rows[5].value = s0[1];
            for (auto &r : rows)
            {
                r.snr_db = snr;
                r.trials = 1;
                r.seed = cfg.seed;
            }
            per_snr.push_back(rows);
        }
        for (std::size_t k = 0; k < 6; ++k)
            for (const auto &rows : per_snr)
                table.rows.push_back(rows[k]);
        return table;
    }
}
