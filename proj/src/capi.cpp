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

#define AMBC_BUILDING_LIBRARY
#include "ambc/ambc.h"

#include "bounds.hpp"
#include "config.hpp"
#include "error.hpp"
#include "estimation.hpp"
#include "experiments.hpp"
#include "results_io.hpp"
#include "selftest.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

struct ambc_config
{
    ambc::ExperimentConfig cfg;
};

struct ambc_table
{
    ambc::SweepTable table;
};

namespace
{
    thread_local std::string last_error;

    ambc_status fail(ambc_status s, const std::string &msg)
    {
        last_error = msg;
        return s;
    }

    ambc_status to_status(ambc::ErrorCode c)
    {
        switch (c)
        {
        case ambc::ErrorCode::invalid_argument: return AMBC_ERR_INVALID_ARGUMENT;
        case ambc::ErrorCode::domain: return AMBC_ERR_DOMAIN;
        case ambc::ErrorCode::io: return AMBC_ERR_IO;
        case ambc::ErrorCode::singular_fisher: return AMBC_ERR_SINGULAR_FISHER;
        case ambc::ErrorCode::degenerate_geometry: return AMBC_ERR_DEGENERATE_GEOMETRY;
        case ambc::ErrorCode::ill_conditioned_pilots: return AMBC_ERR_ILL_CONDITIONED_PILOTS;
        case ambc::ErrorCode::empty_input: return AMBC_ERR_EMPTY_INPUT;
        case ambc::ErrorCode::unknown_key: return AMBC_ERR_UNKNOWN_KEY;
        }
        return AMBC_ERR_INTERNAL;
    }

    // Runs fn, translating exceptions into status codes.
    template <typename Fn>
    ambc_status guarded(Fn &&fn) noexcept
    {
        try
        {
            fn();
            last_error.clear();
            return AMBC_OK;
        }
        catch (const ambc::Error &e)
        {
            return fail(to_status(e.code()), e.what());
        }
        catch (const nlohmann::json::exception &e)
        {
            return fail(AMBC_ERR_INVALID_ARGUMENT, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(AMBC_ERR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(AMBC_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(AMBC_ERR_INTERNAL, "unknown error");
        }
    }

    char *dup_string(const std::string &s)
    {
        char *out = static_cast<char *>(std::malloc(s.size() + 1));
        if (!out)
            throw std::bad_alloc();
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    ambc::CMatrix read_matrix(const double *data, int rows, int cols)
    {
        ambc::CMatrix m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r)
            {
                const std::size_t i = 2 * (static_cast<std::size_t>(c) * rows + r);
                m(r, c) = {data[i], data[i + 1]};
            }
        return m;
    }

    ambc_path_estimate to_c(const ambc::RefinedEstimate &r)
    {
        return {r.bin, r.delta, r.theta_hat, r.gain_hat.real(), r.gain_hat.imag()};
    }

    ambc_path_estimate to_c(const ambc::CoarseEstimate &c)
    {
        return {c.bin, 0.0, c.theta_hat, c.gain_hat.real(), c.gain_hat.imag()};
    }

    ambc::BoundInputs to_cpp(const ambc_bound_inputs &in)
    {
        ambc::BoundInputs b;
        b.abs_h0 = in.abs_h0;
        b.abs_h1 = in.abs_h1;
        b.omega0 = in.omega0;
        b.omega1 = in.omega1;
        b.theta0 = in.theta0;
        b.theta1 = in.theta1;
        b.eta = in.eta;
        b.M = in.num_antennas;
        b.N = in.num_pilots;
        b.power = in.pilot_power;
        b.sigma2 = in.sigma2;
        b.spacing_ratio = in.spacing_ratio;
        return b;
    }

    ambc::BoundInputs nominal_inputs(const ambc::ExperimentConfig &cfg, double snr_db)
    {
        ambc::BoundInputs in;
        const auto &ch = cfg.fixed_channel;
        in.abs_h0 = std::abs(ch.h0);
        in.abs_h1 = std::abs(cfg.eta * ch.h_st * ch.h_tr);
        in.omega0 = std::arg(ch.h0);
        in.omega1 = std::arg(ch.h_st * ch.h_tr);
        in.theta0 = cfg.theta0;
        in.theta1 = cfg.theta1;
        in.eta = cfg.eta;
        in.M = cfg.array.num_antennas;
        in.N = cfg.N;
        in.power = cfg.pilot_power(snr_db);
        in.sigma2 = cfg.sigma2;
        in.spacing_ratio = cfg.array.spacing_ratio;
        return in;
    }

#define AMBC_REQUIRE(cond, msg)                                                                                        \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(cond))                                                                                                   \
            return fail(AMBC_ERR_INVALID_ARGUMENT, msg);                                                               \
    } while (0)
}

extern "C"
{
    const char *ambc_version(void) { return AMBC_VERSION; }

    const char *ambc_last_error(void) { return last_error.c_str(); }

    void ambc_string_free(char *s) { std::free(s); }

    ambc_status ambc_config_create(ambc_config **out)
    {
        AMBC_REQUIRE(out, "ambc_config_create: null output pointer");
        return guarded([&] { *out = new ambc_config{}; });
    }

    void ambc_config_destroy(ambc_config *cfg) { delete cfg; }

    ambc_status ambc_config_load(ambc_config *cfg, const char *path)
    {
        AMBC_REQUIRE(cfg && path, "ambc_config_load: null argument");
        return guarded([&] { cfg->cfg = ambc::load_config(path, cfg->cfg); });
    }

    ambc_status ambc_config_set(ambc_config *cfg, const char *key, const char *value)
    {
        AMBC_REQUIRE(cfg && key && value, "ambc_config_set: null argument");
        return guarded([&] { ambc::apply_override(cfg->cfg, std::string(key) + "=" + value); });
    }

    int ambc_config_has_key(const char *key)
    {
        if (!key)
            return 0;
        for (const auto &k : ambc::config_keys())
            if (k == key)
                return 1;
        return 0;
    }

    ambc_status ambc_config_to_json(const ambc_config *cfg, char **out_json)
    {
        AMBC_REQUIRE(cfg && out_json, "ambc_config_to_json: null argument");
        return guarded([&] { *out_json = dup_string(ambc::config_to_json(cfg->cfg).dump(2)); });
    }

    ambc_status ambc_run_mse_sweep(const ambc_config *cfg, ambc_table **out)
    {
        AMBC_REQUIRE(cfg && out, "ambc_run_mse_sweep: null argument");
        return guarded([&] { *out = new ambc_table{ambc::run_mse_sweep(cfg->cfg)}; });
    }

    ambc_status ambc_run_outage_sweep(const ambc_config *cfg, ambc_table **out)
    {
        AMBC_REQUIRE(cfg && out, "ambc_run_outage_sweep: null argument");
        return guarded([&] { *out = new ambc_table{ambc::run_outage_sweep(cfg->cfg)}; });
    }

    ambc_status ambc_run_bounds(const ambc_config *cfg, ambc_table **out)
    {
        AMBC_REQUIRE(cfg && out, "ambc_run_bounds: null argument");
        return guarded([&] {
            auto t = std::make_unique<ambc_table>(ambc_table{ambc::run_bounds_table(cfg->cfg)});
            nlohmann::json details = nlohmann::json::array();
            for (double snr : cfg->cfg.snr_points_db)
            {
                const ambc::BoundInputs in = nominal_inputs(cfg->cfg, snr);
                nlohmann::json d = ambc::bounds_report(in, ambc::compute_bounds(in));
                d["snr_db"] = snr;
                details.push_back(std::move(d));
            }
            t->table.details = std::move(details);
            *out = t.release();
        });
    }

    ambc_status ambc_run_estimate(const ambc_config *cfg, char **out_json)
    {
        AMBC_REQUIRE(cfg && out_json, "ambc_run_estimate: null argument");
        return guarded([&] {
            const auto &c = cfg->cfg;
            c.validate();
            const double snr = c.snr_points_db.front();
            const ambc::TrialData d = ambc::simulate_trial(c, 0, c.pilot_power(snr));
            const auto est = ambc::estimate_all(d.frame0, d.frame1, d.pilots, c.array, c.eta, c.estimator);
            *out_json = dup_string(ambc::estimate_report(c, d.channel, est, snr).dump(2));
        });
    }

    void ambc_table_destroy(ambc_table *table) { delete table; }

    size_t ambc_table_row_count(const ambc_table *table) { return table ? table->table.rows.size() : 0; }

    ambc_status ambc_table_row(const ambc_table *table, size_t index, ambc_row *out)
    {
        AMBC_REQUIRE(table && out, "ambc_table_row: null argument");
        AMBC_REQUIRE(index < table->table.rows.size(), "ambc_table_row: index out of range");
        const auto &r = table->table.rows[index];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        *out = {r.metric.c_str(), r.snr_db, r.value, r.bound_crlb.value_or(nan), r.bound_lcrlb.value_or(nan),
                r.trials, r.seed};
        return AMBC_OK;
    }

    ambc_status ambc_table_write(const ambc_table *table, ambc_format format, const char *path)
    {
        AMBC_REQUIRE(table && path, "ambc_table_write: null argument");
        AMBC_REQUIRE(format == AMBC_FORMAT_CSV || format == AMBC_FORMAT_JSON, "ambc_table_write: unknown format");
        return guarded([&] {
            ambc::emit_results(table->table,
                               format == AMBC_FORMAT_CSV ? ambc::OutputFormat::csv : ambc::OutputFormat::json, path);
        });
    }

    ambc_status ambc_estimate_frames(int num_antennas, double spacing_ratio, int num_pilots, const double *pilots,
                                     double pilot_power, const double *y0, const double *y1, double eta,
                                     ambc_estimate *out)
    {
        AMBC_REQUIRE(pilots && y0 && y1 && out, "ambc_estimate_frames: null argument");
        AMBC_REQUIRE(num_antennas >= 2 && num_pilots >= 1, "ambc_estimate_frames: bad dimensions");
        return guarded([&] {
            const ambc::ArrayConfig cfg{num_antennas, spacing_ratio};
            cfg.validate();
            ambc::PilotFrame pf;
            pf.power = pilot_power;
            pf.symbols = read_matrix(pilots, num_pilots, 1).col(0);

            ambc::EstimatorOptions opts;
            // non-real pilots need the conjugate correlator
            if (pf.symbols.imag().cwiseAbs().maxCoeff() > 0.0)
                opts.ls_mode = ambc::LsMode::conjugate;

            ambc::ReceivedFrame f0{read_matrix(y0, num_antennas, num_pilots), 0.0, 0};
            ambc::ReceivedFrame f1{read_matrix(y1, num_antennas, num_pilots), 0.0, 1};
            const auto est = ambc::estimate_all(f0, f1, pf, cfg, eta, opts);
            out->direct = to_c(est.direct);
            out->backscatter = to_c(est.backscatter);
            out->direct_coarse = to_c(est.direct_coarse);
            out->backscatter_coarse = to_c(est.backscatter_coarse);
            out->h1_over_eta_re = est.h1_over_eta.real();
            out->h1_over_eta_im = est.h1_over_eta.imag();
        });
    }

    ambc_status ambc_compute_bounds(const ambc_bound_inputs *in, ambc_bounds *out)
    {
        AMBC_REQUIRE(in && out, "ambc_compute_bounds: null argument");
        return guarded([&] {
            const ambc::BoundInputs b = to_cpp(*in);
            const ambc::BoundsResult r = ambc::compute_bounds(b);
            for (int i = 0; i < 4; ++i)
            {
                for (int j = 0; j < 4; ++j)
                    out->fisher[4 * i + j] = r.fisher(i, j);
                out->crlb_numeric[i] = r.crlb_numeric[i];
                out->crlb_closed[i] = r.crlb_closed[i];
                out->lcrlb[i] = r.lcrlb[i];
            }
            const auto s0 = ambc::bounds_state0(b);
            out->state0[0] = s0[0];
            out->state0[1] = s0[1];
        });
    }

    ambc_status ambc_selftest(ambc_text_sink sink, void *user, int *passed)
    {
        AMBC_REQUIRE(passed, "ambc_selftest: null argument");
        return guarded([&] {
            const ambc::SelftestReport report = ambc::run_selftest();
            if (sink)
            {
                std::ostringstream os;
                report.print(os);
                sink(os.str().c_str(), user);
            }
            *passed = report.passed() ? 1 : 0;
        });
    }
}
