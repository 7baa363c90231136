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

#include "selftest.hpp"
#include "bounds.hpp"
#include "error.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ambc
{
    using std::numbers::pi;

    int SelftestSuite::failures() const
    {
        int n = 0;
        for (const auto &c : checks)
            n += c.passed ? 0 : 1;
        return n;
    }

    bool SelftestReport::passed() const
    {
        for (const auto &s : suites)
            if (s.failures() > 0)
                return false;
        return true;
    }

    void SelftestReport::print(std::ostream &out) const
    {
        for (const auto &s : suites)
        {
            const auto n = static_cast<int>(s.checks.size());
            out << "[" << (s.failures() == 0 ? "PASS" : "FAIL") << "] " << s.name << ": " << (n - s.failures()) << "/"
                << n << " checks passed\n";
            for (const auto &c : s.checks)
                if (!c.passed)
                    out << "    failed: " << c.name << " (" << c.detail << ")\n";
        }
        out << (passed() ? "selftest: all suites passed\n" : "selftest: FAILED\n");
    }

    namespace
    {
        struct Scenario
        {
            std::string name;
            double theta0, theta1;
            cd h0, h_st, h_tr;
            double tol_theta0, tol_theta1, tol_gain;
        };

        SelftestSuite noiseless_suite(const EstimatorOptions &opts)
        {
            SelftestSuite suite{"noiseless exactness", {}};
            const ArrayConfig cfg{128, 0.5};
            // (M d/lambda) sin(theta) integral -> both paths on the DFT grid
            const double on0 = std::asin(-40.0 / 64.0), on1 = std::asin(20.0 / 64.0);
            const std::vector<Scenario> scenarios = {
                {"on-grid, unit gains", on0, on1, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, 1e-9, 1e-9, 1e-9},
                {"on-grid, complex gains", on0, on1, {0.3, -1.1}, {0.8, 0.4}, {-0.6, 0.9}, 1e-9, 1e-9, 1e-9},
                {"off-grid, -pi/4 and pi/5", -pi / 4.0, pi / 5.0, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, 1e-4, 1e-3, 1e-3},
                {"off-grid, complex gains", -pi / 4.0, pi / 5.0, {-0.7, 0.2}, {0.5, -0.9}, {1.2, 0.3}, 1e-4, 1e-3, 1e-3},
            };

            for (const auto &s : scenarios)
            {
                ChannelParams p;
                p.h0 = s.h0;
                p.h_st = s.h_st;
                p.h_tr = s.h_tr;
                p.eta = 0.5;
                p.theta0 = s.theta0;
                p.theta1 = s.theta1;
                const PilotFrame pilots = make_pilots(4, 1.0);
                Rng rng(1);
                const auto f0 = generate_frame(p, cfg, pilots.with_tag_state(0), 0.0, rng);
                const auto f1 = generate_frame(p, cfg, pilots.with_tag_state(1), 0.0, rng);
                const auto est = estimate_all(f0, f1, pilots, cfg, p.eta, opts);

                const double e0 = std::abs(est.direct.theta_hat - p.theta0);
                const double e1 = std::abs(est.backscatter.theta_hat - p.theta1);
                const double g0 = std::abs(est.direct.gain_hat - p.h0);
                const double g1 = std::abs(est.h1_over_eta - p.h1() / p.eta);
                std::ostringstream d;
                d << "|dtheta0|=" << e0 << " |dtheta1|=" << e1 << " |dh0|=" << g0 << " |dh1/eta|=" << g1;
                suite.checks.push_back({s.name + ": theta0", e0 < s.tol_theta0, d.str()});
                suite.checks.push_back({s.name + ": theta1", e1 < s.tol_theta1, d.str()});
                suite.checks.push_back({s.name + ": gains", g0 < s.tol_gain && g1 < s.tol_gain, d.str()});
            }
            return suite;
        }

        BoundInputs random_inputs(Rng &rng)
        {
            std::uniform_real_distribution<double> gain(0.2, 2.0), angle(-1.3, 1.3), phase(-pi, pi), eta(0.1, 1.0);
            std::uniform_int_distribution<int> antennas(8, 256), pilots(1, 8);
            std::uniform_real_distribution<double> snr_db(-10.0, 30.0);
            for (;;)
            {
                BoundInputs in;
                in.abs_h0 = gain(rng);
                in.abs_h1 = gain(rng);
                in.omega0 = phase(rng);
                in.omega1 = phase(rng);
                in.theta0 = angle(rng);
                in.theta1 = angle(rng);
                in.eta = eta(rng);
                in.M = antennas(rng);
                in.N = pilots(rng);
                in.power = std::pow(10.0, snr_db(rng) / 10.0);
                in.sigma2 = 1.0;
                // keep the two spatial frequencies at least one DFT bin apart
                const double sep = std::abs(std::remainder(in.c1(), 2.0 * pi));
                if (sep * in.M > 2.0 * pi)
                    return in;
            }
        }

        std::pair<SelftestSuite, SelftestSuite> bound_suites()
        {
            SelftestSuite equiv{"closed-form CRLB vs numeric inversion", {}};
            SelftestSuite dom{"LCRLB dominance", {}};
            Rng rng(0x5eed);
            const int sets = 200;
            int eq_fail = 0, dom_fail = 0;
            double worst_rel = 0.0;
            std::string eq_detail, dom_detail;
            for (int i = 0; i < sets; ++i)
            {
                const BoundInputs in = random_inputs(rng);
                const Bounds4 num = crlb_numeric(in);
                const Bounds4 closed = crlb_closed_form(in);
                const Bounds4 low = lcrlb(in);
                for (int k = 0; k < 4; ++k)
                {
                    const double rel = std::abs(closed[k] - num[k]) / num[k];
                    worst_rel = std::max(worst_rel, rel);
                    if (!(rel < 1e-8))
                        ++eq_fail;
                    if (!(low[k] <= num[k]))
                    {
                        ++dom_fail;
                        dom_detail = "set " + std::to_string(i) + " entry " + std::to_string(k);
                    }
                }
            }
            std::ostringstream d;
            d << "worst relative difference " << worst_rel;
            eq_detail = d.str();
            equiv.checks.push_back({std::to_string(sets) + " random parameter sets within 1e-8", eq_fail == 0, eq_detail});
            dom.checks.push_back({std::to_string(sets) + " random parameter sets", dom_fail == 0, dom_detail});

            // absorbing state: lcrlb entries 1 and 3 are the single-path bounds
            BoundInputs def;
            const auto s0 = bounds_state0(def);
            const auto l = lcrlb(def);
            dom.checks.push_back({"state-0 bounds equal LCRLB entries", s0[0] == l[0] && s0[1] == l[2], ""});
            return {equiv, dom};
        }
    }

    SelftestReport run_selftest(const EstimatorOptions &opts)
    {
        SelftestReport report;
        report.suites.push_back(noiseless_suite(opts));
        auto [equiv, dom] = bound_suites();
        report.suites.push_back(std::move(equiv));
        report.suites.push_back(std::move(dom));
        return report;
    }
}
