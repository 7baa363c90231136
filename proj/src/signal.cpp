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

#include "signal.hpp"
#include "error.hpp"

#include <cmath>
#include <string>

namespace ambc
{
    cd sample_cn(Rng &rng, double variance)
    {
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * variance));
        const double re = gauss(rng);
        const double im = gauss(rng);
        return {re, im};
    }

    ChannelParams sample_channel(Rng &rng, const AngleSampling &angles)
    {
        ChannelParams p;
        p.h0 = sample_cn(rng);
        p.h_st = sample_cn(rng);
        p.h_tr = sample_cn(rng);
        p.eta = angles.eta;
        if (angles.random_angles)
        {
            std::uniform_real_distribution<double> uni(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
            p.theta0 = uni(rng);
            p.theta1 = uni(rng);
        }
        else
        {
            p.theta0 = angles.theta0;
            p.theta1 = angles.theta1;
        }
        return p;
    }

    CVector composite_channel(const ChannelParams &p, const ArrayConfig &cfg, int tag_state)
    {
        if (tag_state != 0 && tag_state != 1)
            throw DomainError("composite_channel: tag state must be 0 or 1");
        CVector h = p.h0 * steering_vector(cfg, p.theta0).entries;
        if (tag_state == 1)
            h += p.h1() * steering_vector(cfg, p.theta1).entries;
        return h;
    }

    PilotFrame PilotFrame::with_tag_state(int b) const
    {
        PilotFrame out = *this;
        out.tag_state = b;
        return out;
    }

    PilotFrame make_pilots(int N, double power, PilotPattern pattern)
    {
        if (N < 1)
            throw DomainError("make_pilots: N must be >= 1");
        if (!(power > 0.0))
            throw DomainError("make_pilots: pilot power must be positive");

        const double amp = std::sqrt(power);
        PilotFrame f;
        f.power = power;
        f.symbols.resize(N);
        for (int n = 0; n < N; ++n)
        {
            const bool negative = pattern == PilotPattern::alternating && (n % 2 == 1);
            f.symbols[n] = negative ? -amp : amp;
        }
        return f;
    }

    ReceivedFrame generate_frame(const ChannelParams &p, const ArrayConfig &cfg, const PilotFrame &pilots,
                                 double sigma2, Rng &rng)
    {
        if (!(sigma2 >= 0.0))
            throw DomainError("generate_frame: noise variance must be >= 0, got " + std::to_string(sigma2));

        const CVector h = composite_channel(p, cfg, pilots.tag_state);
        ReceivedFrame frame;
        frame.noise_variance = sigma2;
        frame.tag_state = pilots.tag_state;
        frame.samples = h * pilots.symbols.transpose();

        if (sigma2 > 0.0)
        {
            const auto M = frame.samples.rows();
            const auto N = frame.samples.cols();
            for (Eigen::Index n = 0; n < N; ++n)
                for (Eigen::Index m = 0; m < M; ++m)
                    frame.samples(m, n) += sample_cn(rng, sigma2);
        }
        return frame;
    }
}
