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

#ifndef AMBC_SIGNAL_HPP
#define AMBC_SIGNAL_HPP

#include "array_model.hpp"

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace ambc
{
    using Rng = std::mt19937_64;

    // Ground truth for one realization. h1 = eta * h_st * h_tr is the cascade gain
    // seen by the reader on the backscatter path.
    struct ChannelParams
    {
        cd h0{1.0, 0.0};
        cd h_st{1.0, 0.0};
        cd h_tr{1.0, 0.0};
        double eta = 0.5;
        double theta0 = -std::numbers::pi / 4.0;
        double theta1 = std::numbers::pi / 5.0;

        cd h1() const { return eta * h_st * h_tr; }
    };

    struct AngleSampling
    {
        double theta0 = -std::numbers::pi / 4.0;
        double theta1 = std::numbers::pi / 5.0;
        bool random_angles = false; // draw both uniformly on [-pi/2, pi/2]
        double eta = 0.5;
    };

    // One CN(0,1) draw: real and imaginary parts N(0, 1/2).
    cd sample_cn(Rng &rng, double variance = 1.0);

    ChannelParams sample_channel(Rng &rng, const AngleSampling &angles = {});

    // h0 a(theta0) + B eta h_st h_tr a(theta1)
    CVector composite_channel(const ChannelParams &p, const ArrayConfig &cfg, int tag_state);

    enum class PilotPattern
    {
        alternating, // +, -, +, - ...
        constant     // all +
    };

    struct PilotFrame
    {
        CVector symbols;
        double power = 1.0;
        int tag_state = 0;

        int length() const { return static_cast<int>(symbols.size()); }
        PilotFrame with_tag_state(int b) const;
    };

    // Real antipodal pilots s_n = +-sqrt(P_s).
    PilotFrame make_pilots(int N, double power, PilotPattern pattern = PilotPattern::alternating);

    struct ReceivedFrame
    {
        CMatrix samples; // M x N
        double noise_variance = 0.0;
        int tag_state = 0;
    };

    // Y = h s^T + W with W_ij ~ CN(0, sigma2). Noise is drawn column by column.
    ReceivedFrame generate_frame(const ChannelParams &p, const ArrayConfig &cfg, const PilotFrame &pilots,
                                 double sigma2, Rng &rng);
}

#endif
