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

#ifndef AMBC_ESTIMATION_HPP
#define AMBC_ESTIMATION_HPP

#include "array_model.hpp"
#include "signal.hpp"

#include <array>

namespace ambc
{
    // transpose: h = Y s (s^T s)^-1, valid for real pilots.
    // conjugate: h = Y s* / (N P_s), any constant-modulus pilots. Both agree for real s.
    enum class LsMode
    {
        transpose,
        conjugate
    };

    // How the B=1 frame is split into direct and backscatter paths.
    enum class Separation
    {
        subtract,  // remove the B=0 direct-path reconstruction, then single-peak search on the residual
        two_peaks  // two largest DFT peaks of the B=1 estimate, labelled by proximity to the B=0 DoA
    };

    struct EstimatorOptions
    {
        LsMode ls_mode = LsMode::transpose;
        Separation separation = Separation::subtract;
        int grid_points = 64;     // initial Delta grid per candidate bin
        double tolerance = 1e-8;  // golden-section bracket width, rad
        bool newton_polish = true;

        // Test fixture: flips the sign of sin(theta) on the negative branch.
        // Only the self-test mutation check sets this.
        bool mutate_negative_branch = false;
    };

    struct CoarseEstimate
    {
        int bin = 1;           // 1-based DFT bin m
        double theta_hat = 0.0;
        cd gain_hat{0.0, 0.0};
        bool clamped = false;  // arcsin argument left [-1, 1]
    };

    struct RefinedEstimate
    {
        int bin = 1;           // 1-based bin the rotated peak was read from
        double delta = 0.0;    // rotation angle, |delta| <= pi/M
        double theta_hat = 0.0;
        cd gain_hat{0.0, 0.0};
        bool clamped = false;
    };

    struct EstimationResult
    {
        RefinedEstimate direct;
        RefinedEstimate backscatter;       // gain_hat estimates h1 = eta h_st h_tr
        CoarseEstimate direct_coarse;
        CoarseEstimate backscatter_coarse; // from the coarse-only pipeline
        cd h1_over_eta{0.0, 0.0};
        double eta = 1.0;

        std::array<CVector, 2> ls_channels;             // per tag state
        std::array<CVector, 2> reconstructed_channels;  // refined parameters
        std::array<CVector, 2> coarse_channels;         // coarse parameters
    };

    CVector ls_estimate(const CMatrix &Y, const PilotFrame &pilots, LsMode mode = LsMode::transpose);

    // Bin -> angle map shared by the coarse and refined steps. bin0 is 0-based.
    double bin_to_angle(int bin0, double delta, const ArrayConfig &cfg, bool *clamped = nullptr,
                        bool mutate_negative_branch = false);

    CoarseEstimate dft_coarse(const CVector &h_hat, const ArrayConfig &cfg, const EstimatorOptions &opts = {});

    RefinedEstimate rotation_refine(const CVector &h_hat, const ArrayConfig &cfg, const CoarseEstimate &coarse,
                                    const EstimatorOptions &opts = {});

    EstimationResult estimate_all(const ReceivedFrame &frame0, const ReceivedFrame &frame1, const PilotFrame &pilots,
                                  const ArrayConfig &cfg, double eta, const EstimatorOptions &opts = {});
}

#endif
