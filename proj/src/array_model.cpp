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

#include "array_model.hpp"
#include "error.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace ambc
{
    using std::numbers::pi;

    void ArrayConfig::validate() const
    {
        if (num_antennas < 2)
            throw DomainError("ArrayConfig: num_antennas must be >= 2, got " + std::to_string(num_antennas));
        if (!(spacing_ratio > 0.0 && spacing_ratio <= 0.5))
            throw DomainError("ArrayConfig: spacing_ratio must lie in (0, 0.5], got " + std::to_string(spacing_ratio));
    }

    double ArrayConfig::phase_scale() const { return 2.0 * pi * spacing_ratio; }

    SteeringVector steering_vector(const ArrayConfig &cfg, double theta)
    {
        cfg.validate();
        if (!(theta >= -pi / 2.0 && theta <= pi / 2.0))
            throw DomainError("steering_vector: theta = " + std::to_string(theta) + " outside [-pi/2, pi/2]");

        const double step = cfg.phase_scale() * std::sin(theta);
        SteeringVector a;
        a.angle = theta;
        a.entries.resize(cfg.num_antennas);
        for (int k = 0; k < cfg.num_antennas; ++k)
            a.entries[k] = std::polar(1.0, step * k);
        return a;
    }

    CMatrix dft_matrix(int M)
    {
        if (M < 1)
            throw DomainError("dft_matrix: M must be >= 1");
        CMatrix F(M, M);
        const double scale = 1.0 / M;
        for (int q = 0; q < M; ++q)
            for (int p = 0; p < M; ++p)
            {
                // reduce p*q mod M before scaling to keep the phase argument small
                const long long idx = (static_cast<long long>(p) * q) % M;
                F(p, q) = std::polar(scale, -2.0 * pi * static_cast<double>(idx) / M);
            }
        return F;
    }

    CVector dft_apply(const CVector &h)
    {
        const auto M = static_cast<int>(h.size());
        if (M < 1)
            throw DomainError("dft_apply: empty input");

        std::vector<cd> twiddle(static_cast<std::size_t>(M));
        for (int k = 0; k < M; ++k)
            twiddle[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * pi * k / M);

        CVector out(M);
        for (int p = 0; p < M; ++p)
        {
            cd acc = 0.0;
            int idx = 0;
            for (int q = 0; q < M; ++q)
            {
                acc += twiddle[static_cast<std::size_t>(idx)] * h[q];
                idx += p;
                if (idx >= M)
                    idx -= M;
            }
            out[p] = acc / static_cast<double>(M);
        }
        return out;
    }

    RotationMatrix rotation_matrix(int M, double delta)
    {
        if (M < 1)
            throw DomainError("rotation_matrix: M must be >= 1");
        const double limit = pi / M;
        if (std::abs(delta) > limit * (1.0 + 1e-12))
            throw DomainError("rotation_matrix: |delta| = " + std::to_string(std::abs(delta)) + " exceeds pi/M");

        RotationMatrix Phi(M);
        for (int k = 0; k < M; ++k)
            Phi.diagonal()[k] = std::polar(1.0, k * delta);
        return Phi;
    }

    cd rotated_dft_entry(const CVector &h, int bin, double delta)
    {
        const auto M = static_cast<int>(h.size());
        // sum_k h_k z^k with z = exp(j (delta - 2 pi bin / M)), Horner form
        const cd z = std::polar(1.0, delta - 2.0 * pi * bin / M);
        cd acc = 0.0;
        for (int k = M - 1; k >= 0; --k)
            acc = acc * z + h[k];
        return acc / static_cast<double>(M);
    }

    cd dirichlet_peak(double r, int M)
    {
        const double half = 0.5 * r;
        const double den = std::sin(half);
        const cd phase = std::polar(1.0, -0.5 * (M - 1) * r);
        if (std::abs(den) < 1e-9)
        {
            // r = 2 pi n: sin(M r/2)/sin(r/2) -> M (-1)^{n (M-1)}
            const double n = std::round(r / (2.0 * pi));
            const double sign = (static_cast<long long>(n) * (M - 1)) % 2 == 0 ? 1.0 : -1.0;
            return phase * sign;
        }
        return phase * (std::sin(M * half) / (M * den));
    }
}
