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

#include "estimation.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ambc
{
    using std::numbers::pi;

    namespace
    {
        struct PeakDerivs
        {
            cd g, dg, d2g; // g(Delta) and its first two Delta-derivatives
        };

        PeakDerivs peak_with_derivatives(const CVector &h, int bin0, double delta)
        {
            const auto M = static_cast<int>(h.size());
            const cd z = std::polar(1.0, delta - 2.0 * pi * bin0 / M);
            cd zk = 1.0;
            cd s0 = 0.0, s1 = 0.0, s2 = 0.0;
            for (int k = 0; k < M; ++k)
            {
                const cd term = h[k] * zk;
                s0 += term;
                s1 += static_cast<double>(k) * term;
                s2 += static_cast<double>(k) * k * term;
                zk *= z;
            }
            const double inv = 1.0 / M;
            const cd j(0.0, 1.0);
            return {s0 * inv, j * s1 * inv, -s2 * inv};
        }

        struct BinSearch
        {
            double delta = 0.0;
            double value = -1.0; // |peak|
        };

        // Maximise |(F Phi(Delta) h)_bin| over Delta in [-pi/M, pi/M].
        BinSearch search_bin(const CVector &h, int bin0, const EstimatorOptions &opts)
        {
            const auto M = static_cast<int>(h.size());
            const double lo = -pi / M, hi = pi / M;
            auto f = [&](double d) { return std::abs(rotated_dft_entry(h, bin0, d)); };

            const int G = std::max(opts.grid_points, 3);
            const double step = (hi - lo) / (G - 1);
            int best = 0;
            double best_val = -1.0;
            for (int i = 0; i < G; ++i)
            {
                const double v = f(lo + step * i);
                if (v > best_val)
                {
                    best_val = v;
                    best = i;
                }
            }
            if (best_val <= 0.0)
                return {0.0, 0.0};

            double a = lo + step * std::max(best - 1, 0);
            double b = lo + step * std::min(best + 1, G - 1);

            constexpr double inv_phi = 0.6180339887498949;
            double x1 = b - inv_phi * (b - a);
            double x2 = a + inv_phi * (b - a);
            double f1 = f(x1), f2 = f(x2);
            while (b - a > opts.tolerance)
            {
                if (f1 < f2)
                {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + inv_phi * (b - a);
                    f2 = f(x2);
                }
                else
                {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - inv_phi * (b - a);
                    f1 = f(x1);
                }
            }
            double d = 0.5 * (a + b);

            // The golden-section bracket cannot resolve a quadratic maximum much below
            // sqrt(eps); Newton steps on d|g|^2/dDelta take it to full precision.
            if (opts.newton_polish)
            {
                const double max_step = std::max(b - a, opts.tolerance);
                for (int it = 0; it < 4; ++it)
                {
                    const PeakDerivs p = peak_with_derivatives(h, bin0, d);
                    const double d1 = 2.0 * std::real(std::conj(p.g) * p.dg);
                    const double d2 = 2.0 * (std::norm(p.dg) + std::real(std::conj(p.g) * p.d2g));
                    if (!(d2 < 0.0))
                        break;
                    const double s = -d1 / d2;
                    if (!(std::abs(s) <= max_step) || d + s < lo || d + s > hi)
                        break;
                    d += s;
                    if (std::abs(s) < 1e-16)
                        break;
                }
            }
            return {d, f(d)};
        }

        CVector path_reconstruction(const ArrayConfig &cfg, double theta, cd gain)
        {
            return gain * steering_vector(cfg, theta).entries;
        }

        struct PathPair
        {
            CoarseEstimate coarse;
            RefinedEstimate refined;
        };

        PathPair estimate_path(const CVector &h, const ArrayConfig &cfg, const EstimatorOptions &opts)
        {
            PathPair p;
            p.coarse = dft_coarse(h, cfg, opts);
            p.refined = rotation_refine(h, cfg, p.coarse, opts);
            return p;
        }

        CoarseEstimate coarse_at_bin(const CVector &spectrum, int bin0, const ArrayConfig &cfg,
                                     const EstimatorOptions &opts)
        {
            CoarseEstimate c;
            c.bin = bin0 + 1;
            c.gain_hat = spectrum[bin0];
            c.theta_hat = bin_to_angle(bin0, 0.0, cfg, &c.clamped, opts.mutate_negative_branch);
            return c;
        }

        int circular_distance(int a, int b, int M)
        {
            const int d = std::abs(a - b) % M;
            return std::min(d, M - d);
        }
    }

    CVector ls_estimate(const CMatrix &Y, const PilotFrame &pilots, LsMode mode)
    {
        const auto N = pilots.length();
        if (Y.cols() != N)
            throw DomainError("ls_estimate: frame has " + std::to_string(Y.cols()) + " columns but " +
                              std::to_string(N) + " pilots");

        const double scale = N * pilots.power;
        if (mode == LsMode::transpose)
        {
            const cd sts = pilots.symbols.transpose() * pilots.symbols;
            if (std::abs(sts) < 1e-12 * scale)
                throw IllConditionedPilots("ls_estimate: |s^T s| = " + std::to_string(std::abs(sts)) +
                                           " is numerically zero; use the conjugate correlator");
            return Y * pilots.symbols / sts;
        }
        const double shs = pilots.symbols.squaredNorm();
        if (shs < 1e-12 * scale)
            throw IllConditionedPilots("ls_estimate: pilot energy is numerically zero");
        return Y * pilots.symbols.conjugate() / shs;
    }

    double bin_to_angle(int bin0, double delta, const ArrayConfig &cfg, bool *clamped, bool mutate_negative_branch)
    {
        const int M = cfg.num_antennas;
        // Bins up to M/2 carry non-negative spatial frequency; the rest wrap to negative.
        // At d/lambda = 0.5 this is exactly the two-branch rule; the bin M/2 (sin = +-1) resolves to +pi/2.
        const bool positive = 2 * bin0 <= M;
        const double index = positive ? bin0 : bin0 - M;
        double s = index / (M * cfg.spacing_ratio) - delta / cfg.phase_scale();
        if (!positive && mutate_negative_branch)
            s = -s;
        const bool out = s > 1.0 || s < -1.0;
        if (clamped)
            *clamped = out;
        return std::asin(std::clamp(s, -1.0, 1.0));
    }

    CoarseEstimate dft_coarse(const CVector &h_hat, const ArrayConfig &cfg, const EstimatorOptions &opts)
    {
        cfg.validate();
        if (h_hat.size() != cfg.num_antennas)
            throw DomainError("dft_coarse: vector length does not match the array");

        const CVector spectrum = dft_apply(h_hat);
        // first maximal entry; an all-zero input therefore resolves to bin 1 with zero gain
        Eigen::Index best = 0;
        double best_mag = std::abs(spectrum[0]);
        for (Eigen::Index m = 1; m < spectrum.size(); ++m)
        {
            const double mag = std::abs(spectrum[m]);
            if (mag > best_mag)
            {
                best_mag = mag;
                best = m;
            }
        }
        return coarse_at_bin(spectrum, static_cast<int>(best), cfg, opts);
    }

    RefinedEstimate rotation_refine(const CVector &h_hat, const ArrayConfig &cfg, const CoarseEstimate &coarse,
                                    const EstimatorOptions &opts)
    {
        cfg.validate();
        const int M = cfg.num_antennas;
        if (h_hat.size() != M)
            throw DomainError("rotation_refine: vector length does not match the array");
        if (coarse.bin < 1 || coarse.bin > M)
            throw DomainError("rotation_refine: coarse bin out of range");

        const int center = coarse.bin - 1;
        int best_bin = center;
        BinSearch best = search_bin(h_hat, center, opts);
        for (int offset : {-1, 1})
        {
            const int b = ((center + offset) % M + M) % M;
            const BinSearch s = search_bin(h_hat, b, opts);
            if (s.value > best.value)
            {
                best = s;
                best_bin = b;
            }
        }

        RefinedEstimate r;
        r.bin = best_bin + 1;
        r.delta = std::clamp(best.delta, -pi / M, pi / M);
        r.gain_hat = rotated_dft_entry(h_hat, best_bin, r.delta);
        r.theta_hat = bin_to_angle(best_bin, r.delta, cfg, &r.clamped, opts.mutate_negative_branch);
        return r;
    }

    EstimationResult estimate_all(const ReceivedFrame &frame0, const ReceivedFrame &frame1, const PilotFrame &pilots,
                                  const ArrayConfig &cfg, double eta, const EstimatorOptions &opts)
    {
        cfg.validate();
        if (frame0.tag_state != 0 || frame1.tag_state != 1)
            throw DomainError("estimate_all: expected frames with tag states 0 and 1");
        if (!(eta > 0.0 && eta <= 1.0))
            throw DomainError("estimate_all: eta must lie in (0, 1]");

        EstimationResult res;
        res.eta = eta;
        res.ls_channels[0] = ls_estimate(frame0.samples, pilots, opts.ls_mode);
        res.ls_channels[1] = ls_estimate(frame1.samples, pilots, opts.ls_mode);

        const PathPair direct = estimate_path(res.ls_channels[0], cfg, opts);
        res.direct = direct.refined;
        res.direct_coarse = direct.coarse;

        const CVector direct_fine = path_reconstruction(cfg, res.direct.theta_hat, res.direct.gain_hat);
        const CVector direct_coarse = path_reconstruction(cfg, res.direct_coarse.theta_hat, res.direct_coarse.gain_hat);

        if (opts.separation == Separation::subtract)
        {
            const CVector residual = res.ls_channels[1] - direct_fine;
            res.backscatter = estimate_path(residual, cfg, opts).refined;

            const CVector residual_coarse = res.ls_channels[1] - direct_coarse;
            res.backscatter_coarse = dft_coarse(residual_coarse, cfg, opts);
        }
        else
        {
            const int M = cfg.num_antennas;
            const CVector spectrum = dft_apply(res.ls_channels[1]);
            Eigen::Index p1 = 0;
            spectrum.cwiseAbs().maxCoeff(&p1);
            int p2 = -1;
            double p2_mag = -1.0;
            for (int m = 0; m < M; ++m)
            {
                if (circular_distance(m, static_cast<int>(p1), M) <= 1)
                    continue;
                if (std::abs(spectrum[m]) > p2_mag)
                {
                    p2_mag = std::abs(spectrum[m]);
                    p2 = m;
                }
            }
            const CoarseEstimate c1 = coarse_at_bin(spectrum, static_cast<int>(p1), cfg, opts);
            const CoarseEstimate c2 = coarse_at_bin(spectrum, p2, cfg, opts);
            // each peak is refined with the other path's current reconstruction removed
            const CVector &h = res.ls_channels[1];
            RefinedEstimate r1 = rotation_refine(h - path_reconstruction(cfg, c2.theta_hat, c2.gain_hat), cfg, c1, opts);
            RefinedEstimate r2 = rotation_refine(h - path_reconstruction(cfg, r1.theta_hat, r1.gain_hat), cfg, c2, opts);
            r1 = rotation_refine(h - path_reconstruction(cfg, r2.theta_hat, r2.gain_hat), cfg, c1, opts);

            // the peak nearer the B=0 direct-path DoA is the direct path
            const bool first_is_direct =
                std::abs(r1.theta_hat - res.direct.theta_hat) <= std::abs(r2.theta_hat - res.direct.theta_hat);
            res.backscatter = first_is_direct ? r2 : r1;
            res.backscatter_coarse = first_is_direct ? c2 : c1;
        }

        res.h1_over_eta = res.backscatter.gain_hat / eta;

        res.reconstructed_channels[0] = direct_fine;
        res.reconstructed_channels[1] =
            direct_fine + path_reconstruction(cfg, res.backscatter.theta_hat, res.backscatter.gain_hat);
        res.coarse_channels[0] = direct_coarse;
        res.coarse_channels[1] =
            direct_coarse +
            path_reconstruction(cfg, res.backscatter_coarse.theta_hat, res.backscatter_coarse.gain_hat);
        return res;
    }
}
