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

#include <doctest.h>

#include "error.hpp"
#include "estimation.hpp"

#include <cmath>
#include <numbers>

using namespace ambc;
using std::numbers::pi;

namespace
{
    // Oracle: full matrix products F * Phi(delta) * h, no shared code with the estimator's Horner path.
    double brute_peak(const CVector &h, int bin0, double delta)
    {
        const int M = static_cast<int>(h.size());
        const CVector y = dft_matrix(M) * (rotation_matrix(M, delta) * h);
        return std::abs(y[bin0]);
    }

    int brute_argmax(const CVector &h)
    {
        const CVector y = dft_matrix(static_cast<int>(h.size())) * h;
        Eigen::Index best = 0;
        y.cwiseAbs().maxCoeff(&best);
        return static_cast<int>(best);
    }

    ReceivedFrame noiseless(const ChannelParams &p, const ArrayConfig &cfg, const PilotFrame &pilots, int b)
    {
        Rng rng(0);
        return generate_frame(p, cfg, pilots.with_tag_state(b), 0.0, rng);
    }
}

TEST_CASE("ls_estimate is exact without noise")
{
    const ArrayConfig cfg{32, 0.5};
    Rng rng(4);
    const ChannelParams p = sample_channel(rng);
    for (int N : {1, 3, 8})
    {
        const PilotFrame pilots = make_pilots(N, 2.5).with_tag_state(1);
        const ReceivedFrame f = generate_frame(p, cfg, pilots, 0.0, rng);
        const CVector h = composite_channel(p, cfg, 1);
        CHECK((ls_estimate(f.samples, pilots) - h).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ls_estimate(f.samples, pilots, LsMode::conjugate) - h).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("ls_estimate noise variance is sigma2 / (N P_s)")
{
    const ArrayConfig cfg{10, 0.5};
    ChannelParams zero;
    zero.h0 = 0.0;
    zero.h_st = 0.0;
    auto empirical_var = [&](double power, int N, std::uint64_t seed) {
        Rng rng(seed);
        const PilotFrame pilots = make_pilots(N, power);
        double acc = 0.0;
        const int trials = 10000;
        for (int t = 0; t < trials; ++t)
        {
            const ReceivedFrame f = generate_frame(zero, cfg, pilots, 1.0, rng);
            acc += ls_estimate(f.samples, pilots).cwiseAbs2().sum();
        }
        return acc / (trials * cfg.num_antennas);
    };

    const double v1 = empirical_var(1.0, 1, 17);
    CHECK(v1 >= 0.98);
    CHECK(v1 <= 1.02);

    const double v2 = empirical_var(2.0, 1, 18);
    CHECK(v1 / v2 == doctest::Approx(2.0).epsilon(0.05));

    const double v4 = empirical_var(1.0, 4, 19);
    CHECK(v4 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("ls_estimate pilot checks")
{
    PilotFrame complex_pilots;
    complex_pilots.power = 1.0;
    complex_pilots.symbols.resize(2);
    complex_pilots.symbols << cd(1, 0), cd(0, 1); // s^T s = 0
    const CMatrix Y = CMatrix::Ones(4, 2);
    CHECK_THROWS_AS(ls_estimate(Y, complex_pilots, LsMode::transpose), IllConditionedPilots);
    CHECK_NOTHROW(ls_estimate(Y, complex_pilots, LsMode::conjugate));

    CHECK_THROWS_AS(ls_estimate(CMatrix::Ones(4, 3), make_pilots(2, 1.0)), DomainError);
}

TEST_CASE("conjugate correlator recovers the channel with complex constant-modulus pilots")
{
    const ArrayConfig cfg{16, 0.5};
    ChannelParams p;
    p.h0 = {0.4, 0.2};
    PilotFrame pilots;
    pilots.power = 2.0;
    pilots.symbols.resize(3);
    pilots.symbols << std::polar(std::sqrt(2.0), 0.3), std::polar(std::sqrt(2.0), -1.2), std::polar(std::sqrt(2.0), 2.0);
    const ReceivedFrame f = noiseless(p, cfg, pilots, 0);
    CHECK((ls_estimate(f.samples, pilots, LsMode::conjugate) - composite_channel(p, cfg, 0)).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("dft_coarse on-grid example")
{
    const ArrayConfig cfg{128, 0.5};
    const CVector h = steering_vector(cfg, pi / 6).entries;
    const CoarseEstimate c = dft_coarse(h, cfg);
    CHECK(c.bin == 33);
    CHECK(brute_argmax(h) + 1 == 33);
    CHECK(std::abs(c.theta_hat - pi / 6) < 1e-12);
    CHECK(std::abs(c.gain_hat - cd(1, 0)) < 1e-12);
    CHECK_FALSE(c.clamped);
}

TEST_CASE("dft_coarse off-grid example at -pi/4")
{
    const ArrayConfig cfg{128, 0.5};
    const CVector h = steering_vector(cfg, -pi / 4).entries;
    const CoarseEstimate c = dft_coarse(h, cfg);
    CHECK(c.bin == 84);
    CHECK(brute_argmax(h) + 1 == 84);
    CHECK(c.theta_hat == doctest::Approx(std::asin(-0.703125)).epsilon(1e-14));
}

TEST_CASE("dft_coarse degenerate input")
{
    const ArrayConfig cfg{16, 0.5};
    const CoarseEstimate c = dft_coarse(CVector::Zero(16), cfg);
    CHECK(c.bin == 1);
    CHECK(c.gain_hat == cd(0, 0));
    CHECK(c.theta_hat == 0.0);
    CHECK_THROWS_AS(dft_coarse(CVector::Zero(15), cfg), DomainError);
}

TEST_CASE("bin to angle branch rule")
{
    const ArrayConfig cfg{8, 0.5};
    CHECK(bin_to_angle(0, 0.0, cfg) == 0.0);
    CHECK(bin_to_angle(2, 0.0, cfg) == doctest::Approx(std::asin(0.5)));
    CHECK(bin_to_angle(4, 0.0, cfg) == doctest::Approx(pi / 2)); // aliasing endpoint resolves to +pi/2
    CHECK(bin_to_angle(5, 0.0, cfg) == doctest::Approx(std::asin(-0.75)));
    CHECK(bin_to_angle(7, 0.0, cfg) == doctest::Approx(std::asin(-0.25)));

    bool clamped = false;
    CHECK(bin_to_angle(4, -pi / 8, cfg, &clamped) == doctest::Approx(pi / 2));
    CHECK(clamped);

    // narrower spacing: bins beyond the visible region clamp to the nearer endpoint
    const ArrayConfig narrow{8, 0.25};
    CHECK(bin_to_angle(3, 0.0, narrow, &clamped) == doctest::Approx(pi / 2));
    CHECK(clamped);
    CHECK(bin_to_angle(1, 0.0, narrow, &clamped) == doctest::Approx(pi / 6));
    CHECK_FALSE(clamped);
}

TEST_CASE("rotation_refine leaves on-grid estimates unchanged")
{
    const ArrayConfig cfg{128, 0.5};
    const cd g(0.6, -0.8);
    const CVector h = g * steering_vector(cfg, pi / 6).entries;
    const CoarseEstimate c = dft_coarse(h, cfg);
    const RefinedEstimate r = rotation_refine(h, cfg, c);
    CHECK(r.bin == c.bin);
    CHECK(std::abs(r.delta) < 1e-10);
    CHECK(std::abs(r.theta_hat - pi / 6) < 1e-10);
    CHECK(std::abs(r.gain_hat - g) < 1e-10);
}

TEST_CASE("rotation_refine off-grid worked example at -pi/4")
{
    const ArrayConfig cfg{128, 0.5};
    const CVector h = steering_vector(cfg, -pi / 4).entries;
    const RefinedEstimate r = rotation_refine(h, cfg, dft_coarse(h, cfg));

    // fine grid oracle: 10^4 Delta points through explicit F Phi h products at the coarse bin
    const int G = 10000;
    double best_delta = 0.0, best_val = -1.0;
    for (int i = 0; i < G; ++i)
    {
        const double d = -pi / 128 + (2 * pi / 128) * i / (G - 1);
        const double v = brute_peak(h, 83, d);
        if (v > best_val)
        {
            best_val = v;
            best_delta = d;
        }
    }
    const double spacing = (2 * pi / 128) / (G - 1);
    CHECK(r.bin == 84);
    CHECK(std::abs(r.delta - best_delta) <= spacing);
    CHECK(r.delta == doctest::Approx(0.012507).epsilon(1e-4));
    // analytic alignment: 2 pi (83 - wrapped position) / M
    const double position = 128 + 64 * std::sin(-pi / 4);
    CHECK(std::abs(r.delta - 2 * pi * (83 - position) / 128) < 1e-12);
    CHECK(std::abs(r.theta_hat + pi / 4) < 1e-6);
    CHECK(std::abs(r.gain_hat - cd(1, 0)) < 1e-8);
}

TEST_CASE("rotation_refine improves an off-grid pi/5 path")
{
    const ArrayConfig cfg{128, 0.5};
    const CVector h = cd(0.3, 0.4) * steering_vector(cfg, pi / 5).entries;
    const CoarseEstimate c = dft_coarse(h, cfg);
    const RefinedEstimate r = rotation_refine(h, cfg, c);
    CHECK(std::abs(r.theta_hat - pi / 5) < std::abs(c.theta_hat - pi / 5));
    CHECK(std::abs(r.theta_hat - pi / 5) < 1e-9);
    CHECK(std::abs(r.gain_hat - cd(0.3, 0.4)) < 1e-8);
}

TEST_CASE("refinement dominates the coarse estimate for random off-grid angles")
{
    const ArrayConfig cfg{128, 0.5};
    Rng rng(123);
    std::uniform_real_distribution<double> angle(-1.45, 1.45);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        const double th = angle(rng);
        const cd g = sample_cn(rng);
        const CVector h = g * steering_vector(cfg, th).entries;
        const CoarseEstimate c = dft_coarse(h, cfg);
        const RefinedEstimate r = rotation_refine(h, cfg, c);
        CHECK(std::abs(r.theta_hat - th) <= std::abs(c.theta_hat - th) + 1e-12);
        CHECK(std::abs(r.gain_hat - g) < 1e-8 * std::max(1.0, std::abs(g)));
        worst = std::max(worst, std::abs(r.theta_hat - th));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("rotating an aligned vector moves the peak consistently")
{
    const ArrayConfig cfg{64, 0.5};
    const double th = std::asin(-12.0 / 32.0); // bin 64 - 12 = 52, m = 53
    for (double delta : {-0.04, -0.01, 0.0, 0.02, 0.045})
    {
        const CVector v = rotation_matrix(64, delta) * steering_vector(cfg, th).entries;
        // m - 1 = M d/lambda sin(theta) + M delta / (2 pi), wrapped
        const double pos = 64 * 0.5 * std::sin(th) + 64 * delta / (2 * pi) + 64;
        const CoarseEstimate c = dft_coarse(v, cfg);
        CHECK(c.bin == static_cast<int>(std::lround(pos)) % 64 + 1);
        const RefinedEstimate r = rotation_refine(v, cfg, c);
        CHECK(r.delta == doctest::Approx(-delta).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("estimate_all: noiseless on-grid paths are exact")
{
    const ArrayConfig cfg{128, 0.5};
    ChannelParams p;
    p.h0 = {0.9, -0.4};
    p.h_st = {0.7, 0.5};
    p.h_tr = {-1.1, 0.3};
    p.eta = 0.5;
    p.theta0 = std::asin(-40.0 / 64.0);
    p.theta1 = std::asin(20.0 / 64.0);
    const PilotFrame pilots = make_pilots(2, 1.0);
    for (Separation sep : {Separation::subtract, Separation::two_peaks})
    {
        EstimatorOptions opts;
        opts.separation = sep;
        const auto est = estimate_all(noiseless(p, cfg, pilots, 0), noiseless(p, cfg, pilots, 1), pilots, cfg, p.eta, opts);
        CHECK(std::abs(est.direct.theta_hat - p.theta0) < 1e-9);
        CHECK(std::abs(est.backscatter.theta_hat - p.theta1) < 1e-9);
        CHECK(std::abs(std::abs(est.direct.gain_hat) - std::abs(p.h0)) < 1e-9);
        CHECK(std::abs(std::abs(est.h1_over_eta) - std::abs(p.h1() / p.eta)) < 1e-9);
        CHECK(std::abs(est.direct.gain_hat - p.h0) < 1e-9);
        CHECK(std::abs(est.backscatter.gain_hat - p.h1()) < 1e-9);
        CHECK((est.reconstructed_channels[1] - composite_channel(p, cfg, 1)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("estimate_all: noiseless off-grid paths at -pi/4 and pi/5")
{
    const ArrayConfig cfg{128, 0.5};
    ChannelParams p; // unit gains, eta = 0.5, default angles
    const PilotFrame pilots = make_pilots(1, 1.0);
    const auto est = estimate_all(noiseless(p, cfg, pilots, 0), noiseless(p, cfg, pilots, 1), pilots, cfg, p.eta);
    CHECK(std::abs(est.direct.theta_hat + pi / 4) < 1e-4);
    CHECK(std::abs(est.backscatter.theta_hat - pi / 5) < 1e-3);
    CHECK(std::abs(est.direct_coarse.theta_hat + pi / 4) > 1e-3);
    CHECK(std::abs(est.direct.theta_hat + pi / 4) < std::abs(est.direct_coarse.theta_hat + pi / 4));
    CHECK(std::abs(est.backscatter.theta_hat - pi / 5) < std::abs(est.backscatter_coarse.theta_hat - pi / 5));

    // reconstruction invariant
    const CVector rebuilt = est.direct.gain_hat * steering_vector(cfg, est.direct.theta_hat).entries +
                            est.backscatter.gain_hat * steering_vector(cfg, est.backscatter.theta_hat).entries;
    CHECK((rebuilt - est.reconstructed_channels[1]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("estimate_all without a backscatter path")
{
    const ArrayConfig cfg{128, 0.5};
    ChannelParams p;
    p.h0 = {1.0, 0.5};
    p.h_st = 0.0;
    const PilotFrame pilots = make_pilots(1, 100.0); // 20 dB
    Rng rng(8);
    const auto f0 = generate_frame(p, cfg, pilots.with_tag_state(0), 1.0, rng);
    const auto f1 = generate_frame(p, cfg, pilots.with_tag_state(1), 1.0, rng);
    const auto est = estimate_all(f0, f1, pilots, cfg, p.eta);
    CHECK(std::abs(est.direct.theta_hat + pi / 4) < 1e-3);
    // noise floor of a DFT bin is sigma / sqrt(M N P_s) ~ 0.009; the refit direct path leaves about twice that
    CHECK(std::abs(est.backscatter.gain_hat) < 0.1);
}

TEST_CASE("estimate_all preconditions")
{
    const ArrayConfig cfg{16, 0.5};
    ChannelParams p;
    const PilotFrame pilots = make_pilots(1, 1.0);
    const auto f0 = noiseless(p, cfg, pilots, 0);
    const auto f1 = noiseless(p, cfg, pilots, 1);
    CHECK_THROWS_AS(estimate_all(f1, f0, pilots, cfg, 0.5), DomainError);
    CHECK_THROWS_AS(estimate_all(f0, f1, pilots, cfg, 0.0), DomainError);
}

TEST_CASE("a flipped negative branch breaks noiseless exactness")
{
    const ArrayConfig cfg{128, 0.5};
    ChannelParams p;
    const PilotFrame pilots = make_pilots(1, 1.0);
    EstimatorOptions bad;
    bad.mutate_negative_branch = true;
    const auto est = estimate_all(noiseless(p, cfg, pilots, 0), noiseless(p, cfg, pilots, 1), pilots, cfg, p.eta, bad);
    CHECK(std::abs(est.direct.theta_hat + pi / 4) > 1.0);
}
