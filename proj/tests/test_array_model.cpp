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

#include "array_model.hpp"
#include "error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ambc;
using std::numbers::pi;

namespace
{
    constexpr double tight = 1e-12;

    // direct evaluation of sum_k a_k exp(-j 2 pi p k / M) / M, no twiddle tables
    CVector brute_dft(const CVector &h)
    {
        const auto M = static_cast<int>(h.size());
        CVector out(M);
        for (int p = 0; p < M; ++p)
        {
            cd acc = 0.0;
            for (int k = 0; k < M; ++k)
                acc += h[k] * std::exp(cd(0.0, -2.0 * pi * p * k / M));
            out[p] = acc / double(M);
        }
        return out;
    }
}

TEST_CASE("steering vector examples")
{
    const ArrayConfig cfg{4, 0.5};
    const auto a0 = steering_vector(cfg, 0.0);
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(a0.entries[k] - cd(1.0, 0.0)) < tight);

    const auto a30 = steering_vector(cfg, pi / 6.0);
    const cd expected[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(a30.entries[k] - expected[k]) < tight);

    const auto a90 = steering_vector(ArrayConfig{2, 0.5}, pi / 2.0);
    CHECK(std::abs(a90.entries[0] - cd(1, 0)) < tight);
    CHECK(std::abs(a90.entries[1] - cd(-1, 0)) < tight);
}

TEST_CASE("steering vector invariants and domain")
{
    const ArrayConfig cfg{16, 0.37};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-pi / 2, pi / 2);
    for (int i = 0; i < 50; ++i)
    {
        const double th = angle(rng);
        const auto a = steering_vector(cfg, th);
        CHECK(a.entries[0] == cd(1.0, 0.0));
        for (int k = 0; k < cfg.num_antennas; ++k)
        {
            CHECK(std::abs(std::abs(a.entries[k]) - 1.0) < tight);
            CHECK(std::abs(a.entries[k] - std::exp(cd(0, 2 * pi * 0.37 * k * std::sin(th)))) < 1e-11);
        }
    }
    CHECK_THROWS_AS(steering_vector(cfg, 1.6), DomainError);
    CHECK_THROWS_AS(steering_vector(cfg, -1.6), DomainError);
    CHECK_THROWS_AS(steering_vector(ArrayConfig{1, 0.5}, 0.0), DomainError);
    CHECK_THROWS_AS(steering_vector(ArrayConfig{8, 0.6}, 0.0), DomainError);
    CHECK_THROWS_AS(steering_vector(ArrayConfig{8, 0.0}, 0.0), DomainError);
}

TEST_CASE("dft matrix examples")
{
    const CMatrix F1 = dft_matrix(1);
    CHECK(F1.rows() == 1);
    CHECK(std::abs(F1(0, 0) - cd(1, 0)) < tight);

    const CMatrix F2 = dft_matrix(2);
    CHECK(std::abs(F2(0, 0) - cd(0.5, 0)) < tight);
    CHECK(std::abs(F2(0, 1) - cd(0.5, 0)) < tight);
    CHECK(std::abs(F2(1, 0) - cd(0.5, 0)) < tight);
    CHECK(std::abs(F2(1, 1) - cd(-0.5, 0)) < tight);

    for (int M : {3, 8, 17})
    {
        const CVector ones = CVector::Ones(M);
        const CVector y = dft_matrix(M) * ones;
        CHECK(std::abs(y[0] - cd(1, 0)) < tight);
        for (int m = 1; m < M; ++m)
            CHECK(std::abs(y[m]) < tight);
    }
    CHECK_THROWS_AS(dft_matrix(0), DomainError);
}

TEST_CASE("dft matrix is a scaled unitary")
{
    for (int M : {2, 5, 64, 128})
    {
        const CMatrix F = dft_matrix(M);
        const CMatrix G = F * F.adjoint();
        const CMatrix target = CMatrix::Identity(M, M) / double(M);
        CHECK((G - target).cwiseAbs().maxCoeff() < tight);
    }
}

TEST_CASE("dft_apply agrees with the matrix and with brute force")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int M : {2, 7, 32, 128})
    {
        CVector h(M);
        for (int k = 0; k < M; ++k)
            h[k] = {g(rng), g(rng)};
        const CVector fast = dft_apply(h);
        CHECK((fast - dft_matrix(M) * h).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((fast - brute_dft(h)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("on-grid steering vectors map to a single DFT bin")
{
    const ArrayConfig cfg{64, 0.5};
    for (int q = -31; q <= 32; ++q)
    {
        const double theta = std::asin(q / 32.0);
        const CVector y = dft_apply(steering_vector(cfg, theta).entries);
        const int peak = ((q % 64) + 64) % 64;
        for (int m = 0; m < 64; ++m)
        {
            if (m == peak)
                CHECK(std::abs(std::abs(y[m]) - 1.0) < 1e-12);
            else
                CHECK(std::abs(y[m]) < 1e-12);
        }
    }
}

TEST_CASE("DFT of a single path is the Dirichlet kernel")
{
    const ArrayConfig cfg{128, 0.5};
    const cd h0(0.8, -0.3);
    for (double theta : {-pi / 4, pi / 5, 0.1234, -1.2})
    {
        const CVector y = dft_apply(h0 * steering_vector(cfg, theta).entries);
        for (int m = 0; m < 128; ++m)
        {
            const double r = 2 * pi * m / 128.0 - 2 * pi * 0.5 * std::sin(theta);
            CHECK(std::abs(y[m] - h0 * dirichlet_peak(r, 128)) < 1e-12);
        }
    }
}

TEST_CASE("dirichlet peak values and removable singularity")
{
    for (int M : {1, 2, 4, 7, 128})
    {
        CHECK(std::abs(dirichlet_peak(0.0, M) - cd(1, 0)) < tight);
        // limit is 1 at every multiple of 2 pi
        CHECK(std::abs(dirichlet_peak(2 * pi, M) - cd(1, 0)) < 1e-9);
        CHECK(std::abs(dirichlet_peak(-4 * pi, M) - cd(1, 0)) < 1e-9);
        if (M > 1)
            CHECK(std::abs(dirichlet_peak(2 * pi / M, M)) < tight);
    }
    CHECK(std::abs(dirichlet_peak(pi, 4)) < tight);

    // continuity across the branch threshold
    for (double eps : {1e-6, 1e-8, 2e-9, 1e-10})
        CHECK(std::abs(dirichlet_peak(eps, 64) - dirichlet_peak(0.0, 64)) < 1e-4);
    CHECK(std::isfinite(std::abs(dirichlet_peak(1e-300, 8))));
}

TEST_CASE("rotation matrix")
{
    const RotationMatrix I = rotation_matrix(5, 0.0);
    for (int k = 0; k < 5; ++k)
        CHECK(I.diagonal()[k] == cd(1.0, 0.0));

    const RotationMatrix B = rotation_matrix(2, pi / 2);
    CHECK(std::abs(B.diagonal()[0] - cd(1, 0)) < tight);
    CHECK(std::abs(B.diagonal()[1] - cd(0, 1)) < tight);

    CHECK_THROWS_AS(rotation_matrix(4, pi / 4 + 1e-6), DomainError);
    CHECK_THROWS_AS(rotation_matrix(4, -pi / 4 - 1e-6), DomainError);
    CHECK_NOTHROW(rotation_matrix(4, -pi / 4));
}

TEST_CASE("rotation shifts the steering phase step")
{
    const ArrayConfig cfg{32, 0.5};
    const double theta = 0.4, delta = 0.05;
    const CVector v = rotation_matrix(32, delta) * steering_vector(cfg, theta).entries;
    const double step = 2 * pi * 0.5 * std::sin(theta) + delta;
    for (int k = 0; k < 32; ++k)
    {
        CHECK(std::abs(std::abs(v[k]) - 1.0) < tight);
        CHECK(std::abs(v[k] - std::exp(cd(0, step * k))) < 1e-12);
    }
}

TEST_CASE("rotations compose additively")
{
    const int M = 16;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-pi / (2 * M), pi / (2 * M));
    for (int i = 0; i < 20; ++i)
    {
        const double d1 = d(rng), d2 = d(rng);
        const CVector prod = rotation_matrix(M, d1).diagonal().cwiseProduct(rotation_matrix(M, d2).diagonal());
        CHECK((prod - rotation_matrix(M, d1 + d2).diagonal()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rotated_dft_entry matches F Phi h")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    const int M = 24;
    CVector h(M);
    for (int k = 0; k < M; ++k)
        h[k] = {g(rng), g(rng)};
    for (double delta : {-pi / M, -0.03, 0.0, 0.07, pi / M})
    {
        const CVector full = dft_matrix(M) * (rotation_matrix(M, delta) * h);
        for (int m = 0; m < M; ++m)
            CHECK(std::abs(rotated_dft_entry(h, m, delta) - full[m]) < 1e-12);
    }
}
