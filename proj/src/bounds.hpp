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

#ifndef AMBC_BOUNDS_HPP
#define AMBC_BOUNDS_HPP

#include <array>
#include <Eigen/Dense>

namespace ambc
{
    // Parameter vector phi = [|h0|, |h1|, sin(theta0), sin(theta1)].
    // Bounds are reported for g(phi) = [|h0|, |h1|/eta, theta0, theta1].
    struct BoundInputs
    {
        double abs_h0 = 1.0;
        double abs_h1 = 0.5; // eta |h_st h_tr| with unit cascade gains
        double omega0 = 0.0; // phase of h0
        double omega1 = 0.0; // phase of h1
        double theta0 = -0.7853981633974483;
        double theta1 = 0.6283185307179586;
        double eta = 0.5;
        int M = 128;
        int N = 1;
        double power = 1.0;  // P_s
        double sigma2 = 1.0;
        double spacing_ratio = 0.5;

        void validate() const; // DomainError on invalid inputs, including |theta| >= pi/2

        double c0() const; // 2 pi d / lambda
        double c1() const; // c0 (sin theta0 - sin theta1)
        double c2() const; // omega0 - omega1
    };

    // Entries of the bracketed matrix; the Fisher matrix is (2 N P_s / sigma2) T.
    struct FisherTerms
    {
        double T11 = 0, T12 = 0, T14 = 0, T22 = 0, T23 = 0, T33 = 0, T34 = 0, T44 = 0;

        Eigen::Matrix4d matrix() const;
        double determinant() const; // L1
    };

    using Bounds4 = std::array<double, 4>;

    struct BoundsResult
    {
        Eigen::Matrix4d fisher = Eigen::Matrix4d::Zero();
        Bounds4 crlb_numeric{};
        Bounds4 crlb_closed{};
        Bounds4 lcrlb{};
        int tag_state = 1;
    };

    FisherTerms fisher_terms(const BoundInputs &in);

    Eigen::Matrix4d fisher_matrix(const BoundInputs &in);

    // Fisher matrix in the reported coordinates g = [|h0|, |h1|/eta, theta0, theta1].
    Eigen::Matrix4d fisher_matrix_reported(const BoundInputs &in);

    // Condition number of the unit-diagonal scaling of the Fisher matrix.
    double fisher_condition(const Eigen::Matrix4d &fisher);

    // J^2 [I^-1]_kk by LU inversion. Throws SingularFisher when the scaled
    // condition number exceeds 1e12.
    Bounds4 crlb_numeric(const BoundInputs &in);

    // diag(I^-1) and 1 / diag(I) for an arbitrary Fisher matrix, e.g. one averaged
    // over channel draws. crlb_from_fisher throws SingularFisher like crlb_numeric.
    Bounds4 crlb_from_fisher(const Eigen::Matrix4d &fisher);
    Bounds4 lcrlb_from_fisher(const Eigen::Matrix4d &fisher);

    // Cofactor expressions over L1. Throws DegenerateGeometry when L1 vanishes.
    Bounds4 crlb_closed_form(const BoundInputs &in);

    // J^2 / [I]_kk in closed form.
    Bounds4 lcrlb(const BoundInputs &in);

    // Single-path model of the absorbing state: {var |h0|, var theta0}.
    std::array<double, 2> bounds_state0(const BoundInputs &in);

    BoundsResult compute_bounds(const BoundInputs &in);
}

#endif
