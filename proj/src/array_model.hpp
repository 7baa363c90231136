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

#ifndef AMBC_ARRAY_MODEL_HPP
#define AMBC_ARRAY_MODEL_HPP

#include <complex>
#include <Eigen/Dense>

namespace ambc
{
    using cd = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RotationMatrix = Eigen::DiagonalMatrix<cd, Eigen::Dynamic>;

    // Uniform linear array geometry.
    // spacing_ratio is d/lambda; values above 0.5 would make sin(theta) -> bin ambiguous.
    struct ArrayConfig
    {
        int num_antennas = 128;
        double spacing_ratio = 0.5;

        void validate() const; // throws DomainError
        double phase_scale() const; // 2*pi*d/lambda
    };

    struct SteeringVector
    {
        CVector entries; // entries[k] = exp(j 2 pi (d/lambda) k sin(theta))
        double angle = 0.0;
    };

    // theta in [-pi/2, pi/2], DomainError otherwise
    SteeringVector steering_vector(const ArrayConfig &cfg, double theta);

    // [F]_pq = (1/M) exp(-j 2 pi p q / M), 0-based p, q
    CMatrix dft_matrix(int M);

    // F * h without materialising F
    CVector dft_apply(const CVector &h);

    // diag{1, e^{j delta}, ..., e^{j (M-1) delta}}, requires |delta| <= pi/M
    RotationMatrix rotation_matrix(int M, double delta);

    // Entry `bin` (0-based) of F * Phi(delta) * h, evaluated in O(M).
    cd rotated_dft_entry(const CVector &h, int bin, double delta);

    // (1/M) e^{-j (M-1) r / 2} sin(M r / 2) / sin(r / 2), with the limit taken at r = 0 mod 2 pi.
    cd dirichlet_peak(double r, int M);
}

#endif
