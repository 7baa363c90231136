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

#include "bounds.hpp"
#include "error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace ambc
{
    using std::numbers::pi;

    void BoundInputs::validate() const
    {
        std::ostringstream msg;
        if (!(abs_h0 >= 0.0) || !(abs_h1 >= 0.0))
            msg << "gain moduli must be non-negative";
        else if (!(std::abs(theta0) < pi / 2.0))
            msg << "theta0 = " << theta0 << " must satisfy |theta0| < pi/2";
        else if (!(std::abs(theta1) < pi / 2.0))
            msg << "theta1 = " << theta1 << " must satisfy |theta1| < pi/2";
        else if (!(eta > 0.0 && eta <= 1.0))
            msg << "eta = " << eta << " outside (0, 1]";
        else if (M < 2 || N < 1)
            msg << "need M >= 2 and N >= 1";
        else if (!(power > 0.0) || !(sigma2 > 0.0))
            msg << "P_s and sigma2 must be positive";
        else if (!(spacing_ratio > 0.0 && spacing_ratio <= 0.5))
            msg << "spacing_ratio = " << spacing_ratio << " outside (0, 0.5]";
        else
            return;
        throw DomainError("BoundInputs: " + msg.str());
    }

    double BoundInputs::c0() const { return 2.0 * pi * spacing_ratio; }
    double BoundInputs::c1() const { return c0() * (std::sin(theta0) - std::sin(theta1)); }
    double BoundInputs::c2() const { return omega0 - omega1; }

    Eigen::Matrix4d FisherTerms::matrix() const
    {
        Eigen::Matrix4d T;
        T << T11, T12, 0.0, T14,
             T12, T22, T23, 0.0,
             0.0, T23, T33, T34,
             T14, 0.0, T34, T44;
        return T;
    }

    double FisherTerms::determinant() const
    {
        return T14 * T14 * (T23 * T23 - T22 * T33) - 2.0 * T12 * T14 * T23 * T34 +
               (T12 * T12 - T11 * T22) * (T34 * T34 - T33 * T44) - T11 * T23 * T23 * T44;
    }

    FisherTerms fisher_terms(const BoundInputs &in)
    {
        in.validate();
        const double c0 = in.c0(), c1 = in.c1(), c2 = in.c2();
        double s_cos = 0.0, s_msin = 0.0, s_m2cos = 0.0, s_m2 = 0.0;
        for (int m = 0; m < in.M; ++m)
        {
            const double arg = c1 * m + c2;
            const double md = m;
            s_cos += std::cos(arg);
            s_msin += md * std::sin(arg);
            s_m2cos += md * md * std::cos(arg);
            s_m2 += md * md;
        }

        FisherTerms t;
        t.T11 = in.M;
        t.T22 = in.M;
        t.T12 = s_cos;
        t.T14 = c0 * in.abs_h1 * s_msin;
        t.T23 = -c0 * in.abs_h0 * s_msin;
        // sum m^2 = (M-1) M (2M-1) / 6
        t.T33 = c0 * c0 * in.abs_h0 * in.abs_h0 * s_m2;
        t.T34 = c0 * c0 * in.abs_h0 * in.abs_h1 * s_m2cos;
        t.T44 = c0 * c0 * in.abs_h1 * in.abs_h1 * s_m2;
        return t;
    }

    Eigen::Matrix4d fisher_matrix(const BoundInputs &in)
    {
        const double scale = 2.0 * in.N * in.power / in.sigma2;
        return scale * fisher_terms(in).matrix();
    }

    namespace
    {
        Bounds4 jacobian_sq(const BoundInputs &in)
        {
            const double c0 = std::cos(in.theta0), c1 = std::cos(in.theta1);
            return {1.0, 1.0 / (in.eta * in.eta), 1.0 / (c0 * c0), 1.0 / (c1 * c1)};
        }

        std::string geometry_note(const BoundInputs &in)
        {
            std::ostringstream os;
            os << "|h0| = " << in.abs_h0 << ", |h1| = " << in.abs_h1 << ", c1 = " << in.c1()
               << ", c2 = " << in.c2();
            if (in.abs_h0 == 0.0 || in.abs_h1 == 0.0)
                os << " (a path has zero gain)";
            else if (std::abs(std::remainder(in.c1(), 2.0 * pi)) < 1e-9)
                os << " (paths share the same spatial frequency)";
            return os.str();
        }
    }

    double fisher_condition(const Eigen::Matrix4d &fisher)
    {
        const Eigen::Vector4d d = fisher.diagonal();
        if ((d.array() <= 0.0).any())
            return std::numeric_limits<double>::infinity();
        const Eigen::Vector4d s = d.cwiseSqrt().cwiseInverse();
        const Eigen::Matrix4d scaled = s.asDiagonal() * fisher * s.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(scaled, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 0.0))
            return std::numeric_limits<double>::infinity();
        return hi / lo;
    }

    Eigen::Matrix4d fisher_matrix_reported(const BoundInputs &in)
    {
        const Eigen::Vector4d inv_jac(1.0, in.eta, std::cos(in.theta0), std::cos(in.theta1));
        return inv_jac.asDiagonal() * fisher_matrix(in) * inv_jac.asDiagonal();
    }

    namespace
    {
        // Diagonal of I^-1. `note` is appended to the SingularFisher message.
        template <class Note>
        Eigen::Vector4d inverse_diagonal(const Eigen::Matrix4d &I, Note note)
        {
            const double cond = fisher_condition(I);
            if (!(cond <= 1e12))
            {
                std::ostringstream os;
                os << "singular Fisher matrix (scaled condition number " << cond << ")" << note();
                throw SingularFisher(os.str());
            }
            // invert the unit-diagonal scaling, then undo it
            const Eigen::Vector4d s = I.diagonal().cwiseSqrt().cwiseInverse();
            const Eigen::Matrix4d scaled = s.asDiagonal() * I * s.asDiagonal();
            const Eigen::Matrix4d inv = s.asDiagonal() * scaled.fullPivLu().inverse() * s.asDiagonal();
            return inv.diagonal();
        }
    }

    Bounds4 crlb_numeric(const BoundInputs &in)
    {
        const Eigen::Vector4d d = inverse_diagonal(fisher_matrix(in), [&] { return ": " + geometry_note(in); });
        const Bounds4 j2 = jacobian_sq(in);
        Bounds4 out{};
        for (int k = 0; k < 4; ++k)
            out[k] = j2[k] * d[k];
        return out;
    }

    Bounds4 crlb_from_fisher(const Eigen::Matrix4d &fisher)
    {
        const Eigen::Vector4d d = inverse_diagonal(fisher, [] { return std::string(); });
        return {d[0], d[1], d[2], d[3]};
    }

    Bounds4 lcrlb_from_fisher(const Eigen::Matrix4d &fisher)
    {
        if ((fisher.diagonal().array() <= 0.0).any())
            throw SingularFisher("LCRLB: Fisher matrix has a non-positive diagonal entry");
        const Eigen::Vector4d d = fisher.diagonal().cwiseInverse();
        return {d[0], d[1], d[2], d[3]};
    }

    Bounds4 crlb_closed_form(const BoundInputs &in)
    {
        const FisherTerms t = fisher_terms(in);
        const double L1 = t.determinant();
        const double scale = t.T11 * t.T22 * t.T33 * t.T44;
        if (!(std::abs(L1) > 1e-12 * scale))
            throw DegenerateGeometry("closed-form CRLB: L1 vanishes, " + geometry_note(in));

        const double base = in.sigma2 / (2.0 * in.N * L1 * in.power);
        const double cos0 = std::cos(in.theta0), cos1 = std::cos(in.theta1);

        Bounds4 out{};
        out[0] = base * (t.T22 * t.T33 * t.T44 - t.T22 * t.T34 * t.T34 - t.T23 * t.T23 * t.T44);
        out[1] = base * (t.T11 * t.T33 * t.T44 - t.T14 * t.T14 * t.T33 - t.T11 * t.T34 * t.T34) / (in.eta * in.eta);
        out[2] = base * (t.T11 * t.T22 * t.T44 - t.T22 * t.T14 * t.T14 - t.T12 * t.T12 * t.T44) / (cos0 * cos0);
        out[3] = base * (t.T11 * t.T22 * t.T33 - t.T11 * t.T23 * t.T23 - t.T12 * t.T12 * t.T33) / (cos1 * cos1);
        return out;
    }

    Bounds4 lcrlb(const BoundInputs &in)
    {
        in.validate();
        const double M = in.M;
        const double amp = in.sigma2 / (2.0 * M * in.N * in.power);
        const double cubic = (M - 1.0) * M * (2.0 * M - 1.0);
        // lambda^2 / (2 pi d)^2 = 1 / c0^2
        const double c0 = in.c0();
        const double ang = 3.0 * in.sigma2 / (c0 * c0 * in.N * cubic * in.power);
        const double cos0 = std::cos(in.theta0), cos1 = std::cos(in.theta1);

        return {amp, amp / (in.eta * in.eta), ang / (in.abs_h0 * in.abs_h0 * cos0 * cos0),
                ang / (in.abs_h1 * in.abs_h1 * cos1 * cos1)};
    }

    std::array<double, 2> bounds_state0(const BoundInputs &in)
    {
        // only the direct path exists, so |h1|, theta1 and eta are irrelevant
        BoundInputs single = in;
        single.abs_h1 = 1.0;
        single.theta1 = 0.0;
        single.eta = 1.0;
        const Bounds4 l = lcrlb(single);
        return {l[0], l[2]};
    }

    BoundsResult compute_bounds(const BoundInputs &in)
    {
        BoundsResult r;
        r.fisher = fisher_matrix(in);
        r.crlb_numeric = crlb_numeric(in);
        r.crlb_closed = crlb_closed_form(in);
        r.lcrlb = lcrlb(in);
        r.tag_state = 1;
        return r;
    }
}
