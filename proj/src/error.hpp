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

#ifndef AMBC_ERROR_HPP
#define AMBC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ambc
{
    // Numeric values mirror the status codes of the C API (ambc.h).
    enum class ErrorCode : int
    {
        invalid_argument = 1,
        domain = 2,
        io = 3,
        singular_fisher = 4,
        degenerate_geometry = 5,
        ill_conditioned_pilots = 6,
        empty_input = 7,
        unknown_key = 8
    };

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    class DomainError : public Error
    {
    public:
        explicit DomainError(const std::string &what) : Error(ErrorCode::domain, what) {}
    };

    class SingularFisher : public Error
    {
    public:
        explicit SingularFisher(const std::string &what) : Error(ErrorCode::singular_fisher, what) {}
    };

    class DegenerateGeometry : public Error
    {
    public:
        explicit DegenerateGeometry(const std::string &what) : Error(ErrorCode::degenerate_geometry, what) {}
    };

    class IllConditionedPilots : public Error
    {
    public:
        explicit IllConditionedPilots(const std::string &what) : Error(ErrorCode::ill_conditioned_pilots, what) {}
    };

    class IoError : public Error
    {
    public:
        explicit IoError(const std::string &what) : Error(ErrorCode::io, what) {}
    };
}

#endif
