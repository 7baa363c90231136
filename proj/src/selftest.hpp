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

#ifndef AMBC_SELFTEST_HPP
#define AMBC_SELFTEST_HPP

#include "estimation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ambc
{
    struct SelftestCheck
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct SelftestSuite
    {
        std::string name;
        std::vector<SelftestCheck> checks;

        int failures() const;
    };

    struct SelftestReport
    {
        std::vector<SelftestSuite> suites;

        bool passed() const;
        void print(std::ostream &out) const;
    };

    // Noiseless exactness, closed-form/numeric CRLB agreement and LCRLB dominance.
    SelftestReport run_selftest(const EstimatorOptions &opts = {});
}

#endif
