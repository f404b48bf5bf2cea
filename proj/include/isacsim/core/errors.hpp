// SPDX-License-Identifier: Apache-2.0
//
// isacsim: HAPS integrated sensing and communication simulator
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

#pragma once

#include <stdexcept>
#include <string>

namespace isacsim
{
    // Two positions coincide (or a direction is otherwise undefined).
    class DegenerateGeometry : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    class DimensionMismatch : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Raised by the zero-forcing decoder when the effective channel is rank deficient.
    class SingularDecoder : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    namespace detail
    {
        inline void require(bool ok, const std::string &what)
        {
            if (!ok)
                throw std::invalid_argument(what);
        }

        inline void require_dims(bool ok, const std::string &what)
        {
            if (!ok)
                throw DimensionMismatch(what);
        }
    }
}
