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

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace isacsim::harness
{
    /// Command-line misuse: bad flag values, empty seed lists and the like.
    struct UsageError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // "1..5", "1,4,9" or a mix such as "1..3,10".
    inline std::vector<std::uint64_t> parse_seeds(const std::string &text)
    {
        std::vector<std::uint64_t> out;
        std::stringstream ss(text);
        std::string part;
        auto num = [&](const std::string &s) {
            std::size_t used = 0;
            std::uint64_t v = 0;
            try
            {
                v = std::stoull(s, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (s.empty() || used != s.size() || s.front() == '-')
                throw UsageError("malformed seed '" + s + "' in --seeds");
            return v;
        };
        while (std::getline(ss, part, ','))
        {
            if (part.empty())
                continue;
            if (const auto dots = part.find(".."); dots != std::string::npos)
            {
                const auto lo = num(part.substr(0, dots)), hi = num(part.substr(dots + 2));
                if (hi < lo || hi - lo > 100'000)
                    throw UsageError("bad seed range '" + part + "'");
                for (auto s = lo; s <= hi; ++s)
                    out.push_back(s);
            }
            else
            {
                out.push_back(num(part));
            }
        }
        if (out.empty())
            throw UsageError("seed list is empty");
        return out;
    }
}
