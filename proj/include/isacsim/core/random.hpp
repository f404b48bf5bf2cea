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

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace isacsim
{
    using Rng = std::mt19937_64;

    // SplitMix64 finalizer, used to derive independent stream seeds.
    constexpr std::uint64_t mix64(std::uint64_t z) noexcept
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Folds a list of coordinates (seed, generation, slot, ...) into one stream seed.
    constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept
    {
        std::uint64_t h = 0x2545f4914f6cdd1dULL;
        for (auto p : parts)
            h = mix64(h ^ mix64(p));
        return h;
    }

    inline Rng make_stream(std::initializer_list<std::uint64_t> parts)
    {
        return Rng(derive_seed(parts));
    }

    // Stream tags, so that different consumers of one master seed never share draws.
    enum class StreamTag : std::uint64_t
    {
        layout = 0x4c41594fULL,
        channel = 0x4348414eULL,
        evolver = 0x45564f4cULL,
        probe = 0x50524f42ULL,
    };

    constexpr std::uint64_t tag(StreamTag t) noexcept { return static_cast<std::uint64_t>(t); }

    // Circularly-symmetric complex Gaussian, zero mean, unit variance.
    inline std::complex<double> complex_gaussian(Rng &rng)
    {
        std::normal_distribution<double> n(0.0, 0.70710678118654752440);
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }
}
