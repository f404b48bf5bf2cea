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

#include <cmath>
#include <span>
#include <vector>

#include "../isac_metrics.hpp"
#include "config.hpp"

namespace isacsim::scenarios
{
    /// Maps a real genome of length 2 * antennas * beams to a PrecoderSet.
    /// Layout is beam-major with interleaved (re, im) pairs:
    /// x[2 * (k * antennas + n)] = Re w_k[n], x[2 * (k * antennas + n) + 1] = Im w_k[n].
    class GenomeCodec
    {
    public:
        GenomeCodec(std::size_t antennas, std::size_t beams, double p_max, PowerMode mode)
            : antennas_(antennas), beams_(beams), p_max_(p_max), mode_(mode)
        {
            detail::require(antennas >= 1 && beams >= 1, "codec needs at least one antenna and one beam");
            detail::require(p_max > 0.0, "codec power budget must be positive");
        }

        std::size_t dimension() const noexcept { return 2 * antennas_ * beams_; }
        std::size_t antennas() const noexcept { return antennas_; }
        std::size_t beams() const noexcept { return beams_; }
        double p_max() const noexcept { return p_max_; }
        PowerMode mode() const noexcept { return mode_; }

        // Every coordinate of a vector inside the power ball lies in [-sqrt(p_max), sqrt(p_max)].
        std::vector<double> lower_bounds() const { return std::vector<double>(dimension(), -std::sqrt(p_max_)); }
        std::vector<double> upper_bounds() const { return std::vector<double>(dimension(), std::sqrt(p_max_)); }

        PrecoderSet decode(std::span<const double> x) const
        {
            detail::require_dims(x.size() == dimension(), "genome length does not match codec");
            cmat w(static_cast<Eigen::Index>(antennas_), static_cast<Eigen::Index>(beams_));
            for (std::size_t k = 0; k < beams_; ++k)
                for (std::size_t n = 0; n < antennas_; ++n)
                {
                    const std::size_t i = 2 * (k * antennas_ + n);
                    w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = {x[i], x[i + 1]};
                }
            return PrecoderSet(std::move(w));
        }

        std::vector<double> encode(const PrecoderSet &w) const
        {
            detail::require_dims(static_cast<std::size_t>(w.antennas()) == antennas_ &&
                                     static_cast<std::size_t>(w.beams()) == beams_,
                                 "precoder set does not match codec");
            std::vector<double> x(dimension());
            for (std::size_t k = 0; k < beams_; ++k)
                for (std::size_t n = 0; n < antennas_; ++n)
                {
                    const auto v = w.matrix()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
                    const std::size_t i = 2 * (k * antennas_ + n);
                    x[i] = v.real();
                    x[i + 1] = v.imag();
                }
            return x;
        }

        /// Rescales the genome per the power mode. The genome's squared norm is the
        /// total transmit power of the decoded set.
        void repair(std::span<double> x) const
        {
            double power = 0.0;
            for (double v : x)
                power += v * v;
            if (!(power > 0.0))
                return;
            if (mode_ == PowerMode::repair && power <= p_max_)
                return;
            const double s = std::sqrt(p_max_ / power);
            for (auto &v : x)
                v *= s;
        }

    private:
        std::size_t antennas_;
        std::size_t beams_;
        double p_max_;
        PowerMode mode_;
    };
}
