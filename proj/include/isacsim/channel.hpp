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
#include <limits>
#include <numbers>

#include "core/random.hpp"
#include "geometry.hpp"

namespace isacsim
{
    inline constexpr double speed_of_light = 299'792'458.0;

    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    struct LinkBudget
    {
        double carrier_freq = 2.545e9; // Hz
        double noise_power = 1e-13;    // W (-100 dBm)
        double bandwidth = 20e6;       // Hz

        friend bool operator==(const LinkBudget &, const LinkBudget &) = default;
    };

    inline void validate(const LinkBudget &l)
    {
        detail::require(l.carrier_freq > 0.0 && std::isfinite(l.carrier_freq), "carrier frequency must be positive");
        detail::require(l.noise_power > 0.0 && std::isfinite(l.noise_power), "noise power must be positive");
        detail::require(l.bandwidth > 0.0 && std::isfinite(l.bandwidth), "bandwidth must be positive");
    }

    struct RicianParams
    {
        double k_factor = 10.0;        // linear, +inf for pure line of sight
        double large_scale_gain = 1.0; // linear power gain
    };

    inline void validate(const RicianParams &r)
    {
        detail::require(r.k_factor >= 0.0, "Rician K-factor must be non-negative");
        detail::require(r.large_scale_gain > 0.0 && std::isfinite(r.large_scale_gain),
                        "large-scale gain must be positive and finite");
    }

    // Complex amplitude gains, rows = receive antennas, columns = transmit antennas.
    struct ChannelRealization
    {
        cmat matrix;

        Eigen::Index rx() const noexcept { return matrix.rows(); }
        Eigen::Index tx() const noexcept { return matrix.cols(); }
    };

    /// Free-space (Friis) power gain (c / (4*pi*d*f))^2.
    inline double fspl_gain(double distance_m, double freq_hz)
    {
        detail::require(distance_m > 0.0, "path-loss distance must be positive");
        detail::require(freq_hz > 0.0, "path-loss frequency must be positive");
        const double r = speed_of_light / (4.0 * std::numbers::pi * distance_m * freq_hz);
        return r * r;
    }

    /// One Rician draw H = sqrt(beta) * (sqrt(K/(K+1)) a_rx a_tx^H + sqrt(1/(K+1)) G),
    /// G with i.i.d. CN(0, 1) entries. Pass a length-1 vector {1} for a single-antenna end.
    /// The scattered part is always drawn so that the stream advances identically for every K.
    inline ChannelRealization rician_channel(Rng &rng, const RicianParams &params, const cvec &a_rx,
                                             const cvec &a_tx)
    {
        validate(params);
        detail::require_dims(a_rx.size() >= 1 && a_tx.size() >= 1, "steering vectors must be non-empty");

        double los = 1.0;
        double nlos = 0.0;
        if (std::isfinite(params.k_factor))
        {
            los = std::sqrt(params.k_factor / (params.k_factor + 1.0));
            nlos = std::sqrt(1.0 / (params.k_factor + 1.0));
        }

        cmat h = los * (a_rx * a_tx.adjoint());
        // Row-major draw order: row 0 is the same for any number of receive antennas.
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index c = 0; c < h.cols(); ++c)
                h(r, c) += nlos * complex_gaussian(rng);
        h *= std::sqrt(params.large_scale_gain);
        return {std::move(h)};
    }

    inline cvec single_antenna()
    {
        return cvec::Ones(1);
    }
}
