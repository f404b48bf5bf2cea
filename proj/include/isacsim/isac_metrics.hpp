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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"

namespace isacsim
{
    // Transmit beams as the columns of an N_tx x K matrix, amplitudes in sqrt(W).
    class PrecoderSet
    {
    public:
        PrecoderSet() = default;
        PrecoderSet(Eigen::Index antennas, Eigen::Index beams) : w_(cmat::Zero(antennas, beams)) {}
        explicit PrecoderSet(cmat w) : w_(std::move(w)) {}

        Eigen::Index antennas() const noexcept { return w_.rows(); }
        Eigen::Index beams() const noexcept { return w_.cols(); }

        auto beam(Eigen::Index k) { return w_.col(k); }
        auto beam(Eigen::Index k) const { return w_.col(k); }

        const cmat &matrix() const noexcept { return w_; }
        cmat &matrix() noexcept { return w_; }

    private:
        cmat w_;
    };

    inline double total_power(const PrecoderSet &w) { return w.matrix().squaredNorm(); }

    // R = sum_k w_k w_k^H
    inline cmat transmit_covariance(const PrecoderSet &w) { return w.matrix() * w.matrix().adjoint(); }

    struct SensingTarget
    {
        Position position;
        double rcs = 1.0; // m^2
    };

    inline void validate(const SensingTarget &t)
    {
        validate(t.position);
        detail::require(t.rcs > 0.0 && std::isfinite(t.rcs), "target radar cross-section must be positive");
    }

    enum class DecoderKind
    {
        zf,
        mmse,
        mrc,
        single_antenna,
    };

    inline std::string_view to_string(DecoderKind k)
    {
        switch (k)
        {
        case DecoderKind::zf: return "zf";
        case DecoderKind::mmse: return "mmse";
        case DecoderKind::mrc: return "mrc";
        case DecoderKind::single_antenna: return "single";
        }
        return "?";
    }

    inline std::optional<DecoderKind> parse_decoder(std::string_view s)
    {
        if (s == "zf" || s == "ZF") return DecoderKind::zf;
        if (s == "mmse" || s == "MMSE") return DecoderKind::mmse;
        if (s == "mrc" || s == "MRC") return DecoderKind::mrc;
        if (s == "single" || s == "single_antenna" || s == "SingleAntenna") return DecoderKind::single_antenna;
        return std::nullopt;
    }

    struct LinkMetrics
    {
        std::vector<double> sinr_per_user;
        std::vector<double> rate_per_user;
        double min_sinr = 0.0;
        std::vector<double> beampattern_gain_per_target;
        double min_beampattern_gain = 0.0;
        double sensing_power = 0.0;
    };

    inline double min_of(std::span<const double> v)
    {
        return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
    }

    inline double achievable_rate(double sinr) { return std::log2(1.0 + sinr); }

    /// Sum over beams of |a^H w_k|^2, i.e. a^H R a.
    inline double beampattern_gain(const PrecoderSet &w, const cvec &a)
    {
        detail::require_dims(a.size() == w.antennas(), "steering vector length does not match precoder length");
        return (a.adjoint() * w.matrix()).squaredNorm();
    }

    // Gains toward every column of `steering` (N x J) in one pass.
    inline Eigen::VectorXd beampattern_gains(const PrecoderSet &w, const cmat &steering)
    {
        detail::require_dims(steering.rows() == w.antennas(), "steering matrix rows do not match precoder length");
        return (steering.adjoint() * w.matrix()).cwiseAbs2().rowwise().sum();
    }

    namespace detail
    {
        inline void require_noise(double noise_power)
        {
            require(noise_power > 0.0 && std::isfinite(noise_power), "noise power must be positive");
        }
    }

    /// Downlink SINR of user k with a single receive antenna: |h w_k|^2 / (sum_{i!=k} |h w_i|^2 + noise).
    inline double sinr_miso(const ChannelRealization &h, const PrecoderSet &w, Eigen::Index k, double noise_power)
    {
        detail::require_noise(noise_power);
        detail::require_dims(h.rx() == 1 && h.tx() == w.antennas(), "MISO channel must be 1 x N_tx");
        detail::require(k >= 0 && k < w.beams(), "user index out of range");
        const Eigen::RowVectorXd p = (h.matrix * w.matrix()).cwiseAbs2();
        return p(k) / (p.sum() - p(k) + noise_power);
    }

    /// Receive combiner for stream k from the effective channels G = H_k W (M x K).
    inline cvec decoder_from_effective(DecoderKind kind, const cmat &g, Eigen::Index k, double noise_power)
    {
        const Eigen::Index m = g.rows();
        switch (kind)
        {
        case DecoderKind::mrc:
            return g.col(k);
        case DecoderKind::single_antenna:
        {
            cvec v = cvec::Zero(m);
            v(0) = 1.0;
            return v;
        }
        case DecoderKind::mmse:
        {
            detail::require_noise(noise_power);
            cmat c = g * g.adjoint();
            c.diagonal().array() += noise_power;
            return c.ldlt().solve(g.col(k));
        }
        case DecoderKind::zf:
        {
            // Row k of the Moore-Penrose pseudo-inverse of G, conjugated, scaled to v^H g_k = 1.
            Eigen::JacobiSVD<cmat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto &s = svd.singularValues();
            const Eigen::Index full = std::min(g.rows(), g.cols());
            const double tol = 1e-10 * (s.size() ? s(0) : 0.0);
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < s.size(); ++i)
                if (s(i) > tol && s(i) > 0.0)
                    ++rank;
            if (rank < full)
                throw SingularDecoder("zero-forcing decoder: effective channel is rank deficient");

            const cmat pinv = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
            cvec v = pinv.row(k).adjoint();
            const std::complex<double> own = v.dot(g.col(k));
            if (std::abs(own) <= 1e-300)
                throw SingularDecoder("zero-forcing decoder: no gain toward own stream");
            v /= std::conj(own);
            return v;
        }
        }
        return g.col(k);
    }

    inline double sinr_from_effective(const cmat &g, const cvec &v, Eigen::Index k, double noise_power)
    {
        detail::require_noise(noise_power);
        const double vv = v.squaredNorm();
        if (!(vv > 0.0))
            throw std::invalid_argument("receive combiner must be non-zero");
        const Eigen::RowVectorXd p = (v.adjoint() * g).cwiseAbs2();
        return p(k) / (p.sum() - p(k) + noise_power * vv);
    }

    inline cvec compute_decoder(DecoderKind kind, const ChannelRealization &h, const PrecoderSet &w,
                                Eigen::Index k, double noise_power)
    {
        detail::require_dims(h.tx() == w.antennas(), "channel columns do not match precoder length");
        detail::require(k >= 0 && k < w.beams(), "user index out of range");
        return decoder_from_effective(kind, h.matrix * w.matrix(), k, noise_power);
    }

    /// Post-combining SINR |v^H g_k|^2 / (sum_{i!=k} |v^H g_i|^2 + noise ||v||^2), g_i = H w_i.
    inline double sinr_mimo(const ChannelRealization &h, const PrecoderSet &w, const cvec &v, Eigen::Index k,
                            double noise_power)
    {
        detail::require_dims(h.tx() == w.antennas() && v.size() == h.rx(), "decoder/channel/precoder size mismatch");
        detail::require(k >= 0 && k < w.beams(), "user index out of range");
        return sinr_from_effective(h.matrix * w.matrix(), v, k, noise_power);
    }

    // Convenience: SINR of user k with the decoder of the given kind.
    inline double sinr_with_decoder(DecoderKind kind, const cmat &g, Eigen::Index k, double noise_power)
    {
        // No own signal: MRC and MMSE combiners vanish, the SINR is simply zero.
        if ((kind == DecoderKind::mrc || kind == DecoderKind::mmse) && k >= 0 && k < g.cols() &&
            !(g.col(k).squaredNorm() > 0.0))
        {
            detail::require_noise(noise_power);
            return 0.0;
        }
        return sinr_from_effective(g, decoder_from_effective(kind, g, k, noise_power), k, noise_power);
    }

    /// Bistatic one-bounce echo model: UAV transmits, targets reflect, the HAPS array collects.
    /// Per target the power is beta(uav->target) * G_tx * rcs * beta(target->haps) * N_haps.
    class EchoModel
    {
    public:
        EchoModel(std::span<const SensingTarget> targets, const Position &uav, const ArrayGeometry &uav_array,
                  const Position &haps, std::size_t haps_elements, double access_freq_hz, double backhaul_freq_hz)
        {
            detail::require(!targets.empty(), "sensing echo needs at least one target");
            detail::require(haps_elements >= 1, "HAPS array must have at least one element");
            steering_.resize(static_cast<Eigen::Index>(uav_array.elements()), static_cast<Eigen::Index>(targets.size()));
            coefficient_.resize(static_cast<Eigen::Index>(targets.size()));
            for (std::size_t j = 0; j < targets.size(); ++j)
            {
                const auto &t = targets[j];
                validate(t);
                if (t.position == haps)
                    throw DegenerateGeometry("sensing target coincides with the HAPS");
                const auto col = static_cast<Eigen::Index>(j);
                steering_.col(col) = steering_vector(uav_array, direction_between(uav, t.position));
                coefficient_(col) = fspl_gain(distance(uav, t.position), access_freq_hz) * t.rcs *
                                    fspl_gain(distance(t.position, haps), backhaul_freq_hz) *
                                    static_cast<double>(haps_elements);
            }
        }

        const cmat &steering() const noexcept { return steering_; }
        const Eigen::VectorXd &coefficients() const noexcept { return coefficient_; }

        Eigen::VectorXd per_target(const PrecoderSet &w) const
        {
            return coefficient_.cwiseProduct(beampattern_gains(w, steering_));
        }

        double power(const PrecoderSet &w) const { return per_target(w).sum(); }

    private:
        cmat steering_;
        Eigen::VectorXd coefficient_;
    };

    inline double sensing_echo_power(const PrecoderSet &w, std::span<const SensingTarget> targets,
                                     const Position &uav, const ArrayGeometry &uav_array, const Position &haps,
                                     std::size_t haps_elements, double access_freq_hz, double backhaul_freq_hz)
    {
        return EchoModel(targets, uav, uav_array, haps, haps_elements, access_freq_hz, backhaul_freq_hz).power(w);
    }
}
