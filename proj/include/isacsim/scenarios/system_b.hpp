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
#include <cstdint>
#include <span>
#include <vector>

#include "../evolver/types.hpp"
#include "codec.hpp"
#include "config.hpp"

namespace isacsim::scenarios
{
    /// Frozen physics of one System B draw: ground layout, one Rician channel per
    /// user (M x N, row 0 is the single-antenna channel) and target steering vectors.
    class SystemBInstance
    {
    public:
        SystemBInstance(const SystemBScenario &scn, std::uint64_t seed) : scn_(scn)
        {
            validate(scn);
            layout_ = resolve_layout(scn, seed);
            const auto n = static_cast<Eigen::Index>(scn.array.elements());
            const ArrayGeometry user_array{scn.user_antennas, 1, 0.5};

            Rng rng = make_stream({seed, tag(StreamTag::channel)});
            single_.resize(static_cast<Eigen::Index>(scn.users), n);
            for (std::size_t k = 0; k < scn.users; ++k)
            {
                const auto &u = layout_.users[k];
                const RicianParams params{scn.k_factor, fspl_gain(distance(scn.haps, u), scn.link.carrier_freq)};
                const cvec a_tx = steering_vector(scn.array, direction_between(scn.haps, u));
                const cvec a_rx = steering_vector(user_array, direction_between(u, scn.haps));
                channels_.push_back(rician_channel(rng, params, a_rx, a_tx).matrix);
                single_.row(static_cast<Eigen::Index>(k)) = channels_.back().row(0);
            }

            steering_.resize(n, static_cast<Eigen::Index>(scn.targets));
            for (std::size_t j = 0; j < scn.targets; ++j)
                steering_.col(static_cast<Eigen::Index>(j)) =
                    steering_vector(scn.array, direction_between(scn.haps, layout_.targets[j].position));
        }

        const SystemBScenario &scenario() const noexcept { return scn_; }
        const Layout &layout() const noexcept { return layout_; }
        const std::vector<cmat> &channels() const noexcept { return channels_; }
        const cmat &single_antenna_channels() const noexcept { return single_; }
        const cmat &target_steering() const noexcept { return steering_; }
        std::size_t beams() const noexcept { return std::max<std::size_t>(scn_.users, 1); }
        double noise() const noexcept { return scn_.link.noise_power; }

        GenomeCodec codec() const
        {
            return GenomeCodec(scn_.array.elements(), beams(), scn_.p_max, scn_.power_mode);
        }

        Eigen::VectorXd target_gains(const PrecoderSet &w) const { return beampattern_gains(w, steering_); }

        // Single-antenna SINRs of all users.
        std::vector<double> sinr_single(const PrecoderSet &w) const
        {
            std::vector<double> out(scn_.users);
            if (scn_.users == 0)
                return out;
            const Eigen::MatrixXd p = (single_ * w.matrix()).cwiseAbs2();
            for (std::size_t k = 0; k < scn_.users; ++k)
            {
                const auto r = static_cast<Eigen::Index>(k);
                out[k] = p(r, r) / (p.row(r).sum() - p(r, r) + noise());
            }
            return out;
        }

        // Post-combining SINRs with M-antenna users and the given decoder; throws SingularDecoder.
        std::vector<double> sinr_multi(const PrecoderSet &w, DecoderKind decoder) const
        {
            if (decoder == DecoderKind::single_antenna)
                return sinr_single(w);
            std::vector<double> out(scn_.users);
            for (std::size_t k = 0; k < scn_.users; ++k)
            {
                const cmat g = channels_[k] * w.matrix();
                out[k] = sinr_with_decoder(decoder, g, static_cast<Eigen::Index>(k), noise());
            }
            return out;
        }

        LinkMetrics metrics(const PrecoderSet &w, DecoderKind decoder = DecoderKind::single_antenna) const
        {
            LinkMetrics m;
            m.sinr_per_user = sinr_multi(w, decoder);
            for (double s : m.sinr_per_user)
                m.rate_per_user.push_back(achievable_rate(s));
            m.min_sinr = min_of(m.sinr_per_user);
            const Eigen::VectorXd g = target_gains(w);
            m.beampattern_gain_per_target.assign(g.data(), g.data() + g.size());
            m.min_beampattern_gain = min_of(m.beampattern_gain_per_target);
            return m;
        }

    private:
        SystemBScenario scn_;
        Layout layout_;
        std::vector<cmat> channels_;
        cmat single_;
        cmat steering_;
    };

    /// Max-min beampattern gain toward the targets subject to SINR_k >= floor for
    /// every single-antenna user; the power budget is enforced by the codec repair.
    /// violation = sum_k max(0, floor - SINR_k) / floor.
    class SystemBProblem
    {
    public:
        explicit SystemBProblem(SystemBInstance instance)
            : instance_(std::move(instance)), codec_(instance_.codec()), floor_(instance_.scenario().sinr_floor)
        {
        }

        SystemBProblem(const SystemBScenario &scn, std::uint64_t seed) : SystemBProblem(SystemBInstance(scn, seed)) {}

        const SystemBInstance &instance() const noexcept { return instance_; }
        const GenomeCodec &codec() const noexcept { return codec_; }
        double sinr_floor() const noexcept { return floor_; }

        std::size_t dimension() const { return codec_.dimension(); }
        std::size_t objective_count() const { return 1; }
        std::vector<double> lower_bounds() const { return codec_.lower_bounds(); }
        std::vector<double> upper_bounds() const { return codec_.upper_bounds(); }
        void repair(std::span<double> x) const { codec_.repair(x); }

        evolver::Evaluation evaluate(std::span<const double> x) const
        {
            const PrecoderSet w = codec_.decode(x);
            evolver::Evaluation e;
            e.objectives = {instance_.target_gains(w).minCoeff()};
            e.violation = violation(instance_.sinr_single(w));
            return e;
        }

        double violation(std::span<const double> sinr) const
        {
            if (!(floor_ > 0.0))
                return 0.0;
            double v = 0.0;
            for (double s : sinr)
                v += std::max(0.0, floor_ - s) / floor_;
            return v;
        }

        LinkMetrics metrics(std::span<const double> x) const { return instance_.metrics(codec_.decode(x)); }

    private:
        SystemBInstance instance_;
        GenomeCodec codec_;
        double floor_;
    };

    /// Dual form used for the threshold study: max-min user SINR subject to
    /// min_j beampattern gain >= gamma. violation = max(0, gamma - min gain) / gamma.
    class SystemBDualProblem
    {
    public:
        SystemBDualProblem(SystemBInstance instance, double gamma, DecoderKind decoder)
            : instance_(std::move(instance)), codec_(instance_.codec()), gamma_(gamma), decoder_(decoder)
        {
            detail::require(gamma >= 0.0, "beampattern threshold must be non-negative");
            detail::require(instance_.scenario().users >= 1, "threshold study needs at least one user");
        }

        const SystemBInstance &instance() const noexcept { return instance_; }
        const GenomeCodec &codec() const noexcept { return codec_; }
        double gamma() const noexcept { return gamma_; }
        DecoderKind decoder() const noexcept { return decoder_; }

        std::size_t dimension() const { return codec_.dimension(); }
        std::size_t objective_count() const { return 1; }
        std::vector<double> lower_bounds() const { return codec_.lower_bounds(); }
        std::vector<double> upper_bounds() const { return codec_.upper_bounds(); }
        void repair(std::span<double> x) const { codec_.repair(x); }

        evolver::Evaluation evaluate(std::span<const double> x) const
        {
            const PrecoderSet w = codec_.decode(x);
            const double gain = instance_.target_gains(w).minCoeff();
            const double gap = gamma_ > 0.0 ? std::max(0.0, gamma_ - gain) / gamma_ : 0.0;
            try
            {
                const auto sinr = instance_.sinr_multi(w, decoder_);
                return {{min_of(sinr)}, gap};
            }
            catch (const SingularDecoder &)
            {
                return {{0.0}, gap + 1.0};
            }
        }

        LinkMetrics metrics(std::span<const double> x) const { return instance_.metrics(codec_.decode(x), decoder_); }

    private:
        SystemBInstance instance_;
        GenomeCodec codec_;
        double gamma_;
        DecoderKind decoder_;
    };
}
