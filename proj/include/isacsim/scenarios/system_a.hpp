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
#include <optional>
#include <span>
#include <vector>

#include "../evolver/types.hpp"
#include "codec.hpp"
#include "config.hpp"

namespace isacsim::scenarios
{
    /// Frozen physics of one System A draw: a UAV UPA serving M-antenna users over
    /// Rician access channels, plus the UAV -> target -> HAPS echo model.
    class SystemAInstance
    {
    public:
        SystemAInstance(const SystemAScenario &scn, std::uint64_t seed)
            : scn_(checked(scn)), layout_(resolve_layout(scn, seed)),
              echo_(layout_.targets, scn.uav, scn.uav_array, scn.haps, scn.haps_array.elements(),
                    scn.access.carrier_freq, scn.backhaul_freq)
        {
            const ArrayGeometry user_array{scn.user_antennas, 1, 0.5};
            Rng rng = make_stream({seed, tag(StreamTag::channel)});
            for (const auto &u : layout_.users)
            {
                const RicianParams params{scn.k_factor, fspl_gain(distance(scn.uav, u), scn.access.carrier_freq)};
                const cvec a_tx = steering_vector(scn.uav_array, direction_between(scn.uav, u));
                const cvec a_rx = steering_vector(user_array, direction_between(u, scn.uav));
                channels_.push_back(rician_channel(rng, params, a_rx, a_tx).matrix);
            }
        }

        const SystemAScenario &scenario() const noexcept { return scn_; }
        const Layout &layout() const noexcept { return layout_; }
        const std::vector<cmat> &channels() const noexcept { return channels_; }
        const EchoModel &echo() const noexcept { return echo_; }
        double noise() const noexcept { return scn_.access.noise_power; }

        GenomeCodec codec() const
        {
            return GenomeCodec(scn_.uav_array.elements(), scn_.users, scn_.uav_power, scn_.power_mode);
        }

        // Throws SingularDecoder when the zero-forcing decoder is undefined.
        std::vector<double> sinr(const PrecoderSet &w, DecoderKind decoder) const
        {
            std::vector<double> out(channels_.size());
            for (std::size_t k = 0; k < channels_.size(); ++k)
                out[k] = sinr_with_decoder(decoder, channels_[k] * w.matrix(), static_cast<Eigen::Index>(k), noise());
            return out;
        }

        LinkMetrics metrics(const PrecoderSet &w, DecoderKind decoder) const
        {
            LinkMetrics m;
            m.sinr_per_user = sinr(w, decoder);
            for (double s : m.sinr_per_user)
                m.rate_per_user.push_back(achievable_rate(s));
            m.min_sinr = min_of(m.sinr_per_user);
            const Eigen::VectorXd g = beampattern_gains(w, echo_.steering());
            m.beampattern_gain_per_target.assign(g.data(), g.data() + g.size());
            m.min_beampattern_gain = min_of(m.beampattern_gain_per_target);
            m.sensing_power = echo_.coefficients().dot(g);
            return m;
        }

        LinkMetrics metrics(const PrecoderSet &w) const { return metrics(w, scn_.decoder); }

    private:
        static const SystemAScenario &checked(const SystemAScenario &s)
        {
            validate(s);
            return s;
        }

        SystemAScenario scn_;
        Layout layout_;
        EchoModel echo_;
        std::vector<cmat> channels_;
    };

    // Shared plumbing of the System A problem family.
    class SystemAProblemBase
    {
    public:
        explicit SystemAProblemBase(SystemAInstance instance)
            : instance_(std::move(instance)), codec_(instance_.codec())
        {
        }

        const SystemAInstance &instance() const noexcept { return instance_; }
        const GenomeCodec &codec() const noexcept { return codec_; }

        std::size_t dimension() const { return codec_.dimension(); }
        std::vector<double> lower_bounds() const { return codec_.lower_bounds(); }
        std::vector<double> upper_bounds() const { return codec_.upper_bounds(); }
        void repair(std::span<double> x) const { codec_.repair(x); }

        // Metrics of a genome; nullopt when the decoder is singular (infeasible genome).
        std::optional<LinkMetrics> metrics(std::span<const double> x) const
        {
            try
            {
                return instance_.metrics(codec_.decode(x));
            }
            catch (const SingularDecoder &)
            {
                return std::nullopt;
            }
        }

    protected:
        SystemAInstance instance_;
        GenomeCodec codec_;
    };

    /// Two objectives (eta, omega): worst-user SINR and echo power at the HAPS.
    class SystemAProblem : public SystemAProblemBase
    {
    public:
        using SystemAProblemBase::SystemAProblemBase;
        SystemAProblem(const SystemAScenario &scn, std::uint64_t seed) : SystemAProblemBase(SystemAInstance(scn, seed)) {}

        std::size_t objective_count() const { return 2; }

        evolver::Evaluation evaluate(std::span<const double> x) const
        {
            const auto m = metrics(x);
            if (!m)
                return {{0.0, 0.0}, 1.0};
            return {{m->min_sinr, m->sensing_power}, 0.0};
        }
    };

    /// (1 - mu) * eta / eta_ref + mu * omega / omega_ref. With unit references and
    /// mu = 0 (mu = 1) this is the pure max-min SINR (echo power) problem.
    class ScalarizedSystemA : public SystemAProblemBase
    {
    public:
        ScalarizedSystemA(SystemAInstance instance, double mu, double eta_ref = 1.0, double omega_ref = 1.0)
            : SystemAProblemBase(std::move(instance)), mu_(mu), eta_ref_(eta_ref), omega_ref_(omega_ref)
        {
            detail::require(mu >= 0.0 && mu <= 1.0, "mu must lie in [0, 1]");
            detail::require(eta_ref > 0.0 && omega_ref > 0.0, "normalization references must be positive");
        }

        double mu() const noexcept { return mu_; }
        std::size_t objective_count() const { return 1; }

        double scalarize(double eta, double omega) const
        {
            return (1.0 - mu_) * eta / eta_ref_ + mu_ * omega / omega_ref_;
        }

        evolver::Evaluation evaluate(std::span<const double> x) const
        {
            const auto m = metrics(x);
            if (!m)
                return {{0.0}, 1.0};
            return {{scalarize(m->min_sinr, m->sensing_power)}, 0.0};
        }

    private:
        double mu_;
        double eta_ref_;
        double omega_ref_;
    };

    /// Baseline: unit-weight sum of user rates on the same codec and metric path.
    class SumRateProblem : public SystemAProblemBase
    {
    public:
        using SystemAProblemBase::SystemAProblemBase;

        std::size_t objective_count() const { return 1; }

        evolver::Evaluation evaluate(std::span<const double> x) const
        {
            const auto m = metrics(x);
            if (!m)
                return {{0.0}, 1.0};
            double sum = 0.0;
            for (double r : m->rate_per_user)
                sum += r;
            return {{sum}, 0.0};
        }
    };
}
