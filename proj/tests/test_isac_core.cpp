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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <isacsim/isac_metrics.hpp>

using namespace isacsim;

namespace
{
    cmat random_matrix(Rng &rng, Eigen::Index r, Eigen::Index c)
    {
        cmat m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                m(i, j) = complex_gaussian(rng);
        return m;
    }
}

TEST(Metrics, TotalPowerIsFrobeniusNormSquared)
{
    cmat w(2, 2);
    w << std::complex<double>(1, 1), 0.0, 2.0, std::complex<double>(0, -3);
    EXPECT_DOUBLE_EQ(total_power(PrecoderSet(w)), 2.0 + 4.0 + 9.0);
}

TEST(Metrics, BeampatternOfTwoMatchedBeams)
{
    const ArrayGeometry g{4, 4, 0.5};
    const cvec a1 = steering_vector(g, {0.3, -1.1}), a2 = steering_vector(g, {-1.7, -0.6});
    cmat w(16, 2);
    w.col(0) = a1;
    w.col(1) = a2;
    const PrecoderSet set(w);
    const double cross = std::norm(a1.dot(a2));
    EXPECT_NEAR(beampattern_gain(set, a1), 256.0 + cross, 1e-9);
    EXPECT_NEAR(beampattern_gain(set, a2), 256.0 + cross, 1e-9);
    // Equivalent covariance form a^H R a.
    const cmat r = transmit_covariance(set);
    EXPECT_NEAR((a1.adjoint() * r * a1)(0, 0).real(), beampattern_gain(set, a1), 1e-9);
}

TEST(Metrics, MatchedFilterPeakIsPowerTimesN)
{
    const ArrayGeometry g{8, 8, 0.5};
    const cvec a = steering_vector(g, {0.0, -std::numbers::pi / 2});
    const double p = 158.489;
    const PrecoderSet w(cmat(a * std::sqrt(p / 64.0)));
    EXPECT_NEAR(beampattern_gain(w, a), p * 64.0, 1e-9);
}

TEST(Metrics, MisoSinrHandExample)
{
    ChannelRealization h{cmat(1, 2)};
    h.matrix << 1.0, 0.5;
    cmat w = cmat::Identity(2, 2);
    const PrecoderSet set(w);
    EXPECT_NEAR(sinr_miso(h, set, 0, 0.25), 1.0 / (0.25 + 0.25), 1e-15);
    EXPECT_NEAR(sinr_miso(h, set, 1, 0.25), 0.25 / (1.0 + 0.25), 1e-15);
    EXPECT_THROW(sinr_miso(h, set, 0, 0.0), std::invalid_argument);
    EXPECT_THROW(sinr_miso(h, set, 2, 1.0), std::invalid_argument);
}

TEST(Metrics, MmseBeatsEveryRandomCombiner)
{
    Rng rng = make_stream({11});
    for (int trial = 0; trial < 5; ++trial)
    {
        const cmat g = random_matrix(rng, 3, 4);
        const double noise = 0.3;
        const double best = sinr_with_decoder(DecoderKind::mmse, g, 1, noise);
        for (int i = 0; i < 1000; ++i)
            EXPECT_LE(sinr_from_effective(g, random_matrix(rng, 3, 1), 1, noise), best * (1 + 1e-12));
    }
}

TEST(Metrics, ZeroForcingNullsInterferenceWhenUsersFit)
{
    Rng rng = make_stream({12});
    const cmat g = random_matrix(rng, 3, 2);
    for (Eigen::Index k = 0; k < 2; ++k)
    {
        const cvec v = decoder_from_effective(DecoderKind::zf, g, k, 1.0);
        const Eigen::RowVectorXcd proj = v.adjoint() * g;
        EXPECT_NEAR(std::abs(proj(k) - 1.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(proj(1 - k)), 0.0, 1e-12);
    }
}

TEST(Metrics, ZeroForcingWithMoreStreamsIsNoiselessMmse)
{
    Rng rng = make_stream({13});
    const cmat g = random_matrix(rng, 2, 4);
    const cvec zf = decoder_from_effective(DecoderKind::zf, g, 2, 1.0);
    const cvec mmse = decoder_from_effective(DecoderKind::mmse, g, 2, 1e-13);
    const double cosine = std::abs(zf.dot(mmse)) / (zf.norm() * mmse.norm());
    EXPECT_NEAR(cosine, 1.0, 1e-9);
}

TEST(Metrics, ZeroForcingRankDeficientThrows)
{
    cmat g(2, 2);
    g << 1.0, 2.0, 2.0, 4.0;
    EXPECT_THROW(decoder_from_effective(DecoderKind::zf, g, 0, 1.0), SingularDecoder);
    EXPECT_NO_THROW(decoder_from_effective(DecoderKind::mmse, g, 0, 1.0));
}

TEST(Metrics, DecoderOrderingOnRandomInstances)
{
    Rng rng = make_stream({14});
    for (int i = 0; i < 1000; ++i)
    {
        const cmat g = random_matrix(rng, 2, 3);
        const double mmse = sinr_with_decoder(DecoderKind::mmse, g, 0, 0.05);
        for (auto k : {DecoderKind::zf, DecoderKind::mrc, DecoderKind::single_antenna})
            ASSERT_LE(sinr_with_decoder(k, g, 0, 0.05), mmse * (1 + 1e-9));
    }
}

TEST(Metrics, SingleAntennaUsesFirstRowOnly)
{
    Rng rng = make_stream({15});
    const cmat g = random_matrix(rng, 3, 2);
    ChannelRealization row{cmat(g.row(0))};
    const PrecoderSet eye(cmat::Identity(2, 2));
    EXPECT_NEAR(sinr_with_decoder(DecoderKind::single_antenna, g, 1, 0.2), sinr_miso(row, eye, 1, 0.2), 1e-12);
}

TEST(Metrics, MimoSinrMatchesEffectiveForm)
{
    Rng rng = make_stream({16});
    ChannelRealization h{random_matrix(rng, 2, 4)};
    const PrecoderSet w(random_matrix(rng, 4, 3));
    const cvec v = compute_decoder(DecoderKind::mmse, h, w, 2, 0.1);
    EXPECT_NEAR(sinr_mimo(h, w, v, 2, 0.1), sinr_with_decoder(DecoderKind::mmse, h.matrix * w.matrix(), 2, 0.1), 1e-12);
    EXPECT_THROW(sinr_from_effective(h.matrix * w.matrix(), cvec::Zero(2), 0, 0.1), std::invalid_argument);
}

TEST(Metrics, DecoderNamesRoundTrip)
{
    for (auto k : {DecoderKind::zf, DecoderKind::mmse, DecoderKind::mrc, DecoderKind::single_antenna})
        EXPECT_EQ(parse_decoder(to_string(k)), k);
    EXPECT_FALSE(parse_decoder("bogus"));
}

TEST(Metrics, RateIsLogTwoOnePlusSinr)
{
    EXPECT_DOUBLE_EQ(achievable_rate(0.0), 0.0);
    EXPECT_DOUBLE_EQ(achievable_rate(3.0), 2.0);
}

TEST(Echo, CompositionOfHops)
{
    const Position uav{0, 0, 40}, haps{0, 0, 20000};
    const std::vector<SensingTarget> targets{{{300, 0, 0}, 2.0}, {{0, -500, 0}, 1.0}};
    const ArrayGeometry arr{4, 4, 0.5};
    const EchoModel echo(targets, uav, arr, haps, 400, 3.5e9, 120e9);

    const double c0 = fspl_gain(distance(uav, targets[0].position), 3.5e9) * 2.0 *
                      fspl_gain(distance(targets[0].position, haps), 120e9) * 400.0;
    EXPECT_NEAR(echo.coefficients()(0) / c0, 1.0, 1e-12);

    Rng rng = make_stream({17});
    const PrecoderSet w(random_matrix(rng, 16, 2));
    double want = 0.0;
    for (std::size_t j = 0; j < targets.size(); ++j)
        want += echo.coefficients()(static_cast<Eigen::Index>(j)) *
                beampattern_gain(w, steering_vector(arr, direction_between(uav, targets[j].position)));
    EXPECT_NEAR(echo.power(w) / want, 1.0, 1e-12);
    EXPECT_NEAR(sensing_echo_power(w, targets, uav, arr, haps, 400, 3.5e9, 120e9) / want, 1.0, 1e-12);
}

TEST(Echo, TargetAtHapsIsDegenerate)
{
    const Position haps{0, 0, 20000};
    const std::vector<SensingTarget> targets{{haps, 1.0}};
    EXPECT_THROW(EchoModel(targets, {0, 0, 40}, {2, 2, 0.5}, haps, 4, 3.5e9, 120e9), DegenerateGeometry);
    EXPECT_THROW(EchoModel({}, {0, 0, 40}, {2, 2, 0.5}, haps, 4, 3.5e9, 120e9), std::invalid_argument);
}
