// Copyright 2026 The hypercnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hypercnot/analysis.hpp"
#include "hypercnot/gates.hpp"
#include "hypercnot/oracle.hpp"

using namespace hypercnot;
using C = std::complex<double>;
using Spec = PhotonSpec<double>;

namespace {

GateConfig<double> practical(unsigned n = 1) {
    GateConfig<double> cfg;
    cfg.params = CavityParams<double>::resonant(3.0, 0.1, 0.1);
    cfg.n_targets = n;
    return cfg;
}

Spec basis(int pol, int mode) {
    return Spec::basis(pol ? Pol::L : Pol::R, mode ? Spatial::mode2 : Spatial::mode1);
}

HyperState basis_state(std::initializer_list<int> bits) {
    HyperState s(static_cast<std::size_t>(bits.size() / 2), 0);
    BasisLabel l;
    std::size_t i = 0;
    for (int b : bits)
        l = l.with(i++, b != 0);
    s.set_amplitude(l, 1);
    return s;
}

} // namespace

TEST(IdealOracle, MatchesHandEnumeration) {
    for (int cp = 0; cp < 2; ++cp)
        for (int cm = 0; cm < 2; ++cm)
            for (int tp = 0; tp < 2; ++tp)
                for (int tm = 0; tm < 2; ++tm) {
                    const auto out = ideal_hyper_cnot_n(basis(cp, cm), {basis(tp, tm)});
                    EXPECT_EQ(out, basis_state({cp, cm, tp ^ cp, tm ^ cm}));
                }
    // two targets both flip
    const auto two = ideal_hyper_cnot_n(basis(1, 0), {basis(0, 1), basis(1, 1)});
    EXPECT_EQ(two, basis_state({1, 0, 1, 1, 0, 1}));
}

TEST(HyperCnot, TruthTable) {
    for (int cp = 0; cp < 2; ++cp)
        for (int cm = 0; cm < 2; ++cm)
            for (int tp = 0; tp < 2; ++tp)
                for (int tm = 0; tm < 2; ++tm) {
                    const auto out = hyper_cnot(basis(cp, cm), basis(tp, tm), practical());
                    const auto expect = basis_state({cp, cm, tp ^ cp, tm ^ cm});
                    ASSERT_EQ(out.branches.size(), 4u);
                    for (const auto &b : out.branches)
                        EXPECT_NEAR(fidelity(b.state, expect), 1.0, 1e-12)
                            << cp << cm << tp << tm;
                }
}

TEST(HyperCnot, PolarizationAndSpatialActIndependently) {
    // Control L,mode1 flips only the target polarization.
    const auto out = hyper_cnot(basis(1, 0), Spec::uniform(), practical());
    const auto expect = ideal_hyper_cnot_n(basis(1, 0), {Spec::uniform()});
    for (const auto &b : out.branches)
        EXPECT_NEAR(fidelity(b.state, expect), 1.0, 1e-12);
    const auto s = basis_state({1, 0, 1, 1});
    EXPECT_NEAR(fidelity(hyper_cnot(basis(1, 0), basis(0, 1), practical()).conditional_state, s),
                1.0, 1e-12);
}

TEST(HyperCnot, SuccessProbabilityEqualsClosedForm) {
    const double T = std::abs(block_coeffs(practical().params).T);
    EXPECT_NEAR(hyper_cnot(Spec::uniform(), Spec::uniform(), practical()).success_prob,
                0.6513, 1e-4);
    for (unsigned n = 1; n <= 4; ++n) {
        const auto out = hyper_cnot_n(Spec::uniform(),
                                      std::vector<Spec>(n, Spec::uniform()), practical(n));
        EXPECT_NEAR(out.success_prob, std::pow(T, 4.0 * (n + 1)), 1e-12) << n;
        EXPECT_NEAR(out.success_prob, efficiency(C(T), n), 1e-12);
        EXPECT_NEAR(out.total_probability, 1.0, 1e-12);
        EXPECT_NEAR(out.success_prob + out.heralded_failure_prob() + out.absorbed_prob,
                    1.0, 1e-12);
    }
}

TEST(HyperCnot, SpinOutcomesAreEquiprobable) {
    std::mt19937_64 rng(12);
    const auto out = hyper_cnot(analysis::random_photon(rng), analysis::random_photon(rng),
                                practical());
    ASSERT_EQ(out.branches.size(), 4u);
    for (const auto &b : out.branches)
        EXPECT_NEAR(b.probability, out.success_prob / 4, 1e-12);
}

TEST(HyperCnot, FeedForwardMatchesSpinRecord) {
    const auto out = hyper_cnot(Spec::uniform(), Spec::uniform(), practical());
    for (const auto &b : out.branches)
        EXPECT_EQ(b.corrections, corrections_for(b.record));
    EXPECT_EQ(corrections_for({Spin::down, Spin::up}), (Corrections{true, false}));
    EXPECT_EQ(corrections_for({Spin::up, Spin::down}), (Corrections{false, true}));
}

TEST(HyperCnot, WithoutFeedForwardDownOutcomesCarryAPhaseError) {
    std::mt19937_64 rng(3);
    const auto c = analysis::random_photon(rng);
    const auto t = analysis::random_photon(rng);
    const auto out = hyper_cnot(c, t, practical());
    const auto ideal = ideal_hyper_cnot_n(c, {t});
    for (const auto &b : out.branches) {
        if (b.corrections == Corrections{})
            continue;
        const auto undone = feed_forward(b.state, b.corrections);
        EXPECT_LT(fidelity(undone, ideal), 1 - 1e-6);
    }
}

TEST(HyperCnotProperty, SelfCorrectionOverRandomCases) {
    std::mt19937_64 rng(2025);
    int cases = 0;
    while (cases < 200) {
        GateConfig<double> cfg;
        cfg.params = analysis::random_params(rng);
        if (std::abs(block_coeffs(cfg.params).T) <= 1e-3)
            continue;
        ++cases;
        const auto c = analysis::random_photon(rng);
        const auto t = analysis::random_photon(rng);
        const auto out = hyper_cnot(c, t, cfg);
        const auto ideal = ideal_hyper_cnot_n(c, {t});
        for (const auto &b : out.branches)
            ASSERT_NEAR(fidelity(b.state, ideal), 1.0, 1e-10) << "case " << cases;
        ASSERT_NEAR(out.total_probability, 1.0, 1e-12);
    }
}

TEST(HyperCnot, TwoTargetsMatchOracle) {
    std::mt19937_64 rng(31);
    const auto c = analysis::random_photon(rng);
    const std::vector<Spec> ts{analysis::random_photon(rng), analysis::random_photon(rng)};
    const auto out = hyper_cnot_n(c, ts, practical(2));
    const auto ideal = ideal_hyper_cnot_n(c, ts);
    for (const auto &b : out.branches)
        EXPECT_NEAR(fidelity(b.state, ideal), 1.0, 1e-10);
}

TEST(HyperCnot, SingleTargetWrapperAgreesWithGeneralGate) {
    std::mt19937_64 rng(4);
    const auto c = analysis::random_photon(rng);
    const auto t = analysis::random_photon(rng);
    const auto a = hyper_cnot(c, t, practical());
    const auto b = hyper_cnot_n(c, {t}, practical());
    EXPECT_EQ(a.conditional_state, b.conditional_state);
    EXPECT_EQ(a.success_prob, b.success_prob);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_THROW(hyper_cnot(c, t, practical(2)), ValidationError);
}

TEST(HyperCnot, MismatchedMirrorBreaksSelfCorrection) {
    auto cfg = practical();
    cfg.mirror_T_override = C(0.9);
    const auto out = hyper_cnot(Spec::uniform(), Spec::uniform(), cfg);
    const auto ideal = ideal_hyper_cnot_n(Spec::uniform(), {Spec::uniform()});
    double worst = 1;
    for (const auto &b : out.branches)
        worst = std::min(worst, fidelity(b.state, ideal));
    EXPECT_LT(worst, 1 - 1e-6);
    EXPECT_NEAR(out.total_probability, 1.0, 1e-12);

    cfg.mirror_T_override = C(1.5);
    EXPECT_THROW(hyper_cnot(Spec::uniform(), Spec::uniform(), cfg), ValidationError);
}

TEST(HyperCnot, Errors) {
    auto cfg = practical();
    cfg.params.g = 0;
    try {
        hyper_cnot(Spec::uniform(), Spec::uniform(), cfg);
        FAIL();
    } catch (const DegeneratePhysicsError &e) {
        EXPECT_NE(std::string(e.what()).find("all amplitude lost"), std::string::npos);
    }
    EXPECT_THROW(hyper_cnot_n(Spec::uniform(), {}, practical()), ValidationError);
    EXPECT_THROW(hyper_cnot_n(Spec::uniform(), {Spec::uniform()}, practical(0)),
                 ValidationError);
    Spec bad = Spec::uniform();
    bad.pol[0] = 2;
    EXPECT_THROW(hyper_cnot(bad, Spec::uniform(), practical()), ValidationError);
    auto neg = practical();
    neg.params.kappa_s = -1;
    EXPECT_THROW(hyper_cnot(Spec::uniform(), Spec::uniform(), neg), ValidationError);
}

TEST(HyperCnot, TraceIsDeterministic) {
    const auto a = hyper_cnot(Spec::uniform(), Spec::uniform(), practical());
    const auto b = hyper_cnot(Spec::uniform(), Spec::uniform(), practical());
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.trace.records().back().element, "measure");
    EXPECT_EQ(a.ledger.size(), 4u);
}

TEST(Sampling, SeededRunsAreReproducible) {
    auto cfg = practical();
    cfg.mode = GateMode::sampled;
    cfg.rng_seed = 42;
    const auto a = sample_run(Spec::uniform(), {Spec::uniform()}, cfg);
    const auto b = sample_run(Spec::uniform(), {Spec::uniform()}, cfg);
    EXPECT_EQ(a, b);
    EXPECT_EQ(sample_shots(Spec::uniform(), {Spec::uniform()}, cfg, 500),
              sample_shots(Spec::uniform(), {Spec::uniform()}, cfg, 500));
}

TEST(Sampling, RequiresSampledModeAndSeed) {
    auto cfg = practical();
    EXPECT_THROW(sample_run(Spec::uniform(), {Spec::uniform()}, cfg), ValidationError);
    cfg.mode = GateMode::sampled;
    EXPECT_THROW(sample_run(Spec::uniform(), {Spec::uniform()}, cfg), ValidationError);
}

TEST(Sampling, PerfectBlockNeverClicks) {
    GateConfig<double> cfg;
    cfg.params.g = 1e9; // |T| -> 1 with lossless cold cavity
    cfg.mode = GateMode::sampled;
    cfg.rng_seed = 7;
    const auto tally = sample_shots(Spec::uniform(), {Spec::uniform()}, cfg, 2000);
    EXPECT_EQ(tally.clicks_B1 + tally.clicks_B2, 0u);
    EXPECT_EQ(tally.successes + tally.lost, tally.shots);
    EXPECT_GE(tally.success_frequency(), 0.99);
}

TEST(Sampling, FrequenciesTrackAmplitudeMode) {
    auto cfg = practical();
    cfg.mode = GateMode::sampled;
    cfg.rng_seed = 2026;
    const std::uint64_t n = 20000;
    const auto tally = sample_shots(Spec::uniform(), {Spec::uniform()}, cfg, n);
    const auto out = hyper_cnot(Spec::uniform(), Spec::uniform(), cfg);
    auto within = [n](std::uint64_t k, double p) {
        const double sigma = std::sqrt(n * p * (1 - p));
        return std::abs(static_cast<double>(k) - n * p) <= 4 * sigma + 1;
    };
    EXPECT_TRUE(within(tally.successes, out.success_prob));
    EXPECT_TRUE(within(tally.clicks_B1, out.heralded[0]));
    EXPECT_TRUE(within(tally.clicks_B2, out.heralded[1]));
    EXPECT_TRUE(within(tally.lost, out.absorbed_prob));
    for (auto k : tally.spin_outcomes)
        EXPECT_TRUE(within(k, out.success_prob / 4));
}

TEST(Sampling, SuccessfulShotCarriesCorrectedState) {
    auto cfg = practical();
    cfg.mode = GateMode::sampled;
    const auto ideal = ideal_hyper_cnot_n(Spec::uniform(), {basis(0, 0)});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        cfg.rng_seed = seed;
        const auto rec = sample_run(Spec::uniform(), {basis(0, 0)}, cfg);
        if (rec.status != ShotStatus::success) {
            EXPECT_FALSE(rec.state.has_value());
            EXPECT_TRUE(rec.sink.has_value());
            continue;
        }
        ASSERT_TRUE(rec.state.has_value());
        EXPECT_NEAR(fidelity(*rec.state, ideal), 1.0, 1e-12);
        EXPECT_EQ(rec.corrections, corrections_for(*rec.spin_record));
    }
}
