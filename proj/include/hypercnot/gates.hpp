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

#pragma once

/**
 * @file
 * Self-error-corrected hyperparallel CNOT and CNOT^N protocols.
 *
 * The control photon (index 0) and then each target photon traverse the
 * polarization and spatial stages; targets are wrapped in polarization and
 * spatial Hadamards. The spins are rotated after the control photon and
 * after the last target, measured, and the outcome drives phase corrections
 * on the control photon.
 *
 * Amplitude mode evaluates every heralded branch in one pass. Sampled mode
 * draws single shots from the same evolution with a run-local RNG.
 */

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypercnot/circuit.hpp"
#include "hypercnot/hyperstate.hpp"
#include "hypercnot/scattering.hpp"

namespace hypercnot {

enum class GateMode { amplitude, sampled };

template <typename Real = double> struct GateConfig {
    CavityParams<Real> params;
    unsigned n_targets{1};
    /// Mirror transmission; defaults to the block T, which is what keeps
    /// every surviving branch weighted by the same overall factor.
    std::optional<std::complex<Real>> mirror_T_override;
    GateMode mode{GateMode::amplitude};
    std::optional<std::uint64_t> rng_seed;
};

struct SpinRecord {
    Spin spin1{Spin::up};
    Spin spin2{Spin::up};
    friend bool operator==(const SpinRecord &, const SpinRecord &) = default;
};

struct Corrections {
    bool pol_phase{false};     ///< |L>_a -> -|L>_a  (spin 1 down)
    bool spatial_phase{false}; ///< |a2> -> -|a2>    (spin 2 down)
    friend bool operator==(const Corrections &, const Corrections &) = default;
};

inline Corrections corrections_for(const SpinRecord &r) {
    return {r.spin1 == Spin::down, r.spin2 == Spin::down};
}

/// Probability deposited into each sink while one photon crossed one stage.
template <typename Real> struct StageEvent {
    std::size_t photon;
    std::string stage;
    Real coherent_before;
    std::array<Real, kNumSinks> deposited;
};

template <typename Real> struct CorrectedBranch {
    SpinRecord record;
    Corrections corrections;
    Real probability; ///< absolute weight of this spin outcome
    BasicHyperState<Real> state;
};

template <typename Real = double> struct GateOutcome {
    /// Normalized photon state of the first heralded spin outcome after
    /// feed-forward; all outcomes are listed in `branches`.
    BasicHyperState<Real> conditional_state{1, 0};
    Real success_prob{0};
    std::array<Real, 2> heralded{}; ///< detector B1, detector B2
    Real absorbed_prob{0};
    SpinRecord spin_record;
    Corrections corrections;
    ElementTrace trace;

    BlockCoeffs<Real> block;
    std::vector<CorrectedBranch<Real>> branches;
    std::vector<StageEvent<Real>> ledger;
    /// Norm bookkeeping just before the spin measurement.
    Real total_probability{0};

    Real heralded_failure_prob() const { return heralded[0] + heralded[1]; }
};

namespace detail {

template <typename Real>
BasicHyperState<Real>
run_stage(BasicHyperState<Real> s, std::size_t photon, bool spatial,
          const BlockCoeffs<Real> &bc, std::complex<Real> mirror,
          ElementTrace *trace, std::vector<StageEvent<Real>> *ledger) {
    const Real before = s.coherent_norm2();
    const auto sinks_before = s.sinks();
    s = spatial ? stage_spatial(s, photon, bc, std::optional{mirror}, trace)
                : stage_polarization(s, photon, bc, std::optional{mirror}, trace);
    if (ledger) {
        StageEvent<Real> ev{photon, spatial ? "spatial" : "polarization", before,
                            {}};
        for (std::size_t k = 0; k < kNumSinks; ++k)
            ev.deposited[k] = s.sinks()[k] - sinks_before[k];
        ledger->push_back(std::move(ev));
    }
    return s;
}

template <typename Real>
BasicHyperState<Real> both_spin_hadamards(BasicHyperState<Real> s,
                                          ElementTrace *trace) {
    s = apply_spin_hadamard(std::move(s), SpinId::qd1);
    s = apply_spin_hadamard(std::move(s), SpinId::qd2);
    if (trace) {
        trace->append("spin-H", 0, "QD1");
        trace->append("spin-H", 0, "QD2");
    }
    return s;
}

} // namespace detail

/// Control photon through both stages, followed by Hadamards on both spins.
/// On spins prepared in phi+ phi+ this leaves
///     T^2 (a1 R up1 + a2 L down1)(b1 m1 up2 + b2 m2 down2) (x) targets.
template <typename Real>
BasicHyperState<Real>
traverse_control(BasicHyperState<Real> s, const BlockCoeffs<Real> &bc,
                 std::complex<Real> mirror, ElementTrace *trace = nullptr,
                 std::vector<StageEvent<Real>> *ledger = nullptr) {
    s = detail::run_stage(std::move(s), 0, false, bc, mirror, trace, ledger);
    s = detail::run_stage(std::move(s), 0, true, bc, mirror, trace, ledger);
    return detail::both_spin_hadamards(std::move(s), trace);
}

/// One target photon through Hp/BS, both stages, and Hp/BS again. No spin
/// rotation: consecutive targets see the spins in the up/down basis.
template <typename Real>
BasicHyperState<Real>
traverse_target(BasicHyperState<Real> s, std::size_t photon,
                const BlockCoeffs<Real> &bc, std::complex<Real> mirror,
                ElementTrace *trace = nullptr,
                std::vector<StageEvent<Real>> *ledger = nullptr) {
    auto hadamards = [&](BasicHyperState<Real> st, const char *pol_name,
                         const char *bs_name) {
        st = apply_pol_hadamard(std::move(st), photon);
        st = apply_spatial_hadamard(std::move(st), photon);
        if (trace) {
            trace->append(pol_name, photon, "all");
            trace->append(bs_name, photon, "all");
        }
        return st;
    };
    s = hadamards(std::move(s), "Hp1/2", "BS1");
    s = detail::run_stage(std::move(s), photon, false, bc, mirror, trace, ledger);
    s = detail::run_stage(std::move(s), photon, true, bc, mirror, trace, ledger);
    return hadamards(std::move(s), "Hp3/4", "BS2");
}

/// Apply the classically controlled phase flips to the control photon.
template <typename Real>
BasicHyperState<Real> feed_forward(BasicHyperState<Real> s, Corrections c) {
    if (c.pol_phase)
        s = apply_pol_phase(std::move(s), 0);
    if (c.spatial_phase)
        s = apply_spatial_phase(std::move(s), 0);
    return s;
}

template <typename Real>
GateOutcome<Real> hyper_cnot_n(const PhotonSpec<Real> &control,
                               const std::vector<PhotonSpec<Real>> &targets,
                               const GateConfig<Real> &cfg) {
    if (cfg.n_targets < 1)
        throw ValidationError("n_targets must be at least 1");
    if (targets.size() != cfg.n_targets)
        throw ValidationError("expected " + std::to_string(cfg.n_targets) +
                              " target photon(s), got " +
                              std::to_string(targets.size()));
    if (targets.size() + 1 > BasisLabel::kMaxPhotons)
        throw ValidationError("too many target photons");

    GateOutcome<Real> out;
    out.block = block_coeffs(cfg.params);
    if (cfg.mirror_T_override &&
        std::abs(*cfg.mirror_T_override) > Real(1) + Real(1e-12))
        throw ValidationError("mirror transmission must satisfy |T| <= 1");
    if (std::abs(out.block.T) == Real(0))
        throw DegeneratePhysicsError(
            "all amplitude lost: block never transmits (T = 0)");
    const auto mirror = cfg.mirror_T_override.value_or(out.block.T);

    std::vector<PhotonSpec<Real>> photons{control};
    photons.insert(photons.end(), targets.begin(), targets.end());
    auto s = init_state(photons, SpinInit::plus, SpinInit::plus);

    s = traverse_control(std::move(s), out.block, mirror, &out.trace, &out.ledger);
    for (std::size_t n = 1; n <= targets.size(); ++n)
        s = traverse_target(std::move(s), n, out.block, mirror, &out.trace,
                            &out.ledger);
    s = detail::both_spin_hadamards(std::move(s), &out.trace);

    out.success_prob = s.coherent_norm2();
    out.heralded = {s.sink(SinkId::detector_B1), s.sink(SinkId::detector_B2)};
    out.absorbed_prob = s.sink(SinkId::absorbed);
    out.total_probability = s.total_probability();

    for (auto &branch : measure_spins(s)) {
        const SpinRecord rec{branch.spin1, branch.spin2};
        const auto corr = corrections_for(rec);
        out.branches.push_back(
            {rec, corr, branch.probability,
             feed_forward(std::move(branch.collapsed), corr)});
    }
    out.trace.append("measure", 0, "QD1,QD2");

    const auto &first = out.branches.front();
    out.conditional_state = first.state;
    out.spin_record = first.record;
    out.corrections = first.corrections;
    return out;
}

template <typename Real>
GateOutcome<Real> hyper_cnot(const PhotonSpec<Real> &control,
                             const PhotonSpec<Real> &target,
                             const GateConfig<Real> &cfg) {
    if (cfg.n_targets != 1)
        throw ValidationError("hyper_cnot takes exactly one target");
    return hyper_cnot_n(control, std::vector<PhotonSpec<Real>>{target}, cfg);
}

// ---------------------------------------------------------------------------
// Sampled mode

enum class ShotStatus { success, heralded_failure, lost };

inline const char *to_string(ShotStatus s) {
    switch (s) {
    case ShotStatus::success:
        return "success";
    case ShotStatus::heralded_failure:
        return "heralded_failure";
    case ShotStatus::lost:
        return "lost";
    }
    return "?";
}

template <typename Real = double> struct ShotRecord {
    ShotStatus status{ShotStatus::success};
    std::optional<SinkId> sink;        ///< which detector clicked / absorption
    std::optional<std::size_t> photon; ///< photon in flight when it ended
    std::string stage;
    std::optional<SpinRecord> spin_record;
    Corrections corrections;
    std::optional<BasicHyperState<Real>> state;

    friend bool operator==(const ShotRecord &, const ShotRecord &) = default;
};

/// Draws single shots from an amplitude-mode outcome.
///
/// At each stage the photon either passes (the coherent remainder continues)
/// or ends in one of the sinks with probability deposited / coherent norm
/// before the stage. Survivors pick a spin outcome with Born weights.
template <typename Real = double> class ShotSampler {
  public:
    explicit ShotSampler(GateOutcome<Real> outcome)
        : outcome_(std::move(outcome)) {}

    template <typename Rng> ShotRecord<Real> draw(Rng &rng) const {
        std::uniform_real_distribution<Real> uniform(Real(0), Real(1));
        ShotRecord<Real> rec;
        for (const auto &ev : outcome_.ledger) {
            if (!(ev.coherent_before > 0))
                continue;
            Real u = uniform(rng) * ev.coherent_before;
            for (std::size_t k = 0; k < kNumSinks; ++k) {
                if (u < ev.deposited[k]) {
                    const auto sink = static_cast<SinkId>(k);
                    rec.status = sink == SinkId::absorbed
                                     ? ShotStatus::lost
                                     : ShotStatus::heralded_failure;
                    rec.sink = sink;
                    rec.photon = ev.photon;
                    rec.stage = ev.stage;
                    return rec;
                }
                u -= ev.deposited[k];
            }
        }
        Real u = uniform(rng) * outcome_.success_prob;
        const auto *chosen = &outcome_.branches.back();
        for (const auto &b : outcome_.branches) {
            if (u < b.probability) {
                chosen = &b;
                break;
            }
            u -= b.probability;
        }
        rec.status = ShotStatus::success;
        rec.spin_record = chosen->record;
        rec.corrections = chosen->corrections;
        rec.state = chosen->state;
        return rec;
    }

    const GateOutcome<Real> &outcome() const { return outcome_; }

  private:
    GateOutcome<Real> outcome_;
};

namespace detail {
template <typename Real> std::uint64_t require_seed(const GateConfig<Real> &cfg) {
    if (cfg.mode != GateMode::sampled)
        throw ValidationError("sampling needs mode = sampled");
    if (!cfg.rng_seed)
        throw ValidationError("sampled mode needs an rng seed");
    return *cfg.rng_seed;
}
} // namespace detail

/// One seeded Monte Carlo realization of the gate.
template <typename Real>
ShotRecord<Real> sample_run(const PhotonSpec<Real> &control,
                            const std::vector<PhotonSpec<Real>> &targets,
                            const GateConfig<Real> &cfg) {
    std::mt19937_64 rng(detail::require_seed(cfg));
    return ShotSampler<Real>(hyper_cnot_n(control, targets, cfg)).draw(rng);
}

struct ShotTally {
    std::uint64_t shots{0};
    std::uint64_t successes{0};
    std::uint64_t clicks_B1{0};
    std::uint64_t clicks_B2{0};
    std::uint64_t lost{0};
    std::array<std::uint64_t, 4> spin_outcomes{}; ///< up-up, down-up, up-down, down-down

    double success_frequency() const {
        return shots ? static_cast<double>(successes) / static_cast<double>(shots)
                     : 0.0;
    }
    friend bool operator==(const ShotTally &, const ShotTally &) = default;
};

template <typename Real>
ShotTally sample_shots(const PhotonSpec<Real> &control,
                       const std::vector<PhotonSpec<Real>> &targets,
                       const GateConfig<Real> &cfg, std::uint64_t n_shots) {
    std::mt19937_64 rng(detail::require_seed(cfg));
    const ShotSampler<Real> sampler(hyper_cnot_n(control, targets, cfg));
    ShotTally tally;
    for (std::uint64_t i = 0; i < n_shots; ++i) {
        const auto rec = sampler.draw(rng);
        ++tally.shots;
        switch (rec.status) {
        case ShotStatus::success: {
            ++tally.successes;
            const auto &r = *rec.spin_record;
            ++tally.spin_outcomes[(r.spin1 == Spin::down ? 1U : 0U) +
                                  (r.spin2 == Spin::down ? 2U : 0U)];
            break;
        }
        case ShotStatus::heralded_failure:
            ++(*rec.sink == SinkId::detector_B1 ? tally.clicks_B1
                                                : tally.clicks_B2);
            break;
        case ShotStatus::lost:
            ++tally.lost;
            break;
        }
    }
    return tally;
}

} // namespace hypercnot
