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
 * Optical elements of the hyperparallel CNOT circuit and the two per-photon
 * routing stages built from them.
 *
 * Polarizing beam splitters are modelled by `route` (split the coherent state
 * by a branch predicate) and `recombine` (coherent sum). Every element that
 * loses amplitude deposits the lost probability in a sink, so conservation
 * holds across any sequence of elements.
 */

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypercnot/hyperstate.hpp"
#include "hypercnot/scattering.hpp"

namespace hypercnot {

/// Propagation relative to the cavity axis (superscripts of the raw
/// scattering rules).
enum class Direction { along_axis, against_axis };

inline Direction reversed(Direction d) {
    return d == Direction::along_axis ? Direction::against_axis
                                      : Direction::along_axis;
}

/// Predicate on the polarization and spatial mode of one photon. An empty
/// field matches both values.
struct BranchCondition {
    std::optional<Pol> pol;
    std::optional<Spatial> spatial;

    static BranchCondition all() { return {}; }
    static BranchCondition only(Pol p) { return {p, std::nullopt}; }
    static BranchCondition only(Spatial s) { return {std::nullopt, s}; }

    bool matches(BasisLabel label, std::size_t photon) const {
        return (!pol || label.pol(photon) == *pol) &&
               (!spatial || label.spatial(photon) == *spatial);
    }

    std::string describe() const {
        std::string out;
        if (pol)
            out += to_string(*pol);
        if (spatial) {
            if (!out.empty())
                out += ',';
            out += *spatial == Spatial::mode1 ? "mode1" : "mode2";
        }
        return out.empty() ? "all" : out;
    }
};

struct TraceRecord {
    std::string element;
    std::size_t photon;
    std::string condition;
    friend bool operator==(const TraceRecord &, const TraceRecord &) = default;
};

/// Append-only log of the elements a gate run passed through.
class ElementTrace {
  public:
    void append(std::string element, std::size_t photon, std::string condition) {
        records_.push_back({std::move(element), photon, std::move(condition)});
    }
    const std::vector<TraceRecord> &records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    friend bool operator==(const ElementTrace &, const ElementTrace &) = default;

  private:
    std::vector<TraceRecord> records_;
};

namespace detail {
inline void log(ElementTrace *trace, const char *element, std::size_t photon,
                const BranchCondition &cond) {
    if (trace)
        trace->append(element, photon, cond.describe());
}
} // namespace detail

/// Split off the branch selected by `cond`. The selected part starts with
/// empty sinks; the remainder keeps the accumulated ones.
template <typename Real>
std::pair<BasicHyperState<Real>, BasicHyperState<Real>>
route(const BasicHyperState<Real> &s, std::size_t photon,
      const BranchCondition &cond) {
    s.check_photon(photon);
    BasicHyperState<Real> selected(s.n_photons(), s.n_spins());
    BasicHyperState<Real> rest = s;
    selected.set_prune_threshold(s.prune_threshold());
    typename BasicHyperState<Real>::AmplitudeMap sel, keep;
    for (const auto &[label, amp] : s.amplitudes())
        (cond.matches(label, photon) ? sel : keep).emplace(label, amp);
    selected.assign(std::move(sel));
    rest.assign(std::move(keep));
    return {std::move(selected), std::move(rest)};
}

/// Coherent sum of two branches, sinks added.
template <typename Real>
BasicHyperState<Real> recombine(BasicHyperState<Real> a,
                                const BasicHyperState<Real> &b) {
    if (a.n_photons() != b.n_photons() || a.n_spins() != b.n_spins())
        throw ContractViolation("recombining branches of different shape");
    auto amps = a.amplitudes();
    for (const auto &[label, amp] : b.amplitudes())
        amps[label] += amp;
    a.assign(std::move(amps));
    for (std::size_t k = 0; k < kNumSinks; ++k)
        a.deposit(static_cast<SinkId>(k), b.sinks()[k]);
    return a;
}

/// Effective basic block acting on an R photon:
///     |R>|spin>  ->  D |R>|spin> (to the detector)  +  T |L> Z|spin>.
/// The reflected part leaves the coherent state through `detector`; what the
/// block neither reflects nor transmits is absorbed.
template <typename Real>
BasicHyperState<Real> block_interact(BasicHyperState<Real> s,
                                     std::size_t photon, SpinId spin,
                                     const BlockCoeffs<Real> &bc,
                                     SinkId detector,
                                     ElementTrace *trace = nullptr) {
    s.check_photon(photon);
    const auto spin_bit = s.spin_bit(spin);
    if (detector == SinkId::absorbed)
        throw ValidationError("block detector must be a detector sink");
    const std::size_t pol_bit = BasisLabel::pol_bit(photon);

    typename BasicHyperState<Real>::AmplitudeMap out;
    Real incoming{0};
    for (const auto &[label, amp] : s.amplitudes()) {
        if (label.test(pol_bit))
            throw ContractViolation(
                "L-polarized amplitude routed into a basic block");
        incoming += std::norm(amp);
        const auto sign = label.test(spin_bit) ? Real(-1) : Real(1);
        out[label.flipped(pol_bit)] += sign * bc.T * amp;
    }
    s.assign(std::move(out));

    const Real reflected = std::norm(bc.D);
    const Real lost = Real(1) - reflected - std::norm(bc.T);
    s.deposit(detector, reflected * incoming);
    s.deposit(SinkId::absorbed, lost > 0 ? lost * incoming : Real(0));
    if (trace)
        trace->append(spin == SpinId::qd1 ? "B1" : "B2", photon, "R");
    return s;
}

/// Partially transmitting mirror on the selected branch.
template <typename Real>
BasicHyperState<Real> mirror_attenuate(BasicHyperState<Real> s,
                                       std::size_t photon,
                                       const BranchCondition &cond,
                                       std::complex<Real> T,
                                       ElementTrace *trace = nullptr,
                                       const char *name = "T") {
    s.check_photon(photon);
    if (std::abs(T) > Real(1) + Real(1e-12))
        throw ValidationError("mirror transmission must satisfy |T| <= 1");
    auto amps = s.amplitudes();
    Real selected{0};
    for (auto &[label, amp] : amps) {
        if (!cond.matches(label, photon))
            continue;
        selected += std::norm(amp);
        amp *= T;
    }
    s.assign(std::move(amps));
    const Real lost = Real(1) - std::norm(T);
    s.deposit(SinkId::absorbed, lost > 0 ? lost * selected : Real(0));
    detail::log(trace, name, photon, cond);
    return s;
}

template <typename Real> struct CavityPassResult {
    BasicHyperState<Real> transmitted; ///< keeps the incoming direction
    BasicHyperState<Real> reflected;   ///< direction reversed, polarization flipped
};

/// Single pass through a QD-cavity, straight from the spin-dependent
/// scattering rules.
///
/// Spin up couples to photons with angular momentum +1 (R along the axis, L
/// against it); spin down couples to -1 (R against, L along). Coupled photons
/// scatter with the hot-cavity (r, t), uncoupled ones with the cold-cavity
/// (r0, t0). Reflection flips polarization and reverses direction.
///
/// The unscattered remainder (side leakage, dipole decay) is deposited in the
/// transmitted state's absorbed sink; the reflected state carries no sinks.
template <typename Real>
CavityPassResult<Real> raw_cavity_pass(const BasicHyperState<Real> &s,
                                       std::size_t photon, SpinId spin,
                                       const ScatterCoeffs<Real> &sc,
                                       Direction dir) {
    s.check_photon(photon);
    const auto spin_bit = s.spin_bit(spin);
    const std::size_t pol_bit = BasisLabel::pol_bit(photon);

    typename BasicHyperState<Real>::AmplitudeMap trans, refl;
    Real absorbed{0};
    for (const auto &[label, amp] : s.amplitudes()) {
        const bool plus_one = (label.pol(photon) == Pol::R) ==
                              (dir == Direction::along_axis);
        const bool spin_up = !label.test(spin_bit);
        const bool coupled = plus_one == spin_up;
        const auto t = coupled ? sc.t : sc.t0;
        const auto r = coupled ? sc.r : sc.r0;
        trans[label] += t * amp;
        refl[label.flipped(pol_bit)] += r * amp;
        const Real lost = Real(1) - std::norm(t) - std::norm(r);
        absorbed += lost > 0 ? lost * std::norm(amp) : Real(0);
    }

    BasicHyperState<Real> transmitted = s;
    transmitted.assign(std::move(trans));
    transmitted.deposit(SinkId::absorbed, absorbed);
    BasicHyperState<Real> reflected(s.n_photons(), s.n_spins());
    reflected.set_prune_threshold(s.prune_threshold());
    reflected.assign(std::move(refl));
    return {std::move(transmitted), std::move(reflected)};
}

/// Polarization stage: R passes the mirrors T1/T2, L passes X1 and block B1.
/// Net effect  (a R + b L) |spin1>  ->  T (a R |spin1> + b L Z|spin1>).
template <typename Real>
BasicHyperState<Real> stage_polarization(
    const BasicHyperState<Real> &s, std::size_t photon,
    const BlockCoeffs<Real> &bc,
    std::optional<std::complex<Real>> mirror_T = std::nullopt,
    ElementTrace *trace = nullptr) {
    const auto mirror = mirror_T.value_or(bc.T);
    auto [left, right] = route(s, photon, BranchCondition::only(Pol::L));
    detail::log(trace, "CPBS1/2", photon, BranchCondition::all());

    right = mirror_attenuate(std::move(right), photon, BranchCondition::all(),
                             mirror, trace, "T1/T2");

    left = apply_pol_flip(std::move(left), photon);
    detail::log(trace, "X1", photon, BranchCondition::only(Pol::L));
    left = block_interact(std::move(left), photon, SpinId::qd1, bc,
                          SinkId::detector_B1, trace);

    detail::log(trace, "CPBS3/4", photon, BranchCondition::all());
    return recombine(std::move(left), right);
}

/// Spatial stage: mode 1 passes mirror T3; in mode 2 each polarization meets
/// block B2 once, with X2 before (L) or X3 after (R) so polarization is
/// restored. Net effect (a m1 + b m2)|spin2> -> T (a m1|spin2> + b m2 Z|spin2>).
template <typename Real>
BasicHyperState<Real> stage_spatial(
    const BasicHyperState<Real> &s, std::size_t photon,
    const BlockCoeffs<Real> &bc,
    std::optional<std::complex<Real>> mirror_T = std::nullopt,
    ElementTrace *trace = nullptr) {
    const auto mirror = mirror_T.value_or(bc.T);
    auto [mode2, mode1] = route(s, photon, BranchCondition::only(Spatial::mode2));

    mode1 = mirror_attenuate(std::move(mode1), photon, BranchCondition::all(),
                             mirror, trace, "T3");

    auto [left, right] = route(mode2, photon, BranchCondition::only(Pol::L));
    detail::log(trace, "CPBS5", photon,
                BranchCondition::only(Spatial::mode2));

    left = apply_pol_flip(std::move(left), photon);
    detail::log(trace, "X2", photon, BranchCondition::only(Pol::L));
    left = block_interact(std::move(left), photon, SpinId::qd2, bc,
                          SinkId::detector_B2, trace);

    right = block_interact(std::move(right), photon, SpinId::qd2, bc,
                           SinkId::detector_B2, trace);
    right = apply_pol_flip(std::move(right), photon);
    detail::log(trace, "X3", photon, BranchCondition::only(Pol::R));

    detail::log(trace, "CPBS6", photon, BranchCondition::only(Spatial::mode2));
    return recombine(recombine(std::move(left), right), mode1);
}

} // namespace hypercnot
