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
 * Sparse joint amplitude state of P photons (polarization + spatial mode
 * each) and up to two quantum-dot electron spins.
 *
 * Amplitudes are deliberately left unnormalized: every loss channel removes
 * norm from the coherent part and adds it to one of the probability sinks, so
 * at any point
 *
 *     sum |amplitude|^2 + sum sinks == 1
 *
 * for a state that started normalized. Normalization happens only when spins
 * are measured out or a fidelity is taken.
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hypercnot/basis.hpp"
#include "hypercnot/errors.hpp"

namespace hypercnot {

/// Tolerance on |c1|^2 + |c2|^2 = 1 for user-supplied coefficient pairs.
inline constexpr double kSpecNormTolerance = 1e-9;

template <typename Real = double> struct PhotonSpec {
    using Complex = std::complex<Real>;
    std::array<Complex, 2> pol{Complex{1}, Complex{0}};     ///< (R, L)
    std::array<Complex, 2> spatial{Complex{1}, Complex{0}}; ///< (mode1, mode2)

    static PhotonSpec basis(Pol p, Spatial s) {
        PhotonSpec spec;
        spec.pol = p == Pol::R ? std::array<Complex, 2>{Complex{1}, Complex{0}}
                               : std::array<Complex, 2>{Complex{0}, Complex{1}};
        spec.spatial = s == Spatial::mode1
                           ? std::array<Complex, 2>{Complex{1}, Complex{0}}
                           : std::array<Complex, 2>{Complex{0}, Complex{1}};
        return spec;
    }

    static PhotonSpec uniform() {
        const Complex h{Real(1) / std::sqrt(Real(2))};
        return {{h, h}, {h, h}};
    }

    friend bool operator==(const PhotonSpec &, const PhotonSpec &) = default;
};

template <typename Real>
void validate(const PhotonSpec<Real> &spec, const std::string &name = "photon") {
    auto check = [&](const std::array<std::complex<Real>, 2> &pair,
                     const char *which) {
        for (const auto &c : pair)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw ValidationError(name + ": " + which +
                                      " pair has non-finite coefficients");
        const Real n = std::norm(pair[0]) + std::norm(pair[1]);
        if (std::abs(n - Real(1)) > Real(kSpecNormTolerance))
            throw ValidationError(name + ": " + which +
                                  " pair is not normalized (|c1|^2+|c2|^2 = " +
                                  std::to_string(static_cast<double>(n)) + ")");
    };
    check(spec.pol, "polarization");
    check(spec.spatial, "spatial");
}

/// Preparation of one electron spin.
enum class SpinInit { up, down, plus, minus };

template <typename Real = double> class BasicHyperState {
  public:
    using Scalar = Real;
    using Complex = std::complex<Real>;
    using AmplitudeMap = std::map<BasisLabel, Complex>;

    BasicHyperState(std::size_t n_photons, std::size_t n_spins)
        : n_photons_(n_photons), n_spins_(n_spins) {
        if (n_photons == 0 || n_photons > BasisLabel::kMaxPhotons)
            throw ValidationError("photon count must be in [1, " +
                                  std::to_string(BasisLabel::kMaxPhotons) + "]");
        if (n_spins != 0 && n_spins != 2)
            throw ValidationError("a state carries either zero or two spins");
    }

    std::size_t n_photons() const { return n_photons_; }
    std::size_t n_spins() const { return n_spins_; }
    std::size_t width() const { return 2 * n_photons_ + n_spins_; }
    std::size_t size() const { return amplitudes_.size(); }

    const AmplitudeMap &amplitudes() const { return amplitudes_; }

    Complex amplitude(BasisLabel label) const {
        auto it = amplitudes_.find(label);
        return it == amplitudes_.end() ? Complex{} : it->second;
    }

    void set_amplitude(BasisLabel label, Complex value) {
        check_label(label);
        amplitudes_[label] = value;
    }

    void add_amplitude(BasisLabel label, Complex value) {
        check_label(label);
        amplitudes_[label] += value;
    }

    /// Replace the coherent part wholesale; applies the prune threshold.
    void assign(AmplitudeMap amps) {
        amplitudes_ = std::move(amps);
        prune();
    }

    void clear_amplitudes() { amplitudes_.clear(); }

    Real coherent_norm2() const {
        Real acc{0};
        for (const auto &[label, amp] : amplitudes_)
            acc += std::norm(amp);
        return acc;
    }

    Real sink(SinkId id) const { return sinks_[static_cast<std::size_t>(id)]; }
    const std::array<Real, kNumSinks> &sinks() const { return sinks_; }
    Real total_sinks() const {
        return std::accumulate(sinks_.begin(), sinks_.end(), Real{0});
    }

    /// Coherent norm plus everything that left through a sink.
    Real total_probability() const { return coherent_norm2() + total_sinks(); }

    void deposit(SinkId id, Real mass) {
        if (!(mass >= 0))
            throw ValidationError("sink deposit must be non-negative");
        sinks_[static_cast<std::size_t>(id)] += mass;
    }

    void reset_sinks() { sinks_.fill(Real{0}); }

    /// Amplitudes with magnitude strictly below this are dropped after each
    /// operation. Zero (the default) keeps everything, including exact zeros.
    Real prune_threshold() const { return prune_threshold_; }
    void set_prune_threshold(Real threshold) {
        if (!(threshold >= 0))
            throw ValidationError("prune threshold must be non-negative");
        prune_threshold_ = threshold;
        prune();
    }

    void check_photon(std::size_t photon) const {
        if (photon >= n_photons_)
            throw ValidationError("photon index " + std::to_string(photon) +
                                  " out of range (" +
                                  std::to_string(n_photons_) + " photons)");
    }

    std::size_t spin_bit(SpinId s) const {
        if (n_spins_ != 2)
            throw ValidationError("state carries no spins");
        if (static_cast<std::size_t>(s) > 1)
            throw ValidationError("spin id must be QD1 or QD2");
        return BasisLabel::spin_bit(n_photons_, s);
    }

    /// Bit-exact equality, sinks included.
    friend bool operator==(const BasicHyperState &a, const BasicHyperState &b) {
        return a.n_photons_ == b.n_photons_ && a.n_spins_ == b.n_spins_ &&
               a.amplitudes_ == b.amplitudes_ && a.sinks_ == b.sinks_;
    }

  private:
    void check_label(BasisLabel label) const {
        if (width() < 64 && (label.bits() >> width()) != 0)
            throw ValidationError("basis label wider than the state");
    }

    void prune() {
        if (prune_threshold_ <= 0)
            return;
        std::erase_if(amplitudes_, [this](const auto &kv) {
            return std::abs(kv.second) < prune_threshold_;
        });
    }

    std::size_t n_photons_;
    std::size_t n_spins_;
    AmplitudeMap amplitudes_;
    std::array<Real, kNumSinks> sinks_{};
    Real prune_threshold_{0};
};

using HyperState = BasicHyperState<double>;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

/// Apply a 2x2 operator to one bit of every basis label. Zero matrix entries
/// never create amplitudes, so permutations and diagonals keep the support.
template <typename Real>
BasicHyperState<Real> apply_local(BasicHyperState<Real> s, std::size_t bit,
                                  const Matrix2c<Real> &op) {
    typename BasicHyperState<Real>::AmplitudeMap out;
    for (const auto &[label, amp] : s.amplitudes()) {
        const int in = label.test(bit) ? 1 : 0;
        for (int o = 0; o < 2; ++o) {
            const auto c = op(o, in);
            if (c == std::complex<Real>{})
                continue;
            out[label.with(bit, o == 1)] += c * amp;
        }
    }
    s.assign(std::move(out));
    return s;
}

namespace detail {
template <typename Real> Matrix2c<Real> hadamard() {
    const Real h = Real(1) / std::sqrt(Real(2));
    Matrix2c<Real> m;
    m << h, h, h, -h;
    return m;
}
template <typename Real> Matrix2c<Real> pauli_x() {
    Matrix2c<Real> m;
    m << 0, 1, 1, 0;
    return m;
}
template <typename Real> Matrix2c<Real> pauli_z() {
    Matrix2c<Real> m;
    m << 1, 0, 0, -1;
    return m;
}
} // namespace detail

template <typename Real>
BasicHyperState<Real> apply_pol_hadamard(BasicHyperState<Real> s,
                                         std::size_t photon) {
    s.check_photon(photon);
    return apply_local(std::move(s), BasisLabel::pol_bit(photon),
                       detail::hadamard<Real>());
}

template <typename Real>
BasicHyperState<Real> apply_spatial_hadamard(BasicHyperState<Real> s,
                                             std::size_t photon) {
    s.check_photon(photon);
    return apply_local(std::move(s), BasisLabel::spatial_bit(photon),
                       detail::hadamard<Real>());
}

/// Half-wave plate bit flip R <-> L.
template <typename Real>
BasicHyperState<Real> apply_pol_flip(BasicHyperState<Real> s,
                                     std::size_t photon) {
    s.check_photon(photon);
    return apply_local(std::move(s), BasisLabel::pol_bit(photon),
                       detail::pauli_x<Real>());
}

/// |L> -> -|L>
template <typename Real>
BasicHyperState<Real> apply_pol_phase(BasicHyperState<Real> s,
                                      std::size_t photon) {
    s.check_photon(photon);
    return apply_local(std::move(s), BasisLabel::pol_bit(photon),
                       detail::pauli_z<Real>());
}

/// |mode2> -> -|mode2>
template <typename Real>
BasicHyperState<Real> apply_spatial_phase(BasicHyperState<Real> s,
                                          std::size_t photon) {
    s.check_photon(photon);
    return apply_local(std::move(s), BasisLabel::spatial_bit(photon),
                       detail::pauli_z<Real>());
}

template <typename Real>
BasicHyperState<Real> apply_spin_hadamard(BasicHyperState<Real> s, SpinId spin) {
    const auto bit = s.spin_bit(spin);
    return apply_local(std::move(s), bit, detail::hadamard<Real>());
}

template <typename Real>
BasicHyperState<Real> apply_spin_z(BasicHyperState<Real> s, SpinId spin) {
    const auto bit = s.spin_bit(spin);
    return apply_local(std::move(s), bit, detail::pauli_z<Real>());
}

template <typename Real>
BasicHyperState<Real> sink_deposit(BasicHyperState<Real> s, SinkId sink,
                                   Real mass) {
    s.deposit(sink, mass);
    return s;
}

/// Product state of the given photons with both spins prepared as requested.
template <typename Real>
BasicHyperState<Real> init_state(std::span<const PhotonSpec<Real>> photons,
                                 SpinInit spin1 = SpinInit::plus,
                                 SpinInit spin2 = SpinInit::plus) {
    using Complex = std::complex<Real>;
    for (std::size_t p = 0; p < photons.size(); ++p)
        validate(photons[p], "photon " + std::to_string(p));
    BasicHyperState<Real> s(photons.size(), 2);

    std::vector<std::pair<BasisLabel::Bits, Complex>> terms{{0, Complex{1}}};
    auto expand = [&terms](std::size_t bit,
                           const std::array<Complex, 2> &coeffs) {
        std::vector<std::pair<BasisLabel::Bits, Complex>> next;
        for (const auto &[bits, amp] : terms)
            for (int v = 0; v < 2; ++v)
                if (coeffs[v] != Complex{})
                    next.emplace_back(
                        bits | (BasisLabel::Bits(v) << bit), amp * coeffs[v]);
        terms = std::move(next);
    };
    const Real h = Real(1) / std::sqrt(Real(2));
    auto spin_coeffs = [h](SpinInit init) -> std::array<Complex, 2> {
        switch (init) {
        case SpinInit::up:
            return {Complex{1}, Complex{0}};
        case SpinInit::down:
            return {Complex{0}, Complex{1}};
        case SpinInit::plus:
            return {Complex{h}, Complex{h}};
        case SpinInit::minus:
            return {Complex{h}, Complex{-h}};
        }
        return {};
    };
    for (std::size_t p = 0; p < photons.size(); ++p) {
        expand(BasisLabel::pol_bit(p), photons[p].pol);
        expand(BasisLabel::spatial_bit(p), photons[p].spatial);
    }
    expand(BasisLabel::spin_bit(photons.size(), SpinId::qd1), spin_coeffs(spin1));
    expand(BasisLabel::spin_bit(photons.size(), SpinId::qd2), spin_coeffs(spin2));

    typename BasicHyperState<Real>::AmplitudeMap amps;
    for (const auto &[bits, amp] : terms)
        amps[BasisLabel(bits)] += amp;
    s.assign(std::move(amps));
    return s;
}

template <typename Real>
BasicHyperState<Real> init_state(const std::vector<PhotonSpec<Real>> &photons,
                                 SpinInit spin1 = SpinInit::plus,
                                 SpinInit spin2 = SpinInit::plus) {
    return init_state(std::span<const PhotonSpec<Real>>(photons), spin1, spin2);
}

template <typename Real> struct SpinBranch {
    Spin spin1;
    Spin spin2;
    /// Absolute Born weight: fraction of the original (normalized) input.
    Real probability;
    /// Photon-only state, renormalized.
    BasicHyperState<Real> collapsed;
};

/// Projective measurement of both spins in the {up, down} basis. Returns only
/// outcomes with nonzero weight, in the order up-up, down-up, up-down,
/// down-down (spin 1 varies fastest, matching the label layout).
template <typename Real>
std::vector<SpinBranch<Real>> measure_spins(const BasicHyperState<Real> &s) {
    if (s.n_spins() != 2)
        throw ValidationError("measure_spins needs a state with two spins");
    const std::size_t n = s.n_photons();
    const BasisLabel::Bits photon_mask = (BasisLabel::Bits{1} << (2 * n)) - 1;

    std::array<typename BasicHyperState<Real>::AmplitudeMap, 4> parts;
    std::array<Real, 4> weight{};
    for (const auto &[label, amp] : s.amplitudes()) {
        const auto outcome = static_cast<std::size_t>(label.bits() >> (2 * n));
        parts[outcome][BasisLabel(label.bits() & photon_mask)] += amp;
        weight[outcome] += std::norm(amp);
    }
    const Real total = weight[0] + weight[1] + weight[2] + weight[3];
    if (!(total > 0))
        throw DegeneratePhysicsError("all amplitude lost");

    std::vector<SpinBranch<Real>> branches;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!(weight[k] > 0))
            continue;
        BasicHyperState<Real> collapsed(n, 0);
        const Real scale = Real(1) / std::sqrt(weight[k]);
        for (auto &[label, amp] : parts[k])
            amp *= scale;
        collapsed.assign(std::move(parts[k]));
        branches.push_back({(k & 1U) ? Spin::down : Spin::up,
                            (k & 2U) ? Spin::down : Spin::up, weight[k],
                            std::move(collapsed)});
    }
    return branches;
}

/// <a|b> over the union of supports; missing labels count as zero.
template <typename Real>
std::complex<Real> inner_product(const BasicHyperState<Real> &a,
                                 const BasicHyperState<Real> &b) {
    if (a.n_photons() != b.n_photons() || a.n_spins() != b.n_spins())
        throw ValidationError("inner product of states with different shapes");
    std::complex<Real> acc{};
    for (const auto &[label, amp] : a.amplitudes())
        acc += std::conj(amp) * b.amplitude(label);
    return acc;
}

/// |<a|b>|^2 of the photon parts, normalizing both sides. Global phase is
/// irrelevant.
template <typename Real>
Real fidelity(const BasicHyperState<Real> &actual,
              const BasicHyperState<Real> &ideal) {
    if (actual.n_spins() != 0 || ideal.n_spins() != 0)
        throw ValidationError("fidelity needs photon-only states (measure spins first)");
    if (actual.n_photons() != ideal.n_photons())
        throw ValidationError("fidelity of states with different photon counts");
    const Real na = actual.coherent_norm2();
    const Real ni = ideal.coherent_norm2();
    if (!(na > 0) || !(ni > 0))
        throw ValidationError("fidelity of a zero state");
    const Real f = std::norm(inner_product(actual, ideal)) / (na * ni);
    return f > Real(1) ? Real(1) : f;
}

/// Largest |a(label) - b(label)| over both supports.
template <typename Real>
Real max_abs_difference(const BasicHyperState<Real> &a,
                        const BasicHyperState<Real> &b) {
    if (a.n_photons() != b.n_photons() || a.n_spins() != b.n_spins())
        throw ValidationError("comparing states with different shapes");
    Real worst{0};
    for (const auto &[label, amp] : a.amplitudes())
        worst = std::max(worst, std::abs(amp - b.amplitude(label)));
    for (const auto &[label, amp] : b.amplitudes())
        worst = std::max(worst, std::abs(amp - a.amplitude(label)));
    return worst;
}

} // namespace hypercnot
