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
 * Closed-form scattering of a circularly polarized photon off a charged
 * quantum dot in a double-sided microcavity, in the weak-excitation limit.
 *
 * All rates and frequencies share one unit; nothing here assumes a particular
 * one. The command-line front end normalizes to kappa = 1.
 */

#include <cmath>
#include <complex>
#include <string>

#include "hypercnot/errors.hpp"

namespace hypercnot {

template <typename Scalar = double> struct CavityParams {
    Scalar g{0};       ///< dipole-cavity coupling strength
    Scalar kappa{1};   ///< cavity decay rate into the input/output ports
    Scalar kappa_s{0}; ///< side leakage
    Scalar gamma{0};   ///< exciton dipole decay rate
    Scalar omega{0};   ///< photon frequency
    Scalar omega_c{0}; ///< cavity frequency
    Scalar omega_x{0}; ///< trion transition frequency

    /// Resonant system (omega = omega_c = omega_x = 0) described by the
    /// dimensionless ratios g/(kappa+kappa_s), kappa_s/kappa and gamma/kappa.
    static CavityParams resonant(Scalar g_ratio, Scalar ks_ratio,
                                 Scalar gamma_ratio, Scalar kappa = 1) {
        CavityParams p;
        p.kappa = kappa;
        p.kappa_s = ks_ratio * kappa;
        p.gamma = gamma_ratio * kappa;
        p.g = g_ratio * (p.kappa + p.kappa_s);
        return p;
    }
};

template <typename Scalar = double> struct ScatterCoeffs {
    std::complex<Scalar> r, t;   // hot cavity
    std::complex<Scalar> r0, t0; // cold cavity
};

template <typename Scalar = double> struct BlockCoeffs {
    std::complex<Scalar> D; ///< reflected into the heralding detector
    std::complex<Scalar> T; ///< transmitted with polarization flip and spin Z
};

template <typename Scalar = double> struct DephasingParams {
    Scalar tau{1}; ///< cavity photon lifetime
    Scalar t2{1};  ///< electron spin coherence time, same unit as tau
};

/// |denominator|^2 below this is reported as a domain error.
inline constexpr double kDenominatorEpsilon = 1e-30;

template <typename Scalar>
void validate(const CavityParams<Scalar> &p) {
    using std::isfinite;
    if (!isfinite(p.g) || !isfinite(p.kappa) || !isfinite(p.kappa_s) ||
        !isfinite(p.gamma) || !isfinite(p.omega) || !isfinite(p.omega_c) ||
        !isfinite(p.omega_x))
        throw ValidationError("cavity parameters must be finite");
    if (!(p.kappa > 0))
        throw ValidationError("kappa must be positive");
    if (p.kappa_s < 0)
        throw ValidationError("kappa_s must be non-negative");
    if (p.gamma < 0)
        throw ValidationError("gamma must be non-negative");
    if (p.g < 0)
        throw ValidationError("g must be non-negative");
}

namespace detail {
template <typename Scalar>
std::complex<Scalar> checked_ratio(std::complex<Scalar> num,
                                   std::complex<Scalar> den, const char *what) {
    if (std::norm(den) < Scalar(kDenominatorEpsilon))
        throw DomainError(std::string(what) + ": scattering denominator vanishes");
    return num / den;
}
} // namespace detail

/// Hot cavity (dipole coupled): fills r and t, leaves r0/t0 zero.
template <typename Scalar>
ScatterCoeffs<Scalar> hot_coeffs(const CavityParams<Scalar> &p) {
    using C = std::complex<Scalar>;
    const C dipole{p.gamma / 2, p.omega_x - p.omega};
    const C cavity{p.kappa + p.kappa_s / 2, p.omega_c - p.omega};
    const C t = detail::checked_ratio<Scalar>(-p.kappa * dipole,
                                              dipole * cavity + p.g * p.g,
                                              "hot cavity");
    return {Scalar(1) + t, t, C{}, C{}};
}

/// Cold cavity (g = 0): fills r0 and t0, leaves r/t zero.
template <typename Scalar>
ScatterCoeffs<Scalar> cold_coeffs(const CavityParams<Scalar> &p) {
    using C = std::complex<Scalar>;
    const C cavity{p.kappa + p.kappa_s / 2, p.omega_c - p.omega};
    const C t0 =
        detail::checked_ratio<Scalar>(C{-p.kappa}, cavity, "cold cavity");
    return {C{}, C{}, Scalar(1) + t0, t0};
}

template <typename Scalar>
ScatterCoeffs<Scalar> scatter_coeffs(const CavityParams<Scalar> &p) {
    validate(p);
    const auto hot = hot_coeffs(p);
    const auto cold = cold_coeffs(p);
    return {hot.r, hot.t, cold.r0, cold.t0};
}

template <typename Scalar>
BlockCoeffs<Scalar> block_coeffs(const ScatterCoeffs<Scalar> &s) {
    const auto hot = s.t + s.r;
    const auto cold = s.t0 + s.r0;
    return {(hot + cold) / Scalar(2), (hot - cold) / Scalar(2)};
}

template <typename Scalar>
BlockCoeffs<Scalar> block_coeffs(const CavityParams<Scalar> &p) {
    return block_coeffs(scatter_coeffs(p));
}

/// Probability that the control and all n_targets photons leave the gate:
/// each photon picks up T twice (polarization and spatial stage).
template <typename Scalar>
Scalar efficiency(std::complex<Scalar> T, unsigned n_targets) {
    if (n_targets == 0)
        throw ValidationError("efficiency needs at least one target");
    const Scalar per_photon = std::norm(T) * std::norm(T); // |T|^4
    Scalar eta = per_photon;
    for (unsigned n = 0; n < n_targets; ++n)
        eta *= per_photon;
    return eta;
}

/// Fidelity penalty from spin dephasing during one photon lifetime.
template <typename Scalar>
Scalar dephasing_penalty(const DephasingParams<Scalar> &d) {
    if (!(d.tau > 0) || !(d.t2 > 0))
        throw ValidationError("tau and t2 must be positive");
    using std::expm1;
    return -expm1(-d.tau / d.t2);
}

} // namespace hypercnot
