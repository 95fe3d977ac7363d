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
 * Ideal hyperparallel CNOT^N computed without any circuit: the polarization
 * and spatial registers are built as dense Kronecker products and the
 * controlled flips are applied as permutation matrices.
 */

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/KroneckerProduct>

#include "hypercnot/hyperstate.hpp"

namespace hypercnot {

template <typename Real>
using DenseVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Dense amplitudes indexed by the packed label bits.
template <typename Real>
DenseVector<Real> to_dense(const BasicHyperState<Real> &s) {
    if (s.width() > 26)
        throw ValidationError("state too wide for a dense copy");
    DenseVector<Real> v = DenseVector<Real>::Zero(Eigen::Index{1} << s.width());
    for (const auto &[label, amp] : s.amplitudes())
        v(static_cast<Eigen::Index>(label.bits())) = amp;
    return v;
}

namespace detail {

/// Kronecker product of per-photon pairs; the first photon is the most
/// significant index bit.
template <typename Real>
DenseVector<Real>
register_vector(const std::vector<std::array<std::complex<Real>, 2>> &pairs) {
    DenseVector<Real> acc(1);
    acc(0) = std::complex<Real>{1};
    for (const auto &pair : pairs) {
        DenseVector<Real> q(2);
        q << pair[0], pair[1];
        DenseVector<Real> next = Eigen::kroneckerProduct(acc, q).eval();
        acc = std::move(next);
    }
    return acc;
}

/// Permutation flipping every target bit when the control (top) bit is set.
inline Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>
multi_target_cnot(std::size_t n_targets) {
    const int dim = 1 << (n_targets + 1);
    const int control = 1 << n_targets;
    const int targets = control - 1;
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm(dim);
    for (int i = 0; i < dim; ++i)
        perm.indices()(i) = (i & control) ? (i ^ targets) : i;
    return perm;
}

} // namespace detail

/// Exact output of the hyperparallel CNOT^N: every target polarization flips
/// on the control-L branch and every target spatial mode flips on the
/// control-mode2 branch. Photon 0 is the control.
template <typename Real>
BasicHyperState<Real>
ideal_hyper_cnot_n(const PhotonSpec<Real> &control,
                   const std::vector<PhotonSpec<Real>> &targets) {
    validate(control, "control");
    for (std::size_t n = 0; n < targets.size(); ++n)
        validate(targets[n], "target " + std::to_string(n));
    const std::size_t n_targets = targets.size();
    const std::size_t n_photons = n_targets + 1;
    if (n_targets == 0 || n_photons > 16)
        throw ValidationError("oracle supports 1 to 15 targets");

    std::vector<std::array<std::complex<Real>, 2>> pol{control.pol};
    std::vector<std::array<std::complex<Real>, 2>> spat{control.spatial};
    for (const auto &t : targets) {
        pol.push_back(t.pol);
        spat.push_back(t.spatial);
    }
    const auto cnot = detail::multi_target_cnot(n_targets);
    const DenseVector<Real> pol_out = cnot * detail::register_vector(pol);
    const DenseVector<Real> spat_out = cnot * detail::register_vector(spat);

    // register index bit (n_photons-1-p) belongs to photon p
    auto scatter_bits = [n_photons](Eigen::Index idx, bool spatial) {
        BasisLabel::Bits bits = 0;
        for (std::size_t p = 0; p < n_photons; ++p)
            if ((idx >> (n_photons - 1 - p)) & 1)
                bits |= BasisLabel::Bits{1}
                        << (spatial ? BasisLabel::spatial_bit(p)
                                    : BasisLabel::pol_bit(p));
        return bits;
    };

    typename BasicHyperState<Real>::AmplitudeMap amps;
    for (Eigen::Index i = 0; i < pol_out.size(); ++i) {
        if (pol_out(i) == std::complex<Real>{})
            continue;
        for (Eigen::Index j = 0; j < spat_out.size(); ++j) {
            if (spat_out(j) == std::complex<Real>{})
                continue;
            amps[BasisLabel(scatter_bits(i, false) | scatter_bits(j, true))] =
                pol_out(i) * spat_out(j);
        }
    }
    BasicHyperState<Real> out(n_photons, 0);
    out.assign(std::move(amps));
    return out;
}

} // namespace hypercnot
