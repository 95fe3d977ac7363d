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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hypercnot/analysis.hpp"
#include "hypercnot/gates.hpp"
#include "hypercnot/oracle.hpp"

using namespace hypercnot;
using C = std::complex<double>;
using Spec = PhotonSpec<double>;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

GateConfig<double> practical(unsigned n = 1) {
    GateConfig<double> cfg;
    cfg.params = CavityParams<double>::resonant(3.0, 0.1, 0.1);
    cfg.n_targets = n;
    return cfg;
}

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Verdict efficiency_two_photon() {
    const auto out = hyper_cnot(Spec::uniform(), Spec::uniform(), practical());
    const double T = std::abs(block_coeffs(practical().params).T);
    const double closed = std::pow(T, 8);
    const double dev = std::abs(out.success_prob - closed);
    return {std::abs(out.success_prob - 0.6513) <= 1e-4 && dev <= 1e-12,
            fmt("success_prob=%.10f |T|^8 deviation=%.2e", out.success_prob, dev)};
}

Verdict efficiency_multi_target() {
    const double T = std::abs(block_coeffs(practical().params).T);
    const double reported[] = {0, 0.6513, 0.5256, 0.4242};
    bool ok = true;
    double worst = 0;
    std::string values;
    for (unsigned n = 1; n <= 4; ++n) {
        const auto out = hyper_cnot_n(Spec::uniform(), std::vector<Spec>(n, Spec::uniform()),
                                      practical(n));
        const double dev = std::abs(out.success_prob - std::pow(T, 4.0 * (n + 1)));
        worst = std::max(worst, dev);
        ok = ok && dev <= 1e-12;
        if (n == 2 || n == 3) {
            ok = ok && std::abs(out.success_prob - reported[n]) <= 1e-4;
            values += fmt("N=%.0f:%.6f ", n, out.success_prob);
        }
    }
    return {ok, values + fmt("max closed-form deviation (N<=4)=%.2e", worst)};
}

Verdict self_correction() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260101);
    int cases = 0;
    double worst = 0;
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
        if (out.branches.size() != 4)
            return {false, "missing spin outcome in case " + std::to_string(cases)};
        for (const auto &b : out.branches)
            worst = std::max(worst, std::abs(1 - fidelity(b.state, ideal)));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-10 && secs < 10,
            fmt("%.0f cases, max |1-F|=%.2e, %.2f s", cases, worst, secs)};
}

Verdict truth_table() {
    double worst = 0;
    for (int bits = 0; bits < 16; ++bits) {
        const int cp = bits >> 3 & 1, cm = bits >> 2 & 1, tp = bits >> 1 & 1, tm = bits & 1;
        auto spec = [](int p, int m) {
            return Spec::basis(p ? Pol::L : Pol::R, m ? Spatial::mode2 : Spatial::mode1);
        };
        // control unchanged; target polarization flips on L, mode flips on mode 2
        HyperState expect(2, 0);
        expect.set_amplitude(BasisLabel{}
                                 .with(BasisLabel::pol_bit(0), cp)
                                 .with(BasisLabel::spatial_bit(0), cm)
                                 .with(BasisLabel::pol_bit(1), tp ^ cp)
                                 .with(BasisLabel::spatial_bit(1), tm ^ cm),
                             1);
        const auto out = hyper_cnot(spec(cp, cm), spec(tp, tm), practical());
        for (const auto &b : out.branches)
            worst = std::max(worst, std::abs(1 - fidelity(b.state, expect)));
    }
    return {worst <= 1e-12, fmt("16 inputs, max |1-F|=%.2e", worst)};
}

Verdict control_traversal() {
    std::mt19937_64 rng(8);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto bc = block_coeffs(analysis::random_params(rng));
        const auto a = analysis::random_photon(rng);
        const auto b = analysis::random_photon(rng);
        const auto out = traverse_control(init_state(std::vector{a, b}), bc, bc.T);
        HyperState expect(2, 2);
        for (int bits = 0; bits < 16; ++bits) {
            const int pol = bits & 1, sp = bits >> 1 & 1, bp = bits >> 2 & 1,
                      bs = bits >> 3 & 1;
            // spin 1 follows the control polarization, spin 2 its spatial mode
            const auto label = BasisLabel(static_cast<BasisLabel::Bits>(bits))
                                   .with(BasisLabel::spin_bit(2, SpinId::qd1), pol)
                                   .with(BasisLabel::spin_bit(2, SpinId::qd2), sp);
            expect.set_amplitude(label, bc.T * bc.T * a.pol[pol] * a.spatial[sp] *
                                            b.pol[bp] * b.spatial[bs]);
        }
        worst = std::max(worst, max_abs_difference(out, expect));
    }
    return {worst <= 1e-12, fmt("100 inputs, max amplitude deviation=%.2e", worst)};
}

Verdict conservation() {
    std::mt19937_64 rng(606);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        GateConfig<double> cfg;
        cfg.params = analysis::random_params(rng);
        cfg.n_targets = 1 + i % 3;
        const auto c = analysis::random_photon(rng);
        std::vector<Spec> ts;
        for (unsigned n = 0; n < cfg.n_targets; ++n)
            ts.push_back(analysis::random_photon(rng));
        const auto out = hyper_cnot_n(c, ts, cfg);
        const double sum = out.success_prob + out.heralded[0] + out.heralded[1] +
                           out.absorbed_prob;
        worst = std::max({worst, std::abs(sum - 1), std::abs(out.total_probability - 1)});
    }
    return {worst <= 1e-12, fmt("100 parameter sets, max |total-1|=%.2e", worst)};
}

Verdict scattering_identities() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    double worst_rt = 0, worst_dt = 0, max_bound = 0;
    for (int i = 0; i < 10000; ++i) {
        CavityParams<double> p;
        p.kappa = 0.01 + 10 * u(rng);
        p.kappa_s = 5 * u(rng) * p.kappa;
        p.gamma = 2 * u(rng) * p.kappa;
        p.g = 20 * u(rng) * p.kappa;
        p.omega_c = 4 * (u(rng) - 0.5);
        p.omega_x = 4 * (u(rng) - 0.5);
        const auto s = scatter_coeffs(p);
        const auto bc = block_coeffs(s);
        worst_rt = std::max({worst_rt, std::abs(s.r - 1.0 - s.t), std::abs(s.r0 - 1.0 - s.t0)});
        worst_dt = std::max({worst_dt, std::abs(bc.D + bc.T - s.r - s.t),
                             std::abs(bc.D - bc.T - s.r0 - s.t0)});
        max_bound = std::max(max_bound, std::norm(bc.D) + std::norm(bc.T));
    }
    return {worst_rt <= 1e-15 && worst_dt <= 1e-15 && max_bound <= 1 + 1e-15,
            fmt("10^4 draws, r-(1+t)=%.1e D+-T=%.1e max|D|^2+|T|^2=%.17g", worst_rt,
                worst_dt, max_bound)};
}

Verdict dephasing() {
    const double pen = dephasing_penalty(DephasingParams<double>{4.5e-9, 2.6e-6});
    return {pen >= 0.0015 && pen <= 0.002, fmt("penalty=%.6f", pen)};
}

Verdict sampled_consistency() {
    auto cfg = practical();
    cfg.mode = GateMode::sampled;
    cfg.rng_seed = 20261019;
    const std::uint64_t n = 100000;
    const auto tally = sample_shots(Spec::uniform(), {Spec::uniform()}, cfg, n);
    const double p = 0.6513;
    const double sigma = std::sqrt(p * (1 - p) / n);
    const double dev = std::abs(tally.success_frequency() - p);
    return {dev <= 3 * sigma,
            fmt("frequency=%.5f, |dev|/sigma=%.2f", tally.success_frequency(), dev / sigma)};
}

Verdict efficiency_shape() {
    const std::vector<double> gs{0.5, 1, 2, 3, 5}, ks{0, 0.1, 0.5, 1};
    const auto rows = analysis::sweep_efficiency(analysis::SweepGrid{gs, ks});
    auto at = [&](std::size_t i, std::size_t j) { return rows[i * ks.size() + j].efficiency; };
    bool ok = rows.size() == gs.size() * ks.size();
    for (std::size_t i = 0; ok && i < gs.size(); ++i)
        for (std::size_t j = 0; j < ks.size(); ++j) {
            if (i + 1 < gs.size() && !(at(i, j) < at(i + 1, j)))
                ok = false;
            if (j + 1 < ks.size() && !(at(i, j) > at(i, j + 1)))
                ok = false;
        }
    return {ok, fmt("5x4 grid, efficiency %.4f (g=0.5,ks=1) .. %.4f (g=5,ks=0)",
                    at(0, ks.size() - 1), at(gs.size() - 1, 0))};
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria{
        {"two-photon efficiency", efficiency_two_photon},
        {"multi-target efficiency", efficiency_multi_target},
        {"self-error-correction fidelity", self_correction},
        {"hyper-basis truth table", truth_table},
        {"control traversal state", control_traversal},
        {"probability conservation", conservation},
        {"scattering identities", scattering_identities},
        {"dephasing estimate", dephasing},
        {"sampled-mode consistency", sampled_consistency},
        {"efficiency grid shape", efficiency_shape},
    };
    int failures = 0;
    int id = 0;
    for (const auto &[name, check] : criteria) {
        ++id;
        Verdict v;
        try {
            v = check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name,
                    v.detail.c_str());
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", id - failures, id);
    return failures == 0 ? 0 : 1;
}
