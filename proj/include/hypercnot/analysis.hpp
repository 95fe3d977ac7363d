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
 * Parameter sweeps, randomized fidelity scans and tabular reports.
 *
 * Sweeps run at resonance with kappa = 1, so the axes are the dimensionless
 * ratios g/(kappa+kappa_s) and kappa_s/kappa.
 */

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercnot/gates.hpp"

namespace hypercnot::analysis {

struct SweepGrid {
    std::vector<double> g_ratio;
    std::vector<double> ks_ratio;
    double gamma_ratio{0.1};
    double detuning_c{0}; ///< omega_c - omega, in units of kappa
    double detuning_x{0}; ///< omega_x - omega, in units of kappa
    unsigned n_targets{1};
};

void validate(const SweepGrid &grid);

struct SweepRow {
    double g_ratio{0};
    double ks_ratio{0};
    double abs_T{0};
    double efficiency{0};
    double success_prob{0};
    /// Worst spin-outcome fidelity against the ideal gate; 0 when no photon
    /// survives.
    double fidelity{0};

    friend bool operator==(const SweepRow &, const SweepRow &) = default;
};

/// Kappa = 1 parameters for one grid point.
CavityParams<double> grid_params(const SweepGrid &grid, double g_ratio,
                                 double ks_ratio);

/// One row per (g_ratio, ks_ratio), g_ratio varying slowest. Each point runs
/// the full gate on the uniform superposition input (both DOFs, all photons).
std::vector<SweepRow> sweep_efficiency(const SweepGrid &grid);

struct ScanOptions {
    std::uint64_t n_cases{200};
    std::uint64_t seed{1};
    unsigned n_targets{1};
    /// Fixed mirror transmission instead of the block T.
    std::optional<std::complex<double>> mirror_T;
    /// Cases with |T| at or below this are redrawn.
    double min_abs_T{1e-3};
};

struct ScanSummary {
    std::uint64_t n_cases{0};
    double min_fidelity{1};
    double mean_fidelity{0};
    /// max |success_prob - |T|^(4(N+1))|
    double max_success_deviation{0};
    /// max |coherent + sinks - 1|
    double max_conservation_deviation{0};
    /// max |branch probability - success_prob / 4|
    double max_outcome_imbalance{0};

    friend bool operator==(const ScanSummary &, const ScanSummary &) = default;
};

/// Random photon inputs and random cavity parameters drawn from
/// g/(kappa+kappa_s) in [0.2, 5], kappa_s/kappa in [0, 1], gamma/kappa in
/// [0.05, 0.2], detunings in [-kappa, kappa].
ScanSummary fidelity_scan(const ScanOptions &opts);

/// Random normalized photon spec (uniform on each coefficient sphere).
PhotonSpec<double> random_photon(std::mt19937_64 &rng);
CavityParams<double> random_params(std::mt19937_64 &rng);

enum class ReportFormat { csv, json };

inline constexpr const char *kCsvHeader =
    "g_ratio,ks_ratio,abs_T,efficiency,success_prob,fidelity";

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

void emit_report(const std::vector<SweepRow> &rows, ReportFormat format,
                 std::ostream &out);
/// Writes to a file; I/O failures raise ReportIoError naming the path.
void emit_report(const std::vector<SweepRow> &rows, ReportFormat format,
                 const std::filesystem::path &destination);

std::vector<SweepRow> parse_report(std::istream &in, ReportFormat format);

class ReportIoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace hypercnot::analysis
