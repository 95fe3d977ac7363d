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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypercnot/analysis.hpp"
#include "hypercnot/gates.hpp"

namespace hypercnot::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kValidation = 2,
    kDegenerate = 3,
    kIo = 4,
};

/// Parses `pol=(re,im),(re,im);spat=(re,im),(re,im)` or the shorthand
/// `<pol>,<mode>` with pol in {R, L, +} and mode in {a1, a2, b1, b2, 1, 2, +}.
/// Either half of the long form may also use a shorthand (`pol=+;spat=a2`).
PhotonSpec<double> parse_photon_spec(std::string_view text,
                                     const std::string &name = "photon");

/// `start:stop:step` (inclusive) or a comma-separated list.
std::vector<double> parse_axis(std::string_view text, const std::string &name);

/// Every physical input is optional; unset fields fall back to kappa = 1,
/// kappa_s/kappa = 0.1, gamma/kappa = 0.1, g/(kappa+kappa_s) = 3, resonance.
/// Raw values win over ratios.
struct ParamInputs {
    std::optional<double> g, kappa, kappa_s, gamma, detuning_c, detuning_x;
    std::optional<double> g_ratio, ks_ratio, gamma_ratio;

    /// Fields set in `over` replace ours.
    void merge(const ParamInputs &over);
    CavityParams<double> resolve() const;
};

enum class OutputFormat { text, csv, json };

struct RunSpec {
    std::optional<std::string> gate; ///< "cnot" or "cnotn"
    std::optional<PhotonSpec<double>> control;
    std::vector<PhotonSpec<double>> targets;
    ParamInputs params;
    std::optional<unsigned> n_targets;
    std::optional<GateMode> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::complex<double>> mirror_override;
    std::optional<OutputFormat> format;
    std::optional<std::string> out;
    std::optional<std::uint64_t> shots;

    /// Fields set in `over` replace ours; a non-empty target list replaces
    /// the whole list.
    void merge(const RunSpec &over);
};

/// Reads a RunSpec JSON document. Malformed content raises ValidationError.
RunSpec parse_run_spec_json(std::string_view text);
RunSpec load_run_spec(const std::string &path);

/// Complex number from `x`, `re,im` or `(re,im)`.
std::complex<double> parse_complex(std::string_view text, const std::string &name);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

} // namespace hypercnot::cli
