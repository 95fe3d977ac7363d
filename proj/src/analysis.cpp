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

#include "hypercnot/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hypercnot/oracle.hpp"

namespace hypercnot::analysis {

void validate(const SweepGrid &grid) {
    if (grid.g_ratio.empty() || grid.ks_ratio.empty())
        throw ValidationError("sweep axes must be non-empty");
    auto check = [](const std::vector<double> &axis, const char *name) {
        for (double v : axis)
            if (!std::isfinite(v) || v < 0)
                throw ValidationError(std::string(name) +
                                      " values must be finite and >= 0");
    };
    check(grid.g_ratio, "g_ratio");
    check(grid.ks_ratio, "ks_ratio");
    if (!std::isfinite(grid.gamma_ratio) || grid.gamma_ratio < 0)
        throw ValidationError("gamma_ratio must be finite and >= 0");
    if (grid.n_targets < 1)
        throw ValidationError("n_targets must be at least 1");
}

CavityParams<double> grid_params(const SweepGrid &grid, double g_ratio,
                                 double ks_ratio) {
    auto p = CavityParams<double>::resonant(g_ratio, ks_ratio, grid.gamma_ratio);
    p.omega_c = grid.detuning_c;
    p.omega_x = grid.detuning_x;
    return p;
}

namespace {

double worst_branch_fidelity(const GateOutcome<double> &out,
                             const BasicHyperState<double> &ideal) {
    double worst = 1.0;
    for (const auto &b : out.branches)
        worst = std::min(worst, fidelity(b.state, ideal));
    return worst;
}

} // namespace

std::vector<SweepRow> sweep_efficiency(const SweepGrid &grid) {
    validate(grid);
    const auto photon = PhotonSpec<double>::uniform();
    const std::vector<PhotonSpec<double>> targets(grid.n_targets, photon);
    const auto ideal = ideal_hyper_cnot_n(photon, targets);

    std::vector<SweepRow> rows;
    rows.reserve(grid.g_ratio.size() * grid.ks_ratio.size());
    for (double g : grid.g_ratio) {
        for (double ks : grid.ks_ratio) {
            GateConfig<double> cfg;
            cfg.params = grid_params(grid, g, ks);
            cfg.n_targets = grid.n_targets;
            const auto bc = block_coeffs(cfg.params);

            SweepRow row;
            row.g_ratio = g;
            row.ks_ratio = ks;
            row.abs_T = std::abs(bc.T);
            row.efficiency = efficiency(bc.T, grid.n_targets);
            if (row.abs_T > 0) {
                const auto out = hyper_cnot_n(photon, targets, cfg);
                row.success_prob = out.success_prob;
                row.fidelity = worst_branch_fidelity(out, ideal);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

PhotonSpec<double> random_photon(std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    auto pair = [&] {
        std::array<std::complex<double>, 2> c;
        double n = 0;
        do {
            c = {std::complex<double>{normal(rng), normal(rng)},
                 std::complex<double>{normal(rng), normal(rng)}};
            n = std::sqrt(std::norm(c[0]) + std::norm(c[1]));
        } while (n < 1e-6);
        c[0] /= n;
        c[1] /= n;
        return c;
    };
    PhotonSpec<double> spec;
    spec.pol = pair();
    spec.spatial = pair();
    return spec;
}

CavityParams<double> random_params(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> g_ratio(0.2, 5.0);
    std::uniform_real_distribution<double> ks_ratio(0.0, 1.0);
    std::uniform_real_distribution<double> gamma_ratio(0.05, 0.2);
    std::uniform_real_distribution<double> detuning(-1.0, 1.0);
    auto p = CavityParams<double>::resonant(g_ratio(rng), ks_ratio(rng),
                                            gamma_ratio(rng));
    p.omega = 0;
    p.omega_c = detuning(rng);
    p.omega_x = detuning(rng);
    return p;
}

ScanSummary fidelity_scan(const ScanOptions &opts) {
    if (opts.n_cases < 1)
        throw ValidationError("fidelity scan needs at least one case");
    if (opts.n_targets < 1)
        throw ValidationError("n_targets must be at least 1");
    std::mt19937_64 rng(opts.seed);

    ScanSummary summary;
    double fidelity_sum = 0;
    std::uint64_t fidelity_count = 0;
    for (std::uint64_t c = 0; c < opts.n_cases; ++c) {
        GateConfig<double> cfg;
        cfg.n_targets = opts.n_targets;
        cfg.mirror_T_override = opts.mirror_T;
        do {
            cfg.params = random_params(rng);
        } while (std::abs(block_coeffs(cfg.params).T) <= opts.min_abs_T);

        const auto control = random_photon(rng);
        std::vector<PhotonSpec<double>> targets;
        for (unsigned n = 0; n < opts.n_targets; ++n)
            targets.push_back(random_photon(rng));

        const auto out = hyper_cnot_n(control, targets, cfg);
        const auto ideal = ideal_hyper_cnot_n(control, targets);
        for (const auto &b : out.branches) {
            const double f = fidelity(b.state, ideal);
            summary.min_fidelity = std::min(summary.min_fidelity, f);
            fidelity_sum += f;
            ++fidelity_count;
            summary.max_outcome_imbalance =
                std::max(summary.max_outcome_imbalance,
                         std::abs(b.probability - out.success_prob / 4));
        }
        if (out.branches.size() != 4)
            summary.max_outcome_imbalance =
                std::max(summary.max_outcome_imbalance, out.success_prob / 4);
        summary.max_success_deviation =
            std::max(summary.max_success_deviation,
                     std::abs(out.success_prob -
                              efficiency(out.block.T, opts.n_targets)));
        summary.max_conservation_deviation =
            std::max(summary.max_conservation_deviation,
                     std::abs(out.total_probability - 1.0));
        ++summary.n_cases;
    }
    summary.mean_fidelity = fidelity_sum / static_cast<double>(fidelity_count);
    return summary;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string &field, std::size_t line) {
    double v = 0;
    const char *first = field.data();
    const char *last = first + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ValidationError("report line " + std::to_string(line) +
                              ": bad number '" + field + "'");
    return v;
}

nlohmann::json to_json(const SweepRow &r) {
    return {{"g_ratio", r.g_ratio},   {"ks_ratio", r.ks_ratio},
            {"abs_T", r.abs_T},       {"efficiency", r.efficiency},
            {"success_prob", r.success_prob}, {"fidelity", r.fidelity}};
}

} // namespace

void emit_report(const std::vector<SweepRow> &rows, ReportFormat format,
                 std::ostream &out) {
    if (rows.empty())
        throw ValidationError("refusing to write an empty report");
    if (format == ReportFormat::csv) {
        out << kCsvHeader << '\n';
        for (const auto &r : rows)
            out << format_double(r.g_ratio) << ',' << format_double(r.ks_ratio)
                << ',' << format_double(r.abs_T) << ','
                << format_double(r.efficiency) << ','
                << format_double(r.success_prob) << ','
                << format_double(r.fidelity) << '\n';
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &r : rows)
            arr.push_back(to_json(r));
        out << arr.dump(2) << '\n';
    }
}

void emit_report(const std::vector<SweepRow> &rows, ReportFormat format,
                 const std::filesystem::path &destination) {
    if (rows.empty())
        throw ValidationError("refusing to write an empty report");
    std::ofstream file(destination);
    if (!file)
        throw ReportIoError("cannot open '" + destination.string() +
                            "' for writing");
    emit_report(rows, format, file);
    file.flush();
    if (!file)
        throw ReportIoError("write to '" + destination.string() + "' failed");
}

std::vector<SweepRow> parse_report(std::istream &in, ReportFormat format) {
    std::vector<SweepRow> rows;
    if (format == ReportFormat::json) {
        nlohmann::json arr;
        try {
            in >> arr;
        } catch (const nlohmann::json::exception &e) {
            throw ValidationError(std::string("report is not valid JSON: ") +
                                  e.what());
        }
        if (!arr.is_array())
            throw ValidationError("JSON report must be an array");
        for (const auto &obj : arr) {
            try {
                rows.push_back({obj.at("g_ratio").get<double>(),
                                obj.at("ks_ratio").get<double>(),
                                obj.at("abs_T").get<double>(),
                                obj.at("efficiency").get<double>(),
                                obj.at("success_prob").get<double>(),
                                obj.at("fidelity").get<double>()});
            } catch (const nlohmann::json::exception &e) {
                throw ValidationError(std::string("bad report row: ") + e.what());
            }
        }
        return rows;
    }

    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ValidationError("CSV report header mismatch");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 6)
            throw ValidationError("report line " + std::to_string(lineno) +
                                  ": expected 6 columns");
        rows.push_back({parse_double(fields[0], lineno),
                        parse_double(fields[1], lineno),
                        parse_double(fields[2], lineno),
                        parse_double(fields[3], lineno),
                        parse_double(fields[4], lineno),
                        parse_double(fields[5], lineno)});
    }
    return rows;
}

} // namespace hypercnot::analysis
