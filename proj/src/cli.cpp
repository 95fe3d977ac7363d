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

#include "hypercnot/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypercnot/oracle.hpp"

namespace hypercnot::cli {

using json = nlohmann::json;
using Complex = std::complex<double>;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, const std::string &name) {
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} ||
        res.ptr != text.data() + text.size() || !std::isfinite(v))
        throw ValidationError(name + ": '" + std::string(text) +
                              "' is not a finite number");
    return v;
}

std::uint64_t parse_count(std::string_view text, const std::string &name) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} ||
        res.ptr != text.data() + text.size())
        throw ValidationError(name + ": '" + std::string(text) +
                              "' is not a non-negative integer");
    return v;
}

/// Splits on commas that are not inside parentheses.
std::vector<std::string_view> split_top_level(std::string_view s) {
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(')
            ++depth;
        else if (s[i] == ')')
            --depth;
        else if (s[i] == ',' && depth == 0) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    parts.push_back(trim(s.substr(start)));
    return parts;
}

std::array<Complex, 2> pol_shorthand(std::string_view tok, const std::string &name,
                                     bool &ok) {
    const double h = 1.0 / std::sqrt(2.0);
    ok = true;
    if (tok == "R")
        return {Complex{1}, Complex{0}};
    if (tok == "L")
        return {Complex{0}, Complex{1}};
    if (tok == "+")
        return {Complex{h}, Complex{h}};
    ok = false;
    (void)name;
    return {};
}

std::array<Complex, 2> spatial_shorthand(std::string_view tok, bool &ok) {
    const double h = 1.0 / std::sqrt(2.0);
    ok = true;
    if (tok == "a1" || tok == "b1" || tok == "1")
        return {Complex{1}, Complex{0}};
    if (tok == "a2" || tok == "b2" || tok == "2")
        return {Complex{0}, Complex{1}};
    if (tok == "+")
        return {Complex{h}, Complex{h}};
    ok = false;
    return {};
}

std::array<Complex, 2> coefficient_pair(std::string_view text,
                                        const std::string &name) {
    const auto parts = split_top_level(text);
    if (parts.size() != 2)
        throw ValidationError(name + ": expected two coefficients, got '" +
                              std::string(text) + "'");
    return {parse_complex(parts[0], name), parse_complex(parts[1], name)};
}

} // namespace

Complex parse_complex(std::string_view text, const std::string &name) {
    text = trim(text);
    if (text.size() >= 2 && text.front() == '(' && text.back() == ')')
        text = trim(text.substr(1, text.size() - 2));
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        return {parse_number(text, name), 0.0};
    return {parse_number(text.substr(0, comma), name),
            parse_number(text.substr(comma + 1), name)};
}

PhotonSpec<double> parse_photon_spec(std::string_view text,
                                     const std::string &name) {
    text = trim(text);
    if (text.empty())
        throw ValidationError(name + ": empty photon spec");
    PhotonSpec<double> spec;
    bool ok = false;

    if (text.find('=') == std::string_view::npos) {
        if (text == "+")
            return PhotonSpec<double>::uniform();
        const auto parts = split_top_level(text);
        if (parts.size() != 2)
            throw ValidationError(name + ": expected '<pol>,<mode>' shorthand, got '" +
                                  std::string(text) + "'");
        spec.pol = pol_shorthand(parts[0], name, ok);
        if (!ok)
            throw ValidationError(name + ": unknown polarization '" +
                                  std::string(parts[0]) + "' (use R, L or +)");
        spec.spatial = spatial_shorthand(parts[1], ok);
        if (!ok)
            throw ValidationError(name + ": unknown spatial mode '" +
                                  std::string(parts[1]) +
                                  "' (use a1, a2, b1, b2, 1, 2 or +)");
        validate(spec, name);
        return spec;
    }

    bool have_pol = false, have_spat = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos)
            end = text.size();
        const auto field = trim(text.substr(start, end - start));
        start = end + 1;
        if (field.empty())
            continue;
        const auto eq = field.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError(name + ": expected key=value in '" +
                                  std::string(field) + "'");
        const auto key = trim(field.substr(0, eq));
        const auto value = trim(field.substr(eq + 1));
        if (key == "pol") {
            spec.pol = pol_shorthand(value, name, ok);
            if (!ok)
                spec.pol = coefficient_pair(value, name + " pol");
            have_pol = true;
        } else if (key == "spat" || key == "spatial") {
            spec.spatial = spatial_shorthand(value, ok);
            if (!ok)
                spec.spatial = coefficient_pair(value, name + " spat");
            have_spat = true;
        } else {
            throw ValidationError(name + ": unknown key '" + std::string(key) +
                                  "' (use pol= and spat=)");
        }
    }
    if (!have_pol || !have_spat)
        throw ValidationError(name + ": both pol= and spat= are required");
    validate(spec, name);
    return spec;
}

std::vector<double> parse_axis(std::string_view text, const std::string &name) {
    text = trim(text);
    if (text.empty())
        throw ValidationError(name + ": empty axis");
    std::vector<double> values;
    if (text.find(':') != std::string_view::npos) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i)
            if (i == text.size() || text[i] == ':') {
                parts.push_back(text.substr(start, i - start));
                start = i + 1;
            }
        if (parts.size() != 3)
            throw ValidationError(name + ": range must be start:stop:step");
        const double lo = parse_number(parts[0], name);
        const double hi = parse_number(parts[1], name);
        const double step = parse_number(parts[2], name);
        if (!(step > 0))
            throw ValidationError(name + ": step must be positive");
        if (hi < lo)
            throw ValidationError(name + ": stop is below start");
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        if (n > 1000000)
            throw ValidationError(name + ": too many points");
        for (std::size_t i = 0; i < n; ++i)
            values.push_back(lo + static_cast<double>(i) * step);
    } else {
        for (auto part : split_top_level(text))
            values.push_back(parse_number(part, name));
    }
    for (double v : values)
        if (v < 0)
            throw ValidationError(name + ": values must be >= 0");
    return values;
}

void ParamInputs::merge(const ParamInputs &over) {
    auto take = [](std::optional<double> &dst, const std::optional<double> &src) {
        if (src)
            dst = src;
    };
    take(g, over.g);
    take(kappa, over.kappa);
    take(kappa_s, over.kappa_s);
    take(gamma, over.gamma);
    take(detuning_c, over.detuning_c);
    take(detuning_x, over.detuning_x);
    take(g_ratio, over.g_ratio);
    take(ks_ratio, over.ks_ratio);
    take(gamma_ratio, over.gamma_ratio);
}

CavityParams<double> ParamInputs::resolve() const {
    CavityParams<double> p;
    p.kappa = kappa.value_or(1.0);
    p.kappa_s = kappa_s ? *kappa_s : ks_ratio.value_or(0.1) * p.kappa;
    p.gamma = gamma ? *gamma : gamma_ratio.value_or(0.1) * p.kappa;
    p.g = g ? *g : g_ratio.value_or(3.0) * (p.kappa + p.kappa_s);
    p.omega = 0;
    p.omega_c = detuning_c.value_or(0.0);
    p.omega_x = detuning_x.value_or(0.0);
    validate(p);
    return p;
}

void RunSpec::merge(const RunSpec &over) {
    if (over.gate)
        gate = over.gate;
    if (over.control)
        control = over.control;
    if (!over.targets.empty())
        targets = over.targets;
    params.merge(over.params);
    if (over.n_targets)
        n_targets = over.n_targets;
    if (over.mode)
        mode = over.mode;
    if (over.seed)
        seed = over.seed;
    if (over.mirror_override)
        mirror_override = over.mirror_override;
    if (over.format)
        format = over.format;
    if (over.out)
        out = over.out;
    if (over.shots)
        shots = over.shots;
}

namespace {

GateMode parse_mode(std::string_view s) {
    if (s == "amplitude")
        return GateMode::amplitude;
    if (s == "sampled")
        return GateMode::sampled;
    throw ValidationError("mode: '" + std::string(s) +
                          "' (use amplitude or sampled)");
}

OutputFormat parse_format(std::string_view s) {
    if (s == "text")
        return OutputFormat::text;
    if (s == "csv")
        return OutputFormat::csv;
    if (s == "json")
        return OutputFormat::json;
    throw ValidationError("format: '" + std::string(s) +
                          "' (use text, csv or json)");
}

Complex json_complex(const json &j, const std::string &name) {
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_string())
        return parse_complex(j.get<std::string>(), name);
    throw ValidationError(name + ": expected a number, [re, im] or \"re,im\"");
}

PhotonSpec<double> json_photon(const json &j, const std::string &name) {
    if (j.is_string())
        return parse_photon_spec(j.get<std::string>(), name);
    if (!j.is_object())
        throw ValidationError(name + ": expected a string or an object");
    PhotonSpec<double> spec;
    for (const auto &[key, value] : j.items()) {
        std::array<Complex, 2> *dst = nullptr;
        if (key == "pol")
            dst = &spec.pol;
        else if (key == "spat" || key == "spatial")
            dst = &spec.spatial;
        else
            throw ValidationError(name + ": unknown field '" + key + "'");
        if (!value.is_array() || value.size() != 2)
            throw ValidationError(name + "." + key +
                                  ": expected two coefficients");
        (*dst)[0] = json_complex(value[0], name + "." + key);
        (*dst)[1] = json_complex(value[1], name + "." + key);
    }
    if (!j.contains("pol") || !(j.contains("spat") || j.contains("spatial")))
        throw ValidationError(name + ": both pol and spatial are required");
    validate(spec, name);
    return spec;
}

double json_number(const json &j, const std::string &name) {
    if (!j.is_number())
        throw ValidationError(name + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw ValidationError(name + ": must be finite");
    return v;
}

std::uint64_t json_count(const json &j, const std::string &name) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw ValidationError(name + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

} // namespace

RunSpec parse_run_spec_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("run spec is not valid JSON: ") +
                              e.what());
    }
    if (!doc.is_object())
        throw ValidationError("run spec must be a JSON object");

    RunSpec spec;
    for (const auto &[key, value] : doc.items()) {
        if (key == "gate") {
            if (!value.is_string())
                throw ValidationError("gate: expected a string");
            spec.gate = value.get<std::string>();
        } else if (key == "control") {
            spec.control = json_photon(value, "control");
        } else if (key == "targets" || key == "target") {
            if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i)
                    spec.targets.push_back(
                        json_photon(value[i], "target " + std::to_string(i)));
            } else {
                spec.targets.push_back(json_photon(value, "target 0"));
            }
        } else if (key == "params") {
            if (!value.is_object())
                throw ValidationError("params: expected an object");
            static const std::map<std::string,
                                  std::optional<double> ParamInputs::*>
                fields{{"g", &ParamInputs::g},
                       {"kappa", &ParamInputs::kappa},
                       {"kappa_s", &ParamInputs::kappa_s},
                       {"gamma", &ParamInputs::gamma},
                       {"detuning_c", &ParamInputs::detuning_c},
                       {"detuning_x", &ParamInputs::detuning_x},
                       {"g_ratio", &ParamInputs::g_ratio},
                       {"ks_ratio", &ParamInputs::ks_ratio},
                       {"gamma_ratio", &ParamInputs::gamma_ratio}};
            for (const auto &[pk, pv] : value.items()) {
                const auto it = fields.find(pk);
                if (it == fields.end())
                    throw ValidationError("params: unknown field '" + pk + "'");
                spec.params.*(it->second) = json_number(pv, "params." + pk);
            }
        } else if (key == "n_targets") {
            const auto n = json_count(value, "n_targets");
            if (n < 1 || n > BasisLabel::kMaxPhotons - 1)
                throw ValidationError("n_targets: out of range");
            spec.n_targets = static_cast<unsigned>(n);
        } else if (key == "mode") {
            if (!value.is_string())
                throw ValidationError("mode: expected a string");
            spec.mode = parse_mode(value.get<std::string>());
        } else if (key == "seed") {
            spec.seed = json_count(value, "seed");
        } else if (key == "mirror_override") {
            spec.mirror_override = json_complex(value, "mirror_override");
        } else if (key == "format") {
            if (!value.is_string())
                throw ValidationError("format: expected a string");
            spec.format = parse_format(value.get<std::string>());
        } else if (key == "out") {
            if (!value.is_string())
                throw ValidationError("out: expected a string");
            spec.out = value.get<std::string>();
        } else if (key == "shots") {
            spec.shots = json_count(value, "shots");
        } else {
            throw ValidationError("run spec: unknown field '" + key + "'");
        }
    }
    return spec;
}

class InputIoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

RunSpec load_run_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputIoError("cannot read params file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_run_spec_json(ss.str());
    } catch (const ValidationError &e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Formatting helpers

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string fmt_complex(Complex c) {
    return "(" + fmt12(c.real()) + "," + fmt12(c.imag()) + ")";
}

std::string photon_label(BasisLabel label, std::size_t photon) {
    std::string s = to_string(label.pol(photon));
    s += ',';
    s += photon == 0 ? 'a' : 'b';
    s += label.spatial(photon) == Spatial::mode1 ? '1' : '2';
    return s;
}

std::string corrections_text(const Corrections &c) {
    if (!c.pol_phase && !c.spatial_phase)
        return "none";
    std::string s;
    if (c.pol_phase)
        s += "pol_phase";
    if (c.spatial_phase)
        s += s.empty() ? "spatial_phase" : "+spatial_phase";
    return s;
}

std::string spins_text(const SpinRecord &r) {
    return std::string(to_string(r.spin1)) + "," + to_string(r.spin2);
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json state_json(const HyperState &s) {
    json obj = json::object();
    for (const auto &[label, amp] : s.amplitudes())
        if (amp != Complex{})
            obj[format_label(label, s.n_photons(), s.n_spins())] =
                complex_json(amp);
    return obj;
}

void print_state(std::ostream &out, const HyperState &s,
                 const std::string &indent) {
    for (const auto &[label, amp] : s.amplitudes())
        if (amp != Complex{})
            out << indent << format_label(label, s.n_photons(), s.n_spins())
                << "  " << fmt_complex(amp) << '\n';
}

/// Largest-magnitude basis label of a photon-only state.
BasisLabel dominant_label(const HyperState &s) {
    BasisLabel best{};
    double best_mag = -1;
    for (const auto &[label, amp] : s.amplitudes())
        if (std::abs(amp) > best_mag) {
            best_mag = std::abs(amp);
            best = label;
        }
    return best;
}

double worst_fidelity(const GateOutcome<double> &out, const HyperState &ideal) {
    double worst = 1;
    for (const auto &b : out.branches)
        worst = std::min(worst, fidelity(b.state, ideal));
    return worst;
}

/// Destination stream: stdout unless --out names a file.
class Sink {
  public:
    Sink(std::ostream &fallback, const std::optional<std::string> &path)
        : stream_(&fallback) {
        if (path) {
            path_ = *path;
            file_.open(*path);
            if (!file_)
                throw analysis::ReportIoError("cannot open '" + *path +
                                              "' for writing");
            stream_ = &file_;
        }
    }
    std::ostream &stream() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_)
            throw analysis::ReportIoError(
                "write to '" + (path_.empty() ? std::string("stdout") : path_) +
                "' failed");
    }

  private:
    std::ofstream file_;
    std::ostream *stream_;
    std::string path_;
};

struct ResolvedGate {
    PhotonSpec<double> control;
    std::vector<PhotonSpec<double>> targets;
    GateConfig<double> cfg;
    std::string gate;
};

ResolvedGate resolve_gate(const RunSpec &spec) {
    ResolvedGate g;
    if (!spec.control)
        throw ValidationError("missing control photon (--control)");
    if (spec.targets.empty())
        throw ValidationError("missing target photon spec (--target)");
    g.control = *spec.control;
    g.targets = spec.targets;
    g.gate = spec.gate.value_or(
        spec.targets.size() == 1 && spec.n_targets.value_or(1) == 1 ? "cnot"
                                                                     : "cnotn");
    if (g.gate == "cnot") {
        if (g.targets.size() != 1)
            throw ValidationError("gate cnot takes exactly one target photon");
        if (spec.n_targets && *spec.n_targets != 1)
            throw ValidationError("gate cnot requires --n-targets 1");
    } else if (g.gate == "cnotn") {
        const unsigned n = spec.n_targets.value_or(
            static_cast<unsigned>(g.targets.size()));
        if (n < 1)
            throw ValidationError("n_targets must be at least 1");
        if (g.targets.size() == 1 && n > 1)
            g.targets.assign(n, g.targets.front());
        else if (g.targets.size() != n)
            throw ValidationError("--n-targets " + std::to_string(n) +
                                  " does not match " +
                                  std::to_string(g.targets.size()) +
                                  " target photon specs");
    } else {
        throw ValidationError("gate: '" + g.gate + "' (use cnot or cnotn)");
    }
    g.cfg.params = spec.params.resolve();
    g.cfg.n_targets = static_cast<unsigned>(g.targets.size());
    g.cfg.mirror_T_override = spec.mirror_override;
    g.cfg.mode = spec.mode.value_or(GateMode::amplitude);
    g.cfg.rng_seed = spec.seed;
    return g;
}

void print_shot(std::ostream &out, const ShotRecord<double> &rec,
                OutputFormat format) {
    if (format == OutputFormat::json) {
        json j{{"status", to_string(rec.status)}};
        if (rec.sink)
            j["sink"] = to_string(*rec.sink);
        if (rec.photon)
            j["photon"] = *rec.photon;
        if (!rec.stage.empty())
            j["stage"] = rec.stage;
        if (rec.spin_record) {
            j["spins"] = {to_string(rec.spin_record->spin1),
                          to_string(rec.spin_record->spin2)};
            j["corrections"] = {{"pol_phase", rec.corrections.pol_phase},
                                {"spatial_phase", rec.corrections.spatial_phase}};
        }
        if (rec.state)
            j["state"] = state_json(*rec.state);
        out << j.dump(2) << '\n';
        return;
    }
    out << "shot: " << to_string(rec.status);
    if (rec.sink)
        out << " sink=" << to_string(*rec.sink);
    if (rec.photon)
        out << " photon=" << *rec.photon << " stage=" << rec.stage;
    if (rec.spin_record)
        out << " spins=" << spins_text(*rec.spin_record)
            << " corrections=" << corrections_text(rec.corrections);
    out << '\n';
    if (rec.state)
        print_state(out, *rec.state, "  ");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_run(const RunSpec &spec, std::ostream &stdout_) {
    const auto g = resolve_gate(spec);
    const auto format = spec.format.value_or(OutputFormat::text);
    if (format == OutputFormat::csv)
        throw ValidationError("format csv is not available for run (use text or json)");

    if (g.cfg.mode == GateMode::sampled) {
        if (!g.cfg.rng_seed)
            throw ValidationError("mode sampled needs --seed");
        const auto rec = sample_run(g.control, g.targets, g.cfg);
        Sink sink(stdout_, spec.out);
        print_shot(sink.stream(), rec, format);
        sink.finish();
        return kOk;
    }

    const auto out = hyper_cnot_n(g.control, g.targets, g.cfg);
    const auto ideal = ideal_hyper_cnot_n(g.control, g.targets);
    const unsigned n = g.cfg.n_targets;
    const auto &p = g.cfg.params;

    Sink sink(stdout_, spec.out);
    auto &os = sink.stream();
    if (format == OutputFormat::json) {
        json branches = json::array();
        for (const auto &b : out.branches)
            branches.push_back(
                {{"spins", {to_string(b.record.spin1), to_string(b.record.spin2)}},
                 {"probability", b.probability},
                 {"corrections",
                  {{"pol_phase", b.corrections.pol_phase},
                   {"spatial_phase", b.corrections.spatial_phase}}},
                 {"fidelity", fidelity(b.state, ideal)},
                 {"state", state_json(b.state)}});
        json j{
            {"gate", g.gate},
            {"n_targets", n},
            {"params",
             {{"g", p.g}, {"kappa", p.kappa}, {"kappa_s", p.kappa_s},
              {"gamma", p.gamma}, {"detuning_c", p.omega_c - p.omega},
              {"detuning_x", p.omega_x - p.omega}}},
            {"block", {{"D", complex_json(out.block.D)}, {"T", complex_json(out.block.T)}}},
            {"success_prob", out.success_prob},
            {"efficiency", efficiency(out.block.T, n)},
            {"heralded_failure_prob", out.heralded_failure_prob()},
            {"heralded",
             {{"detector_B1", out.heralded[0]}, {"detector_B2", out.heralded[1]}}},
            {"absorbed_prob", out.absorbed_prob},
            {"spin_record",
             {to_string(out.spin_record.spin1), to_string(out.spin_record.spin2)}},
            {"corrections",
             {{"pol_phase", out.corrections.pol_phase},
              {"spatial_phase", out.corrections.spatial_phase}}},
            {"fidelity", fidelity(out.conditional_state, ideal)},
            {"conditional_state", state_json(out.conditional_state)},
            {"branches", branches}};
        os << j.dump(2) << '\n';
        sink.finish();
        return kOk;
    }

    os << (n == 1 ? "hyper-CNOT" : "hyper-CNOT^" + std::to_string(n))
       << ": control a, " << n << " target photon(s)\n";
    os << "cavity: g=" << fmt12(p.g) << " kappa=" << fmt12(p.kappa)
       << " kappa_s=" << fmt12(p.kappa_s) << " gamma=" << fmt12(p.gamma)
       << " detuning_c=" << fmt12(p.omega_c - p.omega)
       << " detuning_x=" << fmt12(p.omega_x - p.omega) << '\n';
    os << "block: D=" << fmt_complex(out.block.D)
       << " T=" << fmt_complex(out.block.T)
       << " |T|=" << fmt12(std::abs(out.block.T)) << '\n';
    os << "success_prob: " << fmt12(out.success_prob) << '\n';
    os << "efficiency |T|^" << 4 * (n + 1) << ": "
       << fmt12(efficiency(out.block.T, n)) << '\n';
    os << "heralded_failure_prob: " << fmt12(out.heralded_failure_prob())
       << " (detector_B1 " << fmt12(out.heralded[0]) << ", detector_B2 "
       << fmt12(out.heralded[1]) << ")\n";
    os << "absorbed_prob: " << fmt12(out.absorbed_prob) << '\n';
    os << "spin outcomes:\n";
    for (const auto &b : out.branches)
        os << "  spins=" << spins_text(b.record)
           << " probability=" << fmt12(b.probability)
           << " corrections=" << corrections_text(b.corrections)
           << " fidelity=" << fmt12(fidelity(b.state, ideal)) << '\n';
    os << "conditional state (spins " << spins_text(out.spin_record)
       << ", corrections " << corrections_text(out.corrections)
       << ", fidelity " << fmt12(fidelity(out.conditional_state, ideal))
       << "):\n";
    print_state(os, out.conditional_state, "  ");
    sink.finish();
    return kOk;
}

int cmd_truth_table(const RunSpec &spec, std::ostream &stdout_) {
    GateConfig<double> cfg;
    cfg.params = spec.params.resolve();
    cfg.mirror_T_override = spec.mirror_override;
    const auto format = spec.format.value_or(OutputFormat::text);

    struct Row {
        std::string in_c, in_t, out_c, out_t;
        double fid, success;
    };
    std::vector<Row> rows;
    const Pol pols[] = {Pol::R, Pol::L};
    const Spatial modes[] = {Spatial::mode1, Spatial::mode2};
    for (Pol cp : pols)
        for (Spatial cm : modes)
            for (Pol tp : pols)
                for (Spatial tm : modes) {
                    const auto c = PhotonSpec<double>::basis(cp, cm);
                    const auto t = PhotonSpec<double>::basis(tp, tm);
                    const auto out = hyper_cnot(c, t, cfg);
                    const auto ideal = ideal_hyper_cnot_n(
                        c, std::vector<PhotonSpec<double>>{t});
                    const auto in_label =
                        BasisLabel{}
                            .with(BasisLabel::pol_bit(0), cp == Pol::L)
                            .with(BasisLabel::spatial_bit(0), cm == Spatial::mode2)
                            .with(BasisLabel::pol_bit(1), tp == Pol::L)
                            .with(BasisLabel::spatial_bit(1), tm == Spatial::mode2);
                    const auto out_label = dominant_label(out.conditional_state);
                    rows.push_back({photon_label(in_label, 0),
                                    photon_label(in_label, 1),
                                    photon_label(out_label, 0),
                                    photon_label(out_label, 1),
                                    worst_fidelity(out, ideal), out.success_prob});
                }

    Sink sink(stdout_, spec.out);
    auto &os = sink.stream();
    if (format == OutputFormat::json) {
        json arr = json::array();
        for (const auto &r : rows)
            arr.push_back({{"control", r.in_c},
                           {"target", r.in_t},
                           {"out_control", r.out_c},
                           {"out_target", r.out_t},
                           {"fidelity", r.fid},
                           {"success_prob", r.success}});
        os << arr.dump(2) << '\n';
    } else if (format == OutputFormat::csv) {
        os << "control,target,out_control,out_target,fidelity,success_prob\n";
        for (const auto &r : rows)
            os << '"' << r.in_c << "\",\"" << r.in_t << "\",\"" << r.out_c
               << "\",\"" << r.out_t << "\"," << analysis::format_double(r.fid)
               << ',' << analysis::format_double(r.success) << '\n';
    } else {
        os << "control target -> control target  fidelity  success_prob\n";
        for (const auto &r : rows)
            os << r.in_c << "    " << r.in_t << "   -> " << r.out_c << "    "
               << r.out_t << "     " << fmt12(r.fid) << "  "
               << fmt12(r.success) << '\n';
    }
    sink.finish();
    return kOk;
}

int cmd_sweep(const RunSpec &spec, const std::string &g_axis,
              const std::string &ks_axis, std::ostream &stdout_) {
    analysis::SweepGrid grid;
    grid.g_ratio = parse_axis(g_axis, "--g-ratio");
    grid.ks_ratio = parse_axis(ks_axis, "--ks-ratio");
    if (spec.params.g || spec.params.kappa_s || spec.params.kappa)
        throw ValidationError(
            "sweep works in ratios; use --g-ratio/--ks-ratio instead of --g/--kappa/--kappa-s");
    grid.gamma_ratio = spec.params.gamma ? *spec.params.gamma
                                         : spec.params.gamma_ratio.value_or(0.1);
    grid.detuning_c = spec.params.detuning_c.value_or(0.0);
    grid.detuning_x = spec.params.detuning_x.value_or(0.0);
    grid.n_targets = spec.n_targets.value_or(1);

    const auto rows = analysis::sweep_efficiency(grid);
    const auto format = spec.format.value_or(OutputFormat::csv) == OutputFormat::json
                            ? analysis::ReportFormat::json
                            : analysis::ReportFormat::csv;
    if (spec.out) {
        analysis::emit_report(rows, format, std::filesystem::path(*spec.out));
    } else {
        analysis::emit_report(rows, format, stdout_);
    }
    return kOk;
}

int cmd_verify(const RunSpec &spec, std::uint64_t n_cases, std::ostream &stdout_) {
    if (n_cases < 1)
        throw ValidationError("--n-cases must be at least 1");
    analysis::ScanOptions opts;
    opts.n_cases = n_cases;
    opts.seed = spec.seed.value_or(1);
    opts.n_targets = spec.n_targets.value_or(1);
    opts.mirror_T = spec.mirror_override;

    constexpr double kFidelityTol = 1e-10;
    constexpr double kProbTol = 1e-12;

    const auto scan = analysis::fidelity_scan(opts);

    // Truth table and efficiency ladder at the resolved parameters.
    GateConfig<double> cfg;
    cfg.params = spec.params.resolve();
    cfg.mirror_T_override = spec.mirror_override;
    double truth_min = 1;
    const Pol pols[] = {Pol::R, Pol::L};
    const Spatial modes[] = {Spatial::mode1, Spatial::mode2};
    for (Pol cp : pols)
        for (Spatial cm : modes)
            for (Pol tp : pols)
                for (Spatial tm : modes) {
                    const auto c = PhotonSpec<double>::basis(cp, cm);
                    const auto t = PhotonSpec<double>::basis(tp, tm);
                    const auto out = hyper_cnot(c, t, cfg);
                    truth_min = std::min(
                        truth_min,
                        worst_fidelity(out, ideal_hyper_cnot_n(
                                                c, std::vector<PhotonSpec<double>>{t})));
                }
    double ladder_dev = 0;
    const auto uniform = PhotonSpec<double>::uniform();
    for (unsigned n = 1; n <= 4; ++n) {
        cfg.n_targets = n;
        const auto out = hyper_cnot_n(
            uniform, std::vector<PhotonSpec<double>>(n, uniform), cfg);
        ladder_dev = std::max(
            ladder_dev, std::abs(out.success_prob - efficiency(out.block.T, n)));
    }

    struct Check {
        std::string name;
        double value;
        bool pass;
    };
    const std::vector<Check> checks{
        {"min fidelity deficit (1 - min F)", 1 - scan.min_fidelity,
         1 - scan.min_fidelity <= kFidelityTol},
        {"max |success_prob - |T|^(4(N+1))|", scan.max_success_deviation,
         scan.max_success_deviation <= kProbTol},
        {"max |coherent + sinks - 1|", scan.max_conservation_deviation,
         scan.max_conservation_deviation <= kProbTol},
        {"max |P(outcome) - success_prob/4|", scan.max_outcome_imbalance,
         scan.max_outcome_imbalance <= kProbTol},
        {"truth table fidelity deficit", 1 - truth_min,
         1 - truth_min <= kFidelityTol},
        {"efficiency ladder N=1..4 deviation", ladder_dev, ladder_dev <= kProbTol},
    };
    const bool all_pass = std::all_of(checks.begin(), checks.end(),
                                      [](const Check &c) { return c.pass; });

    Sink sink(stdout_, spec.out);
    auto &os = sink.stream();
    if (spec.format.value_or(OutputFormat::text) == OutputFormat::json) {
        json arr = json::array();
        for (const auto &c : checks)
            arr.push_back({{"check", c.name}, {"value", c.value}, {"pass", c.pass}});
        os << json{{"n_cases", scan.n_cases},
                   {"seed", opts.seed},
                   {"n_targets", opts.n_targets},
                   {"min_fidelity", scan.min_fidelity},
                   {"mean_fidelity", scan.mean_fidelity},
                   {"checks", arr},
                   {"pass", all_pass}}
                  .dump(2)
           << '\n';
    } else {
        os << "verify: cases=" << scan.n_cases << " seed=" << opts.seed
           << " n_targets=" << opts.n_targets;
        if (opts.mirror_T)
            os << " mirror_T=" << fmt_complex(*opts.mirror_T);
        os << '\n';
        os << "  min fidelity " << fmt12(scan.min_fidelity) << ", mean fidelity "
           << fmt12(scan.mean_fidelity) << '\n';
        for (const auto &c : checks) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", c.value);
            os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": "
               << buf << '\n';
        }
        os << "verify: " << (all_pass ? "PASS" : "FAIL") << '\n';
    }
    sink.finish();
    return all_pass ? kOk : kCheckFailed;
}

int cmd_sample(const RunSpec &spec, std::ostream &stdout_) {
    RunSpec s = spec;
    s.mode = GateMode::sampled;
    if (!s.seed)
        throw ValidationError("sample needs --seed");
    const auto g = resolve_gate(s);
    const auto shots = s.shots.value_or(1);
    if (shots < 1)
        throw ValidationError("--shots must be at least 1");
    const auto format = s.format.value_or(OutputFormat::text);
    if (format == OutputFormat::csv)
        throw ValidationError("format csv is not available for sample (use text or json)");

    Sink sink(stdout_, s.out);
    auto &os = sink.stream();
    if (shots == 1) {
        print_shot(os, sample_run(g.control, g.targets, g.cfg), format);
        sink.finish();
        return kOk;
    }
    const auto tally = sample_shots(g.control, g.targets, g.cfg, shots);
    const double expected = efficiency(block_coeffs(g.cfg.params).T,
                                       g.cfg.n_targets);
    const double sigma =
        std::sqrt(expected * (1 - expected) / static_cast<double>(shots));
    if (format == OutputFormat::json) {
        os << json{{"shots", tally.shots},
                   {"successes", tally.successes},
                   {"success_frequency", tally.success_frequency()},
                   {"clicks_B1", tally.clicks_B1},
                   {"clicks_B2", tally.clicks_B2},
                   {"lost", tally.lost},
                   {"spin_outcomes", tally.spin_outcomes},
                   {"expected_success_prob", expected},
                   {"binomial_sigma", sigma}}
                  .dump(2)
           << '\n';
    } else {
        os << "shots: " << tally.shots << '\n'
           << "successes: " << tally.successes << " (frequency "
           << fmt12(tally.success_frequency()) << ", expected " << fmt12(expected)
           << " +/- " << fmt12(sigma) << ")\n"
           << "clicks: detector_B1 " << tally.clicks_B1 << ", detector_B2 "
           << tally.clicks_B2 << '\n'
           << "lost: " << tally.lost << '\n'
           << "spin outcomes (up,up down,up up,down down,down): "
           << tally.spin_outcomes[0] << ' ' << tally.spin_outcomes[1] << ' '
           << tally.spin_outcomes[2] << ' ' << tally.spin_outcomes[3] << '\n';
    }
    sink.finish();
    return kOk;
}

} // namespace

// ---------------------------------------------------------------------------

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err) {
    CLI::App app{"Self-error-corrected hyperparallel photonic CNOT simulator",
                 "hypercnot"};
    app.require_subcommand(1);

    struct Raw {
        std::string params_file, g, kappa, kappa_s, gamma, detuning_c,
            detuning_x, g_ratio, ks_ratio, gamma_ratio, n_targets, seed, mode,
            out, format, mirror_override, gate, control, shots, n_cases;
        std::vector<std::string> targets;
    } raw;
    std::map<std::string, CLI::Option *> opts;

    auto add_common = [&](CLI::App *sub, const std::string &prefix) {
        auto add = [&](const std::string &flag, std::string &dst,
                       const std::string &help) {
            opts[prefix + flag] = sub->add_option(flag, dst, help);
        };
        add("--params-file", raw.params_file, "JSON run spec; flags override its fields");
        add("--g", raw.g, "coupling strength g");
        add("--kappa", raw.kappa, "cavity decay rate (default 1)");
        add("--kappa-s", raw.kappa_s, "side leakage rate");
        add("--gamma", raw.gamma, "dipole decay rate");
        add("--detuning-c", raw.detuning_c, "omega_c - omega");
        add("--detuning-x", raw.detuning_x, "omega_x - omega");
        add("--gamma-ratio", raw.gamma_ratio, "gamma/kappa (default 0.1)");
        add("--n-targets", raw.n_targets, "number of target photons");
        add("--seed", raw.seed, "RNG seed");
        add("--mode", raw.mode, "amplitude or sampled");
        add("--out", raw.out, "write the report to this file");
        add("--format", raw.format, "text, csv or json");
        add("--mirror-override", raw.mirror_override,
            "mirror transmission instead of the block T (x or re,im)");
    };

    auto *run = app.add_subcommand("run", "run one hyper-CNOT / CNOT^N gate");
    auto *truth = app.add_subcommand("truth-table", "16-row hyper-basis truth table");
    auto *sweep = app.add_subcommand("sweep", "efficiency over a g/kappa_s grid");
    auto *verify = app.add_subcommand("verify", "randomized self-correction checks");
    auto *sample = app.add_subcommand("sample", "seeded Monte Carlo shots");
    for (auto *sub : {run, truth, sweep, verify, sample}) {
        const std::string prefix = sub->get_name() + ":";
        add_common(sub, prefix);
        opts[prefix + "--g-ratio"] = sub->add_option(
            "--g-ratio", raw.g_ratio,
            sub == sweep ? "g/(kappa+kappa_s) axis: start:stop:step or list"
                         : "g/(kappa+kappa_s) (default 3)");
        opts[prefix + "--ks-ratio"] = sub->add_option(
            "--ks-ratio", raw.ks_ratio,
            sub == sweep ? "kappa_s/kappa axis: start:stop:step or list"
                         : "kappa_s/kappa (default 0.1)");
    }
    for (auto *sub : {run, sample}) {
        const std::string prefix = sub->get_name() + ":";
        opts[prefix + "--gate"] = sub->add_option("--gate", raw.gate, "cnot or cnotn");
        opts[prefix + "--control"] =
            sub->add_option("--control", raw.control, "control photon spec, e.g. L,a2");
        opts[prefix + "--target"] = sub->add_option(
            "--target", raw.targets, "target photon spec (repeatable), e.g. R,b1");
    }
    opts["sample:--shots"] = sample->add_option("--shots", raw.shots, "number of shots");
    opts["verify:--n-cases"] =
        verify->add_option("--n-cases", raw.n_cases, "random cases (default 200)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    CLI::App *active = app.get_subcommands().front();
    const std::string prefix = active->get_name() + ":";
    auto given = [&](const std::string &flag) {
        const auto it = opts.find(prefix + flag);
        return it != opts.end() && it->second->count() > 0;
    };

    try {
        RunSpec spec;
        if (given("--params-file"))
            spec = load_run_spec(raw.params_file);

        RunSpec flags;
        auto num = [&](const char *flag, const std::string &value,
                       std::optional<double> &dst) {
            if (given(flag))
                dst = parse_number(value, flag);
        };
        num("--g", raw.g, flags.params.g);
        num("--kappa", raw.kappa, flags.params.kappa);
        num("--kappa-s", raw.kappa_s, flags.params.kappa_s);
        num("--gamma", raw.gamma, flags.params.gamma);
        num("--detuning-c", raw.detuning_c, flags.params.detuning_c);
        num("--detuning-x", raw.detuning_x, flags.params.detuning_x);
        num("--gamma-ratio", raw.gamma_ratio, flags.params.gamma_ratio);
        if (active != sweep) {
            num("--g-ratio", raw.g_ratio, flags.params.g_ratio);
            num("--ks-ratio", raw.ks_ratio, flags.params.ks_ratio);
        }
        if (given("--n-targets")) {
            const auto n = parse_count(raw.n_targets, "--n-targets");
            if (n < 1 || n > BasisLabel::kMaxPhotons - 1)
                throw ValidationError("--n-targets must be in [1, " +
                                      std::to_string(BasisLabel::kMaxPhotons - 1) +
                                      "]");
            flags.n_targets = static_cast<unsigned>(n);
        }
        if (given("--seed"))
            flags.seed = parse_count(raw.seed, "--seed");
        if (given("--mode"))
            flags.mode = parse_mode(raw.mode);
        if (given("--out"))
            flags.out = raw.out;
        if (given("--format"))
            flags.format = parse_format(raw.format);
        if (given("--mirror-override"))
            flags.mirror_override = parse_complex(raw.mirror_override, "--mirror-override");
        if (given("--gate"))
            flags.gate = raw.gate;
        if (given("--control"))
            flags.control = parse_photon_spec(raw.control, "--control");
        if (given("--target"))
            for (std::size_t i = 0; i < raw.targets.size(); ++i)
                flags.targets.push_back(parse_photon_spec(
                    raw.targets[i], "--target " + std::to_string(i + 1)));
        if (given("--shots"))
            flags.shots = parse_count(raw.shots, "--shots");
        spec.merge(flags);

        if (active == run)
            return cmd_run(spec, out);
        if (active == truth)
            return cmd_truth_table(spec, out);
        if (active == sweep)
            return cmd_sweep(spec, given("--g-ratio") ? raw.g_ratio : "0:5:0.1",
                             given("--ks-ratio") ? raw.ks_ratio : "0,0.1,0.5,1",
                             out);
        if (active == verify)
            return cmd_verify(spec,
                              given("--n-cases") ? parse_count(raw.n_cases, "--n-cases")
                                                 : 200,
                              out);
        return cmd_sample(spec, out);
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const DegeneratePhysicsError &e) {
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const analysis::ReportIoError &e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const InputIoError &e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
}

} // namespace hypercnot::cli
