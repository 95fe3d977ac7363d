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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "hypercnot/cli.hpp"

using namespace hypercnot;
using namespace hypercnot::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "hypercnot");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() /
           ("hypercnot_cli_" + std::to_string(::getpid()) + "_" + name);
}

bool contains(const std::string &hay, const std::string &needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST(PhotonSpecParsing, Shorthand) {
    const auto a = parse_photon_spec("L,a2");
    EXPECT_EQ(a.pol[1], std::complex<double>(1));
    EXPECT_EQ(a.spatial[1], std::complex<double>(1));
    const auto b = parse_photon_spec("R,b1");
    EXPECT_EQ(b.pol[0], std::complex<double>(1));
    EXPECT_EQ(b.spatial[0], std::complex<double>(1));
    const auto plus = parse_photon_spec("+");
    EXPECT_NEAR(std::abs(plus.pol[1] - std::sqrt(0.5)), 0, 1e-15);
    EXPECT_NEAR(std::abs(plus.spatial[0] - std::sqrt(0.5)), 0, 1e-15);
}

TEST(PhotonSpecParsing, LongForm) {
    const auto p = parse_photon_spec("pol=(0.6,0),(0,0.8);spat=(1,0),(0,0)");
    EXPECT_EQ(p.pol[0], std::complex<double>(0.6));
    EXPECT_EQ(p.pol[1], std::complex<double>(0, 0.8));
    EXPECT_EQ(p.spatial[0], std::complex<double>(1));
    const auto mixed = parse_photon_spec("pol=+;spat=a2");
    EXPECT_EQ(mixed.spatial[1], std::complex<double>(1));
}

TEST(PhotonSpecParsing, Errors) {
    EXPECT_THROW(parse_photon_spec(""), ValidationError);
    EXPECT_THROW(parse_photon_spec("Q,a1"), ValidationError);
    EXPECT_THROW(parse_photon_spec("R,a3"), ValidationError);
    EXPECT_THROW(parse_photon_spec("pol=(1,0),(1,0);spat=(1,0),(0,0)"), ValidationError);
    EXPECT_THROW(parse_photon_spec("pol=(1,0);spat=(1,0),(0,0)"), ValidationError);
    try {
        parse_photon_spec("pol=(2,0),(0,0);spat=(1,0),(0,0)", "--control");
        FAIL();
    } catch (const ValidationError &e) {
        EXPECT_TRUE(contains(e.what(), "--control"));
    }
}

TEST(AxisParsing, RangesAndLists) {
    EXPECT_EQ(parse_axis("0:5:0.1", "g").size(), 51u);
    EXPECT_EQ(parse_axis("0,0.1,0.5,1", "ks"), (std::vector<double>{0, 0.1, 0.5, 1}));
    EXPECT_EQ(parse_axis("2", "g"), std::vector<double>{2});
    EXPECT_THROW(parse_axis("0:5:0", "g"), ValidationError);
    EXPECT_THROW(parse_axis("5:0:1", "g"), ValidationError);
    EXPECT_THROW(parse_axis("a,b", "g"), ValidationError);
}

TEST(ComplexParsing, Forms) {
    EXPECT_EQ(parse_complex("0.9", "x"), std::complex<double>(0.9));
    EXPECT_EQ(parse_complex("0.5,-0.5", "x"), std::complex<double>(0.5, -0.5));
    EXPECT_EQ(parse_complex("(0.5,0.25)", "x"), std::complex<double>(0.5, 0.25));
    EXPECT_THROW(parse_complex("one", "x"), ValidationError);
}

TEST(ParamResolution, DefaultsAndOverrides) {
    ParamInputs in;
    auto p = in.resolve();
    EXPECT_EQ(p.kappa, 1.0);
    EXPECT_NEAR(p.kappa_s, 0.1, 1e-15);
    EXPECT_NEAR(p.gamma, 0.1, 1e-15);
    EXPECT_NEAR(p.g, 3.3, 1e-15);
    in.g = 2.0;
    in.g_ratio = 5.0;
    EXPECT_EQ(in.resolve().g, 2.0);
    ParamInputs over;
    over.kappa_s = 0.0;
    in.merge(over);
    EXPECT_EQ(in.resolve().kappa_s, 0.0);
}

TEST(RunSpecJson, ParsesAndRejectsUnknownKeys) {
    const auto spec = parse_run_spec_json(
        R"({"gate":"cnot","control":"L,a2","targets":["R,b1"],)"
        R"("params":{"g_ratio":3,"ks_ratio":0.1},"seed":5})");
    EXPECT_EQ(*spec.gate, "cnot");
    EXPECT_EQ(spec.targets.size(), 1u);
    EXPECT_EQ(*spec.seed, 5u);
    EXPECT_EQ(*spec.params.g_ratio, 3.0);
    EXPECT_THROW(parse_run_spec_json(R"({"bogus":1})"), ValidationError);
    EXPECT_THROW(parse_run_spec_json(R"({"params":{"gg":1}})"), ValidationError);
    EXPECT_THROW(parse_run_spec_json("[1,2"), ValidationError);
}

TEST(Cli, RunReportsEfficiencyAndUnitFidelity) {
    const auto r = run({"run", "--control", "L,a2", "--target", "R,b1"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(contains(r.out, "success_prob: 0.651292689179"));
    EXPECT_TRUE(contains(r.out, "a:L,2 b:L,2"));
    EXPECT_FALSE(contains(r.out, "fidelity=0."));
}

TEST(Cli, JsonOutputIsDeterministic) {
    const std::vector<std::string> args{"run", "--control", "+", "--target", "+",
                                        "--format", "json"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CnotN) {
    const auto r = run({"run", "--gate", "cnotn", "--n-targets", "3", "--control", "+",
                        "--target", "+", "--target", "+", "--target", "+"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(contains(r.out, "0.42418216697"));
}

TEST(Cli, ValidationFailuresExit2) {
    EXPECT_EQ(run({"run", "--control", "L,a2"}).code, kValidation);
    EXPECT_EQ(run({"run", "--control", "Q,a2", "--target", "R,b1"}).code, kValidation);
    EXPECT_EQ(run({"run", "--control", "+", "--target", "+", "--kappa-s", "-1"}).code,
              kValidation);
    EXPECT_EQ(run({"verify", "--n-cases", "0"}).code, kValidation);
    EXPECT_EQ(run({"sweep", "--g-ratio", "1:0:1"}).code, kValidation);
    EXPECT_EQ(run({"bogus"}).code, kValidation);
    EXPECT_EQ(run({}).code, kValidation);
    EXPECT_EQ(run({"run", "--control", "+", "--target", "+", "--format", "xml"}).code,
              kValidation);
    const auto r = run({"run", "--control", "+", "--target", "+", "--target", "+",
                        "--n-targets", "3"});
    EXPECT_EQ(r.code, kValidation);
    EXPECT_TRUE(contains(r.err, "target"));
}

TEST(Cli, SingleTargetSpecIsBroadcast) {
    const auto r = run({"run", "--control", "+", "--target", "+", "--n-targets", "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(contains(r.out, "0.52561082963"));
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, kOk); }

TEST(Cli, ZeroCouplingExit3) {
    const auto r = run({"run", "--control", "+", "--target", "+", "--g", "0"});
    EXPECT_EQ(r.code, kDegenerate);
    EXPECT_TRUE(contains(r.err, "all amplitude lost"));
}

TEST(Cli, UnwritableOutputExit4) {
    EXPECT_EQ(run({"sweep", "--g-ratio", "3", "--ks-ratio", "0.1", "--out",
                   "/nonexistent_dir_hypercnot/x.csv"})
                  .code,
              kIo);
    EXPECT_EQ(run({"run", "--params-file", "/nonexistent_dir_hypercnot/p.json"}).code,
              kIo);
}

TEST(Cli, SweepCsvToFile) {
    const auto path = temp_path("sweep.csv");
    const auto r = run({"sweep", "--format", "csv", "--out", path.string()});
    ASSERT_EQ(r.code, kOk) << r.err;
    std::ifstream in(path);
    const auto rows = analysis::parse_report(in, analysis::ReportFormat::csv);
    EXPECT_EQ(rows.size(), 204u);
    std::filesystem::remove(path);
}

TEST(Cli, SweepJsonToStdout) {
    const auto r = run({"sweep", "--g-ratio", "0.5,1,2,3,5", "--ks-ratio", "0,0.1,0.5,1",
                        "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    std::istringstream in(r.out);
    EXPECT_EQ(analysis::parse_report(in, analysis::ReportFormat::json).size(), 20u);
}

TEST(Cli, TruthTable) {
    const auto r = run({"truth-table"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.code, kOk);
}

TEST(Cli, VerifyPassesAndMirrorOverrideFails) {
    const auto ok = run({"verify", "--n-cases", "40"});
    EXPECT_EQ(ok.code, kOk) << ok.out << ok.err;
    const auto bad = run({"verify", "--n-cases", "40", "--mirror-override", "0.9"});
    EXPECT_EQ(bad.code, kCheckFailed) << bad.out;
    EXPECT_TRUE(contains(bad.out, "FAIL"));
}

TEST(Cli, SampleIsSeeded) {
    const std::vector<std::string> args{"sample", "--control", "+", "--target", "+",
                                        "--shots", "2000", "--seed", "17"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto c = args;
    c.back() = "18";
    EXPECT_NE(run(c).out, a.out);
}

TEST(Cli, ParamsFileWithFlagOverride) {
    const auto path = temp_path("params.json");
    {
        std::ofstream f(path);
        f << R"({"control":"L,a2","targets":["R,b1"],"params":{"g_ratio":3,"ks_ratio":0.1}})";
    }
    const auto a = run({"run", "--params-file", path.string()});
    ASSERT_EQ(a.code, kOk) << a.err;
    EXPECT_TRUE(contains(a.out, "success_prob: 0.651292689179"));
    const auto b = run({"run", "--params-file", path.string(), "--g", "0"});
    EXPECT_EQ(b.code, kDegenerate);
    {
        std::ofstream f(path);
        f << "{not json";
    }
    EXPECT_EQ(run({"run", "--params-file", path.string()}).code, kValidation);
    std::filesystem::remove(path);
}
