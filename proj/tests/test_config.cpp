// Copyright 2026 The sa3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sa3d/config.hpp"
#include "sa3d/io.hpp"
#include "sa3d/runner.hpp"

using namespace sa3d;

namespace {

RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "sa3d");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_config(static_cast<int>(argv.size()), argv.data());
}

// First non-comment line of a CSV stream.
std::string header_row(std::istream& in) {
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') return line;
    return {};
}

std::string golden(const std::string& name) {
    std::ifstream f(std::string(SA3D_GOLDEN_DIR) + "/" + name);
    std::string line;
    std::getline(f, line);
    return line;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("sa3d_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, EmptyTextGivesAdoptedPoint) {
    const RunConfig c = config_from_text("");
    EXPECT_EQ(c.scheme, Scheme::STA);
    EXPECT_EQ(c.omega0, 8.0);
    EXPECT_EQ(c.g, 70.0);
    EXPECT_EQ(c.t0, 0.18);
    EXPECT_EQ(c.tc, 0.24);
    EXPECT_EQ(c.rel_tol, 1e-9);
    EXPECT_EQ(c.grid, 2001);
    EXPECT_FALSE(c.gamma.has_value());
}

TEST(Config, CommentsAndWhitespace) {
    const RunConfig c = config_from_text("# header\n  omega0 =  6.5  # inline\n\nscheme=STIRAP\n");
    EXPECT_EQ(c.omega0, 6.5);
    EXPECT_EQ(c.scheme, Scheme::STIRAP);
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
    EXPECT_THROW(config_from_text("omgea0 = 3"), usage_error);
    EXPECT_THROW(config_from_text("omega0 = fast"), usage_error);
    EXPECT_THROW(config_from_text("omega0"), usage_error);
    EXPECT_THROW(config_from_text("workers = 0"), usage_error);
    EXPECT_THROW(config_from_text("deviations = g"), usage_error);
    EXPECT_THROW(config_from_text("pairs = g:bogus"), usage_error);
}

TEST(Config, BadSchemeListsValidOnes) {
    try {
        parse({"evolve", "--scheme", "STP"});
        FAIL() << "expected usage_error";
    } catch (const usage_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("STIRAP"), std::string::npos);
        EXPECT_NE(msg.find("STA_FITTED"), std::string::npos);
    }
}

TEST(Config, FlagsOverrideFile) {
    const auto file = scratch_dir("cfg.txt");
    {
        std::ofstream f(file);
        f << "experiment = evolve\nomega0 = 8\ng = 50\n";
    }
    const RunConfig c = parse({"evolve", "--config", file.string(), "--omega0", "4"});
    EXPECT_EQ(c.omega0, 4.0);
    EXPECT_EQ(c.g, 50.0);
    EXPECT_THROW(parse({"pulses", "--config", file.string()}), usage_error);
    std::filesystem::remove(file);
}

TEST(Config, FlagParsing) {
    const RunConfig c = parse({"scan-deviations", "--tol", "1e-8", "--workers", "2", "--check", "--pairs",
                               "omega0:t0,g:v", "--deviations", "v=0.05,g_a=-0.02"});
    EXPECT_EQ(c.rel_tol, 1e-8);
    EXPECT_EQ(c.abs_tol, 1e-8);
    EXPECT_EQ(c.workers, 2u);
    EXPECT_TRUE(c.check);
    ASSERT_EQ(c.pairs.size(), 2u);
    EXPECT_EQ(c.pairs[1], (ParamPair{ParamId::g, ParamId::v}));
    EXPECT_EQ(c.deviations.at(ParamId::g_a), -0.02);
    EXPECT_THROW(parse({"evolve", "--bogus", "1"}), usage_error);
    EXPECT_THROW(parse({"dance"}), usage_error);
    EXPECT_THROW(parse({}), usage_error);
}

TEST(Config, SerializeRoundTrip) {
    RunConfig c;
    c.experiment = "rb-point";
    c.scheme = Scheme::STA_FITTED;
    c.omega0 = 7.123456789012345;
    c.gamma = 0.0035;
    c.deviations = {{ParamId::v, 0.1}, {ParamId::T, -0.05}};
    c.pairs = {{ParamId::t0, ParamId::tc}};
    c.coupling = "g_a";
    c.out = "results/run 1";
    c.check = true;
    EXPECT_EQ(config_from_text(serialize(c)), c);
    EXPECT_EQ(config_from_text(serialize(RunConfig{})), RunConfig{});
}

TEST(Csv, HeadersMatchGoldenFiles) {
    std::stringstream b, p, t;
    write_basis_csv(b);
    write_pulses_csv(p, StirapParams::defaults(8.0), 5, {{"experiment", "pulses"}});
    SimResult r;
    r.times = {0.0};
    r.populations = Eigen::MatrixXd::Zero(1, 18);
    r.fidelity_trace = {0.0};
    write_trajectory_csv(t, r);
    EXPECT_EQ(header_row(b), golden("basis_header.csv"));
    EXPECT_EQ(header_row(p), golden("pulses_header.csv"));
    EXPECT_EQ(header_row(t), golden("trajectory_header.csv"));
}

TEST(Csv, MetadataLinesPrecedeHeader) {
    std::stringstream p;
    write_pulses_csv(p, StirapParams::defaults(8.0), 3, {{"experiment", "pulses"}, {"version", "x"}});
    std::string first;
    std::getline(p, first);
    EXPECT_EQ(first, "# experiment: pulses");
    header_row(p);
    int rows = 0;
    for (std::string line; std::getline(p, line);) ++rows;
    EXPECT_EQ(rows, 3);
}

TEST(Csv, BasisRowsCoverEveryState) {
    std::stringstream b;
    write_basis_csv(b);
    header_row(b);
    std::string line;
    std::getline(b, line);
    EXPECT_EQ(line, "0,g,g,0,0,0");
    int rows = 1;
    while (std::getline(b, line)) ++rows;
    EXPECT_EQ(rows, 18);
}

TEST(Runner, EvolveWritesOutputsAndPassesCheck) {
    const auto dir = scratch_dir("evolve");
    RunConfig c = parse({"evolve", "--out", dir.string(), "--check", "--grid", "11"});
    std::ostringstream log, err;
    EXPECT_EQ(run(c, log, err), kExitOk) << err.str();
    EXPECT_TRUE(std::filesystem::exists(dir / "evolve_STA.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "evolve_STA.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "basis.csv"));
    std::ifstream j(dir / "evolve_STA.json");
    const auto meta = nlohmann::json::parse(j);
    EXPECT_EQ(meta["experiment"], "evolve");
    EXPECT_EQ(meta["integrator"]["rel_tol"], 1e-9);
    c.threshold = 0.99999;
    EXPECT_EQ(run(c, log, err), kExitCheckFailed);
    std::filesystem::remove_all(dir);
}

TEST(Runner, PulsesReachFinalAngle) {
    const auto dir = scratch_dir("pulses");
    const RunConfig c = parse({"pulses", "--out", dir.string(), "--check", "--grid", "101"});
    std::ostringstream log, err;
    EXPECT_EQ(run(c, log, err), kExitOk) << err.str();
    std::ifstream f(dir / "pulses_STA.csv");
    header_row(f);
    std::string line, last;
    while (std::getline(f, line)) last = line;
    // theta0 is the tenth column.
    std::stringstream ss(last);
    std::string cell;
    for (int i = 0; i < 10; ++i) std::getline(ss, cell, ',');
    EXPECT_NEAR(std::stod(cell), -0.9553, 2e-3);
    std::filesystem::remove_all(dir);
}

TEST(Runner, ValidateExitsZeroOnGoodFrames) {
    const auto dir = scratch_dir("validate");
    std::ostringstream log, err;
    EXPECT_EQ(run(parse({"validate", "--out", dir.string(), "--samples", "50"}), log, err), kExitOk);
    std::filesystem::remove_all(dir);
}

TEST(Runner, UnwritableOutputIsIoError) {
    const auto file = scratch_dir("blocker");
    { std::ofstream f(file); }
    std::ostringstream log, err;
    EXPECT_EQ(run(parse({"evolve", "--out", (file / "sub").string(), "--grid", "3"}), log, err), kExitIo);
    EXPECT_NE(err.str().find("blocker"), std::string::npos);
    std::filesystem::remove(file);
}
