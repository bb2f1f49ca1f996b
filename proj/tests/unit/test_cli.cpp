#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "nhj/errors.hpp"
#include "nhj/serialize.hpp"

namespace nhj::cli {
namespace {

using json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "nhj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<double> cells(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nhj_test_" + name);
}

TEST(CliSimulate, HarmonicDiskFinalRow) {
  const Result r = run_args({"simulate", "--system", "disk-harmonic", "--q0", "0,0,0,0", "--y0",
                             "1,1", "--t-end", "1", "--step", "1e-3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1002u);
  EXPECT_EQ(ls[0], "t,q1,q2,q3,q4,p1,p2,energy,constraint_residual");
  const auto last = cells(ls.back());
  EXPECT_EQ(last[0], 1.0);
  EXPECT_NEAR(last[3], 1.0, 1e-8);
  EXPECT_NEAR(last[4], 0.8414709848, 1e-8);
  const double e0 = cells(ls[1])[7];
  EXPECT_DOUBLE_EQ(e0, 1.5);
  for (std::size_t k = 1; k < ls.size(); ++k) {
    const auto c = cells(ls[k]);
    EXPECT_NEAR(c[7], e0, 1e-10);
    EXPECT_LE(c[8], 1e-10);
  }
}

TEST(CliSimulate, ChartVelocityFlagAndZeroMomentum) {
  const Result r = run_args({"simulate", "--system", "disk-free", "--q0", "1,2,0.5,0.25", "--v0",
                             "0,0,0,0", "--t-end", "0.1", "--step", "0.05"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  for (std::size_t k = 2; k < ls.size(); ++k) {
    const auto a = cells(ls[1]), b = cells(ls[k]);
    for (std::size_t i = 1; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  }
}

TEST(CliSimulate, JsonFormatAndRkf45) {
  const Result r = run_args({"simulate", "--system", "particle-r3-linear", "--v0", "1,0,0",
                             "--method", "rkf45", "--int-tol", "1e-9", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["integrator"]["method"], "rkf45");
  EXPECT_EQ(j["integrator"]["abs_tol"].get<double>(), 1e-9);
  EXPECT_EQ(j["samples"].back()["t"].get<double>(), 1.0);
}

TEST(CliSimulate, ByteIdenticalReruns) {
  const std::vector<std::string> args = {"verify-maupertuis", "--system", "particle-r3-linear",
                                         "--energy", "1", "--seed", "7", "--step", "1e-2"};
  const Result a = run_args(args);
  const Result b = run_args(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Result c = run_args({"verify-maupertuis", "--system", "particle-r3-linear", "--energy", "1",
                             "--seed", "8", "--step", "1e-2"});
  EXPECT_NE(a.out, c.out);
}

TEST(CliSimulate, OutputFile) {
  const auto path = temp_file("sim.csv");
  const Result r = run_args({"simulate", "--system", "disk-free", "--y0", "1,0", "--t-end", "0.01",
                             "--step", "0.005", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(lines(buf.str()).size(), 4u);
  std::filesystem::remove(path);
}

TEST(CliVerify, LinearDiskPasses) {
  const Result r = run_args({"verify-maupertuis", "--system", "disk-linear", "--energy", "2",
                             "--y0", "1,1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_LE(j["max_position_deviation"].get<double>(), 1e-6);
  EXPECT_EQ(j["h_samples"][0].get<double>(), 0.0);
  EXPECT_EQ(j["mechanical_endpoint"].size(), 4u);
  EXPECT_EQ(j["kinetic_endpoint"].size(), 4u);
}

TEST(CliVerify, ZeroToleranceFails) {
  const Result r = run_args({"verify-maupertuis", "--system", "disk-linear", "--energy", "2",
                             "--y0", "1,1", "--tol", "0", "--step", "1e-2"});
  EXPECT_EQ(r.code, kExitVerifyFailed);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_GT(j["max_position_deviation"].get<double>(), 0.0);
  EXPECT_EQ(lines(r.err).size(), 1u);
}

TEST(CliVerify, ParticleFromOrigin) {
  const Result r = run_args({"verify-maupertuis", "--system", "particle-r3-linear", "--energy",
                             "1", "--q0", "0,0,0", "--v0", "1,0,0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());
}

TEST(CliExpmap, RadiusZeroRows) {
  const Result r = run_args({"expmap", "--system", "disk-free", "--q0", "0.5,0,0,0",
                             "--directions", "6", "--radii", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "direction,radius,q1,q2,q3,q4");
  for (std::size_t k = 1; k < ls.size(); ++k) {
    EXPECT_EQ(ls[k], std::to_string(k - 1) + ",0,0.5,0,0,0");
  }
}

TEST(CliExpmap, JacobiModeJson) {
  const Result r = run_args({"expmap", "--system", "particle-r3-linear", "--mode", "jacobi",
                             "--energy", "1", "--directions", "3", "--radii", "0,0.5",
                             "--format", "json", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["kind"], "jacobi");
  EXPECT_EQ(j["image"].size(), 6u);
  EXPECT_EQ(j["energy"].get<double>(), 1.0);
}

TEST(CliListSystems, FourEntriesRoundTrip) {
  const Result r = run_args({"list-systems"});
  ASSERT_EQ(r.code, kExitOk);
  const auto infos = parse_systems_json(r.out);
  ASSERT_EQ(infos.size(), 4u);
  for (const auto& i : infos) {
    if (i.name == "disk-harmonic") EXPECT_TRUE(i.has_analytic);
  }
  EXPECT_EQ(systems_json(infos), r.out);
}

TEST(CliConfig, FileThenFlags) {
  const auto path = temp_file("config.json");
  {
    std::ofstream out(path);
    out << R"({"system": "disk-harmonic", "q0": [0, 0, 0, 0], "y0": [1, 1], "t-end": 0.5,
               "step": 0.01})";
  }
  const Result a = run_args({"simulate", "--config", path.string()});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(cells(lines(a.out).back())[0], 0.5);
  const Result b = run_args({"simulate", "--config", path.string(), "--t-end", "0.25"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(cells(lines(b.out).back())[0], 0.25);
  std::filesystem::remove(path);
}

TEST(CliConfig, SystemFile) {
  const auto path = temp_file("system.json");
  {
    std::ofstream out(path);
    out << R"({"name": "file-particle", "dimension": 3, "potential": "q3",
               "frame": [["1", "0", "q2"], ["0", "1", "0"]]})";
  }
  const Result r = run_args({"verify-maupertuis", "--system", path.string(), "--energy", "1",
                             "--v0", "1,0,0", "--step", "1e-3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["system"], "file-particle");
  std::filesystem::remove(path);
}

// Every error path: nonzero exit, one stderr line "error: <Code>: ...".
void expect_error(const Result& r, int code, const std::string& reason) {
  EXPECT_EQ(r.code, code) << r.err;
  const auto ls = lines(r.err);
  ASSERT_EQ(ls.size(), 1u) << r.err;
  EXPECT_EQ(ls[0].rfind("error: " + reason + ":", 0), 0u) << ls[0];
}

TEST(CliErrors, ConfigValidation) {
  expect_error(run_args({"simulate", "--system", "nope"}), kExitConfig, "UnknownSystem");
  expect_error(run_args({"simulate", "--q0", "0,0"}), kExitConfig, "InvalidArgument");
  expect_error(run_args({"simulate", "--q0", "0,0,x,0"}), kExitConfig, "ParseError");
  expect_error(run_args({"simulate", "--v0", "0,1,0,0"}), kExitConfig, "NotInDistribution");
  expect_error(run_args({"simulate", "--t-end", "-1"}), kExitConfig, "InvalidArgument");
  expect_error(run_args({"simulate", "--step", "nan"}), kExitConfig, "InvalidArgument");
  expect_error(run_args({"simulate", "--method", "euler"}), kExitConfig, "InvalidArgument");
  expect_error(run_args({"simulate", "--bogus"}), kExitConfig, "ParseError");
  expect_error(run_args({}), kExitConfig, "ParseError");
  expect_error(run_args({"verify-maupertuis", "--system", "disk-linear"}), kExitConfig,
               "InvalidArgument");
  expect_error(run_args({"verify-maupertuis", "--system", "disk-linear", "--energy", "0",
                         "--q0", "0,0,0,0.5"}),
               kExitConfig, "InvalidArgument");
  expect_error(run_args({"expmap", "--system", "disk-harmonic"}), kExitConfig, "NotKinetic");
  expect_error(run_args({"simulate", "--config", "/nonexistent.json"}), kExitConfig, "ParseError");
}

TEST(CliErrors, IntegrationFailure) {
  // Pure steering to the Hill boundary of the linear-potential disk.
  const Result r = run_args({"verify-maupertuis", "--system", "disk-linear", "--energy", "0.5",
                             "--q0", "0,0,0,0", "--y0", "0,1", "--t-end", "1.5"});
  expect_error(r, kExitIntegration, "HillBoundary");
}

TEST(CliParseList, Values) {
  EXPECT_EQ(parse_list("1, 2.5 ,-3e-1"), (std::vector<double>{1, 2.5, -0.3}));
  EXPECT_THROW(parse_list("1,,2"), Error);
  EXPECT_THROW(parse_list("1;2"), Error);
}

TEST(CliConfig, UnknownKeyRejected) {
  RunConfig cfg;
  EXPECT_THROW(apply_config_json(cfg, R"({"sytem": "disk-free"})"), Error);
  EXPECT_THROW(apply_config_json(cfg, R"({"step": "fast"})"), Error);
  apply_config_json(cfg, R"({"radii": [0, 1], "mode": "jacobi", "energy": 3})");
  EXPECT_EQ(cfg.radii, (std::vector<double>{0, 1}));
  EXPECT_EQ(cfg.mode, "jacobi");
  EXPECT_EQ(*cfg.energy, 3.0);
}

}  // namespace
}  // namespace nhj::cli
