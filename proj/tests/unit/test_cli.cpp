#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = chisq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "chisq_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, Usage) {
  EXPECT_EQ(run({}).code, chisq::cli::kValidation);
  EXPECT_EQ(run({"frobnicate"}).code, chisq::cli::kValidation);
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("selftest"), std::string::npos);
  EXPECT_NE(run({"density", "--help"}).out.find("--nu-count"), std::string::npos);
  EXPECT_EQ(run({"density", "--bogus"}).code, chisq::cli::kValidation);
}

TEST(Cli, MomentsTopHat) {
  const auto r = run({"moments", "--spectrum", "tophat:1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["gamma"].get<double>(), 0.916515138991168, 1e-12);
}

TEST(Cli, MomentsEmptyTable) {
  const auto path = scratch("flat.txt");
  std::ofstream(path) << "# nothing here\n";
  const auto r = run({"moments", "--table", path.string()});
  EXPECT_EQ(r.code, chisq::cli::kValidation);
  EXPECT_NE(r.err.find("invalid-spectrum"), std::string::npos) << r.err;
}

TEST(Cli, MomentsDegenerateShell) {
  const auto r = run({"moments", "--spectrum", "shell:1,1,1e-7"});
  EXPECT_EQ(r.code, chisq::cli::kDegenerateGamma);
  EXPECT_NE(r.err.find("degenerate-gamma"), std::string::npos);
}

TEST(Cli, MomentsDivergent) {
  const auto r = run({"moments", "--spectrum", "powerlaw:1,-4,1"});
  EXPECT_EQ(r.code, chisq::cli::kNumerical);
  EXPECT_NE(r.err.find("divergent-integral"), std::string::npos) << r.err;
}

TEST(Cli, DensityUnsupportedN) {
  const auto r = run({"density", "--N", "3", "--gamma", "0.6", "--nu-count", "3"});
  EXPECT_EQ(r.code, chisq::cli::kUnsupported);
  EXPECT_NE(r.err.find("monopoles"), std::string::npos) << r.err;
}

TEST(Cli, DensityBadGamma) {
  EXPECT_EQ(run({"density", "--gamma", "1.0"}).code, chisq::cli::kDegenerateGamma);
  EXPECT_EQ(run({"density"}).code, chisq::cli::kValidation);
}

TEST(Cli, DensityDeterministicWithManifest) {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  const std::vector<std::string> common = {"density", "--gamma", "0.6", "--nu-min", "0.5", "--nu-max", "3",
                                           "--nu-count", "4", "--samples", "20000", "--seed", "42"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.end(), {"--out", a.string(), "--threads", "1"});
  args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "3"});
  const auto ra = run(args_a), rb = run(args_b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  EXPECT_NE(ra.err.find("consistency"), std::string::npos);
  const auto ca = slurp(a);
  EXPECT_EQ(ca, slurp(b));
  EXPECT_EQ(std::count(ca.begin(), ca.end(), '\n'), 21);
  const auto m = nlohmann::json::parse(slurp(a.string() + ".manifest.json"));
  EXPECT_EQ(m["config"]["seed"].get<std::uint64_t>(), 42u);
  EXPECT_EQ(m["config"]["N"].get<int>(), 4);
  EXPECT_EQ(m["config"]["integrator"], "vegas");
}

TEST(Cli, DensityJsonFromSpectrum) {
  const auto r = run({"density", "--spectrum", "powerlaw:1,2,0.5", "--nu-count", "2", "--samples", "10000",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["gamma"].get<double>(), 2.5 / std::sqrt(8.75), 1e-12);
  EXPECT_EQ(j["records"].size(), 10u);
}

TEST(Cli, SelftestCatchesCorruptedWeight) {
  const auto r = run({"selftest", "--samples", "30000", "--mh-samples", "40000", "--matrix-samples", "20000",
                      "--corrupt-weight", "1"});
  EXPECT_EQ(r.code, chisq::cli::kCheckFailed);
  EXPECT_NE(r.out.find("FAIL  signed polynomial"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("{<det M> = (N-1)(N-2)(N-3)}"), std::string::npos);
}

TEST(Cli, ValidateUnderResolved) {
  const auto r = run({"validate", "--spectrum", "tophat:1,3", "--grid", "32", "--box", "32", "--seeds", "1"});
  EXPECT_EQ(r.code, chisq::cli::kValidation);
  EXPECT_NE(r.err.find("under-resolved-spectrum"), std::string::npos) << r.err;
}
