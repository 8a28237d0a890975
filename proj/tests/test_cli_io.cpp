#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qrac/io.hpp"
#include "support.hpp"

using namespace qrac;
using io::json;

namespace {

const std::string kCli = QRAC_CLI_PATH;
const std::string kSamples = QRAC_SAMPLES_DIR;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

MeasurementSet noisy_triple(double eta) {
  std::vector<std::vector<Matrix>> sets;
  for (const auto& s : {pauli::z(), pauli::x(), pauli::y()})
    sets.push_back({(Matrix::identity(2) + s * eta) * 0.5, (Matrix::identity(2) - s * eta) * 0.5});
  return MeasurementSet::from_matrices(sets);
}

}  // namespace

TEST(Json, MeasurementRoundTrip) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto ms = qrac_test::random_measurement_set(3, {2, 3}, rng);
    const auto back = io::measurements_from_json(json::parse(io::to_json(ms).dump()));
    ASSERT_EQ(back.outcome_profile(), ms.outcome_profile());
    for (std::size_t y = 0; y < ms.size(); ++y)
      for (std::size_t b = 0; b < ms[y].outcomes(); ++b) EXPECT_LE((back.effect(y, b) - ms.effect(y, b)).max_abs(), 1e-16);
  }
}

TEST(Json, ParseErrors) {
  const auto expect_parse = [](const std::string& text) {
    try {
      io::measurements_from_json(json::parse(text));
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kParse) << text;
    }
  };
  expect_parse(R"({"measurements": []})");
  expect_parse(R"({"dim": 0, "measurements": [{"effects": [[[1,0]]]}]})");
  expect_parse(R"({"dim": 2, "measurements": []})");
  expect_parse(R"({"dim": 2, "measurements": [{"effects": [[[[1,0],[0,0]]]]}]})");
  expect_parse(R"({"dim": 1, "measurements": [{"effects": [[[["a",0]]]]}]})");
  EXPECT_THROW(io::read_measurements(write_temp("broken.json", "{ not json")), Error);
  EXPECT_THROW(io::read_measurements("/nonexistent/file.json"), Error);
}

TEST(Json, InvalidPovmKeepsValidationKind) {
  try {
    io::measurements_from_json(json::parse(R"({"dim": 1, "measurements": [{"effects": [[[[0.5,0]]]]}]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIncompleteSum);
  }
}

TEST(Json, RationalEncoding) {
  const auto j = io::to_json(make_rational(11, 16));
  EXPECT_EQ(j["num"], 11);
  EXPECT_EQ(j["den"], 16);
  EXPECT_DOUBLE_EQ(j["float"].get<double>(), 0.6875);
}

TEST(Json, VerdictRecomputedFromReport) {
  const Scenario sc = Scenario::uniform(3, 2, 2);
  // The witness fires exactly above eta = sqrt(3)/2.
  for (double eta : {1.0, 0.9, 0.87, 0.86, 0.8, 0.5}) {
    const auto r = assemble_witness_report(noisy_triple(eta), sc);
    const auto j = json::parse(io::to_json(r).dump());
    EXPECT_EQ(io::verdict_from_json(j), j["verdict"].get<std::string>()) << eta;
    EXPECT_EQ(j["verdict"].get<std::string>(), eta > std::sqrt(3.0) / 2 ? "INCOMPATIBLE" : "NO_WITNESS") << eta;
  }
}

TEST(Csv, HeaderAndFormatting) {
  std::ostringstream out;
  io::write_scan_csv(out, scan_and_classify(21));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, io::kScanHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, 21u * 21u * 21u * 2u);
}

TEST(Cli, BoundsJson) {
  const auto r = run("bounds --n 4 --outcomes 2 --dim 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["S_classical"]["num"], 11);
  EXPECT_EQ(j["S_classical"]["den"], 16);
  EXPECT_EQ(j["classical_method"], "EXACT_FORMULA");
  EXPECT_NEAR(j["S_upper"].get<double>(), 0.78125, 1e-15);
}

TEST(Cli, WitnessOnSampleFile) {
  const auto r = run("witness --measurements " + kSamples + "/mubs.json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "INCOMPATIBLE");
  EXPECT_NEAR(j["margin"].get<double>(), 0.03867, 1e-5);
  EXPECT_EQ(io::verdict_from_json(j), "INCOMPATIBLE");
}

TEST(Cli, QvalueMatchesLibrary) {
  const auto r = run("qvalue --measurements " + kSamples + "/mubs.json");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.78867513459"), std::string::npos);
  EXPECT_EQ(run("qvalue --measurements " + kSamples + "/mubs.json --n 3 --outcomes 2 --dim 2").code, 0);
  EXPECT_EQ(run("qvalue --measurements " + kSamples + "/mubs.json --outcomes 2,2,2").code, 0);
  EXPECT_EQ(run("qvalue --measurements " + kSamples + "/mubs.json --outcomes 3").code, 2);
  EXPECT_EQ(run("qvalue --measurements " + kSamples + "/mubs.json --dim 3").code, 2);
}

TEST(Cli, CompatUpgradesThroughWitness) {
  const auto r = run("compat --measurements " + kSamples + "/zx_pair.json --strict");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["status"], "INCOMPATIBLE");
}

TEST(Cli, CompatStrictIndeterminateExitsThree) {
  const auto path = write_temp("noisy_triple.json", io::to_json(noisy_triple(0.65)).dump());
  EXPECT_EQ(run("compat --measurements " + path + " --strict --table").code, 3);
  EXPECT_EQ(run("compat --measurements " + path + " --table").code, 0);
}

TEST(Cli, CompatCompatibleSet) {
  const auto path = write_temp("compatible.json", io::to_json(random_compatible_set(2, {2, 2}, 5).measurements).dump());
  const auto r = run("compat --measurements " + path);
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "COMPATIBLE");
  EXPECT_TRUE(j.contains("certificate"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("bounds --n 2 --outcomes x --dim 2").code, 2);
  EXPECT_EQ(run("bounds --n 2 --outcomes 2 --dim 1").code, 2);
  EXPECT_EQ(run("nosuchcommand").code, 2);
  EXPECT_EQ(run("seesaw --n 2 --outcomes 2 --dim 2").code, 2);
  EXPECT_EQ(run("demo").code, 2);
  EXPECT_EQ(run("bounds --n 4 --outcomes 2 --dim 2 --objective worst").code, 3);
  EXPECT_EQ(run("witness --measurements /nonexistent.json").code, 2);
  EXPECT_EQ(run("scan-triples --grid 5").code, 2);
}

TEST(Cli, BoundUnavailableExitsThree) {
  // dim 3 > min d_y = 2 forces the exhaustive search, which is too large here.
  std::vector<std::vector<Matrix>> sets(1, {Matrix::identity(3) * 0.5, Matrix::identity(3) * 0.5});
  for (int i = 0; i < 6; ++i) {
    Matrix a(3), b(3), c(3), d(3);
    a(0, 0) = 1;
    b(1, 1) = 1;
    c(2, 2) = 1;
    sets.push_back({a, b, c, d});
  }
  const auto path = write_temp("big.json", io::to_json(MeasurementSet::from_matrices(sets)).dump());
  EXPECT_EQ(run("witness --measurements " + path).code, 3);
}

TEST(Cli, ScanCsvRowCount) {
  const auto r = run("scan-triples --grid 21 --csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 21 * 21 * 21 * 2);
  EXPECT_EQ(r.out.rfind(io::kScanHeader, 0), 0u);
}

TEST(Cli, SeesawIsSeededAndLabeled) {
  const std::string args = "seesaw --n 2 --outcomes 2 --dim 2 --objective avg --constraint free --restarts 2 --seed 9";
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j["label"], "HEURISTIC");
  EXPECT_NEAR(j["best_value"].get<double>(), 0.5 + 0.5 / std::sqrt(2.0), 1e-6);
}
