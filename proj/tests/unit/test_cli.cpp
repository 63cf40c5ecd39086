#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stratinfer/dirmath.hpp"
#include "stratinfer/trajectory_io.hpp"
#include "stratinfer_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = stratinfer::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stratinfer_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, SimulateIsDeterministic) {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  for (const auto& dir : {a, b}) {
    const auto r = run({"simulate", "--model", "hm", "--rho", "1.0", "--events", "3", "--seed", "7", "--steps", "60",
                        "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"event_000.csv", "event_001.csv", "event_002.csv", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto manifest = stratinfer::read_manifest(a / "manifest.json");
  ASSERT_EQ(manifest.size(), 3u);
  EXPECT_EQ(manifest[0].label, stratinfer::Regime::HM);
  EXPECT_TRUE(manifest[0].seed);
}

TEST(Cli, SimulateValidatesFlags) {
  const auto dir = scratch("sim_bad");
  EXPECT_EQ(run({"simulate", "--model", "hm", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", "lra", "--rho", "0.5", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", "hm", "--rho", "0.5", "--mix-prob", "0.2", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", "flock", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", "hm", "--rho", "2", "--out", dir.string()}).code, 2);
  const auto r = run({"simulate", "--model", "hm", "--out", dir.string()});
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, RandomEventIsUncorrelated) {
  const auto dir = scratch("sim_random");
  ASSERT_EQ(run({"simulate", "--model", "random", "--events", "1", "--out", dir.string()}).code, 0);
  const auto ts = stratinfer::read_trajectory_csv(dir / "event_000.csv");
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < ts.n_steps(); ++t) {
    for (std::size_t i = 0; i < ts.n_agents(); ++i) {
      for (std::size_t j = i + 1; j < ts.n_agents(); ++j) {
        total += stratinfer::dist_dir(ts.directions[i][t], ts.directions[j][t]);
        ++count;
      }
    }
  }
  EXPECT_NEAR(total / double(count), 90.0, 5.0);
}

TEST(Cli, DetectReportsIntervals) {
  const auto dir = scratch("detect");
  ASSERT_EQ(run({"simulate", "--model", "hm", "--rho", "1", "--events", "1", "--seed", "3", "--out",
                 (dir / "hm").string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--model", "random", "--events", "1", "--seed", "3", "--out",
                 (dir / "rnd").string()}).code, 0);
  auto hm = run({"detect", "--manifest", (dir / "hm" / "manifest.json").string()});
  ASSERT_EQ(hm.code, 0) << hm.err;
  EXPECT_GE(json::parse(hm.out)["events"][0]["intervals"].size(), 1u);
  auto rnd = run({"detect", "--in", (dir / "rnd" / "event_000.csv").string(), "--density-percentile", "99"});
  ASSERT_EQ(rnd.code, 0) << rnd.err;
  EXPECT_EQ(json::parse(rnd.out)["events"][0]["intervals"].size(), 0u);

  std::ofstream(dir / "bad.csv") << "t,agent_id,x,y\n0,1,0,0\nabc,1,0,0\n";
  auto bad = run({"detect", "--in", (dir / "bad.csv").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("bad.csv:3"), std::string::npos) << bad.err;
}

TEST(Cli, FitRecoversHmAndIsByteStable) {
  const auto dir = scratch("fit");
  ASSERT_EQ(run({"simulate", "--model", "hm", "--rho", "1", "--events", "20", "--seed", "5", "--out",
                 dir.string()}).code, 0);
  const std::string manifest = (dir / "manifest.json").string();
  const auto a = run({"fit", "--manifest", manifest, "--folds", "5", "--out", (dir / "a.json").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"fit", "--manifest", manifest, "--folds", "5", "--out", (dir / "b.json").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));

  const json report = json::parse(slurp(dir / "a.json"));
  std::size_t uninformed = 0, hm = 0;
  for (const auto& agent : report["agents"]) {
    if (agent["informed"].get<bool>()) continue;
    ++uninformed;
    hm += agent["label"] == "HM";
  }
  EXPECT_EQ(uninformed, 19u);
  EXPECT_GE(static_cast<double>(hm), 0.95 * static_cast<double>(uninformed));
  EXPECT_EQ(report["config"]["folds"], 5);

  EXPECT_EQ(run({"fit", "--manifest", manifest, "--kappa-grid", "0.6,0.6,0"}).code, 2);
  EXPECT_EQ(run({"fit", "--manifest", manifest, "--kappa-grid", "0.6,x,0"}).code, 2);
  EXPECT_EQ(run({"fit", "--manifest", manifest, "--folds", "50"}).code, 2);
}

TEST(Cli, FitRejectsInconsistentAgents) {
  const auto dir = scratch("fit_mixed_sizes");
  ASSERT_EQ(run({"simulate", "--model", "lra", "--events", "2", "--agents", "5", "--steps", "150", "--out",
                 (dir / "a").string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--model", "lra", "--events", "2", "--agents", "6", "--steps", "150", "--out",
                 (dir / "b").string()}).code, 0);
  const auto r = run({"fit", "--manifest", (dir / "a" / "manifest.json").string(), "--manifest",
                      (dir / "b" / "manifest.json").string(), "--folds", "2"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, ClassifyReportsAndRejectsUnlabeled) {
  const auto dir = scratch("classify");
  std::vector<std::string> args{"classify", "--folds", "3"};
  for (const char* model : {"hm", "lra", "random"}) {
    std::vector<std::string> sim{"simulate", "--model", model, "--events", "6", "--steps", "150", "--seed", "9",
                                 "--out", (dir / model).string()};
    if (std::string(model) == "hm") sim.insert(sim.end(), {"--rho", "1"});
    ASSERT_EQ(run(sim).code, 0);
    args.insert(args.end(), {"--manifest", (dir / model / "manifest.json").string()});
  }
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  ASSERT_EQ(report["classes"].size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t row = 0;
    for (const auto& v : report["confusion"][c]) row += v.get<std::size_t>();
    EXPECT_EQ(row, 6u);
  }

  std::ofstream(dir / "unlabeled.json") << R"([{"path": "hm/event_000.csv", "informed_ids": [1]},
                                               {"path": "lra/event_000.csv", "informed_ids": [1]}])";
  EXPECT_EQ(run({"classify", "--manifest", (dir / "unlabeled.json").string(), "--folds", "2"}).code, 3);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"fit"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
