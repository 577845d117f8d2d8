#include "mapcalc/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mapcalc;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "mapcalc_test_cli";

int run(const std::string& args) {
  std::string cmd = std::string(MAPCALC_BIN) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const json& j) {
  fs::create_directories(kWork);
  fs::path p = kWork / name;
  write_json(j, p.string());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json small_config() { return json{{"resolution", 16}, {"trials", 2}, {"conformal_resolution", 8}}; }

}  // namespace

TEST(Cli, ExitCodes) {
  fs::path cfg = write_config("small.json", small_config());
  fs::path out = kWork / "codes";
  EXPECT_EQ(run("run --config " + cfg.string() + " --suite taylor --out " + out.string()), 0);
  EXPECT_EQ(run("run --config " + cfg.string() + " --suite nonsense --out " + out.string()), 2);
  EXPECT_EQ(run("run --config " + cfg.string() + " --suite taylor --resolution 4 --out " +
                out.string()),
            2);
  EXPECT_EQ(run("run --config " + (kWork / "missing.json").string() + " --suite taylor"), 3);
  fs::path bad = write_config("unknown_field.json", json{{"colour", "blue"}});
  EXPECT_EQ(run("run --config " + bad.string() + " --suite taylor"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST(Cli, SameSeedGivesIdenticalReports) {
  json j = small_config();
  j["seed"] = 7;
  fs::path cfg = write_config("seeded.json", j);
  fs::path a = kWork / "seed_a", b = kWork / "seed_b";
  ASSERT_EQ(run("run --config " + cfg.string() + " --suite charts --out " + a.string()), 0);
  ASSERT_EQ(run("run --config " + cfg.string() + " --suite charts --out " + b.string()), 0);
  std::string ra = slurp(a / "report_charts.json");
  EXPECT_FALSE(ra.empty());
  EXPECT_EQ(ra, slurp(b / "report_charts.json"));
  EXPECT_TRUE(fs::exists(a / "metadata.json"));
}

TEST(Cli, TaylorReportHasAnExactZeroRemainder) {
  fs::path cfg = write_config("taylor.json", small_config());
  fs::path out = kWork / "taylor";
  ASSERT_EQ(run("run --config " + cfg.string() + " --suite taylor --out " + out.string()), 0);
  json report = read_json((out / "report_taylor.json").string());
  bool found = false;
  for (const json& c : report.at("checks"))
    if (c.at("name") == "R(u,0)=0") {
      found = true;
      EXPECT_EQ(c.at("residual").get<double>(), 0.0);
    }
  EXPECT_TRUE(found);
  EXPECT_FALSE(report.at("config").contains("out"));
}

TEST(Cli, DescendReachesTheTorusMinimum) {
  fs::path cfg = write_config("descent.json", json::object());
  fs::path out = kWork / "descend";
  ASSERT_EQ(run("descend --config " + cfg.string() + " --out " + out.string()), 0);
  json report = read_json((out / "report_descent.json").string());
  EXPECT_NEAR(report.at("final_energy").get<double>(), 3.141592653589793, 1e-3);
  DescentTrace trace = read_trace_csv((out / "descent_trace.csv").string());
  EXPECT_TRUE(trace.monotone());
  EXPECT_TRUE(fs::exists(out / "descent_final_map.csv"));
}
