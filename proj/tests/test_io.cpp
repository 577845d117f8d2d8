#include "fixtures.hpp"

#include "mapcalc/errors.hpp"
#include "mapcalc/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace mapcalc;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "mapcalc_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void expect_same_values(const SampledMap& a, const SampledMap& b) {
  ASSERT_EQ(a.resolution(), b.resolution());
  ASSERT_EQ(a.atlas().chart_count(), b.atlas().chart_count());
  EXPECT_TRUE(a.target() == b.target());
  for (int c = 0; c < a.atlas().chart_count(); ++c)
    for (int node = 0; node < a.grid(c).node_count(); ++node)
      EXPECT_EQ(a.value(c, node).coords, b.value(c, node).coords);
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST(MapCsv, RoundTripIsBitIdentical) {
  Rng rng(4);
  for (bool on_sphere : {true, false}) {
    SampledMap f = on_sphere ? random_sphere_map(sphere(), 32, rng)
                             : random_torus_map(torus(), 32, rng);
    fs::path p = scratch(on_sphere ? "sphere.csv" : "torus.csv");
    write_map_csv(f, p.string());
    expect_same_values(f, read_map_csv(p.string()));
  }
}

TEST(MapCsv, ConformalTargetSurvives) {
  TargetManifold m = sphere().with_conformal_factor("1 + 0.3*z*z");
  SampledMap f = great_circle(m, 16);
  fs::path p = scratch("conformal.csv");
  write_map_csv(f, p.string());
  SampledMap g = read_map_csv(p.string());
  EXPECT_TRUE(g.target() == m);
  expect_same_values(f, g);
}

TEST(SectionCsv, RoundTripIsBitIdentical) {
  Rng rng(5);
  MapPtr f = share(random_sphere_map(sphere(), 32, rng));
  PullbackSection s = random_section(f, 0.2, 0.5, rng);
  fs::path p = scratch("section.csv");
  write_section_csv(s, p.string());
  PullbackSection t = read_section_csv(p.string());
  expect_same_values(s.base_map(), t.base_map());
  for (int c = 0; c < f->atlas().chart_count(); ++c)
    EXPECT_EQ(s.chart_vectors(c), t.chart_vectors(c));
}

TEST(TraceCsv, RoundTripAndLayout) {
  DescentTrace trace;
  trace.initial_energy = 4.0;
  trace.rows.push_back({1, 3.5, 0.25, 0.1});
  fs::path p = scratch("trace1.csv");
  write_trace_csv(trace, p.string());
  EXPECT_EQ(line_count(p), 2u);
  trace.rows.push_back({2, 3.25, 0.125, 0.05});
  write_trace_csv(trace, p.string());
  DescentTrace back = read_trace_csv(p.string());
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].step, 2);
  EXPECT_EQ(back.rows[1].energy, 3.25);
  EXPECT_EQ(back.rows[1].grad_norm, 0.125);
  EXPECT_EQ(back.rows[1].step_size, 0.05);
}

TEST(TraceCsv, EmptyTraceIsRejected) {
  EXPECT_THROW(write_trace_csv(DescentTrace{}, scratch("empty.csv").string()), InvalidArgument);
}

TEST(Files, MissingAndMalformedInput) {
  fs::path missing = scratch("does_not_exist.csv");
  fs::remove(missing);
  EXPECT_THROW(read_map_csv(missing.string()), IoError);
  EXPECT_THROW(read_json(missing.string()), IoError);
  EXPECT_THROW(write_json(json::object(), "/nonexistent_dir/x/y.json"), IoError);

  fs::path bad = scratch("bad.csv");
  std::ofstream(bad) << "# {not json\n0,0,1,2\n";
  EXPECT_THROW(read_map_csv(bad.string()), ParseError);
  std::ofstream(bad) << "step,energy,grad_norm,step_size\n1,abc,0,0\n";
  EXPECT_THROW(read_trace_csv(bad.string()), ParseError);
  std::ofstream(bad) << "{\"a\": ";
  EXPECT_THROW(read_json(bad.string()), ParseError);
}

TEST(Json, RoundTrip) {
  json j{{"x", 0.1}, {"list", {1, 2, 3}}, {"nested", {{"s", "text"}}}};
  fs::path p = scratch("j.json");
  write_json(j, p.string());
  EXPECT_EQ(read_json(p.string()), j);
}
