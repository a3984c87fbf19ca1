// Rate fitting, injected sweeps, small real sweeps and result emission.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "kgl/error.hpp"
#include "kgl/experiments.hpp"
#include "kgl/norms.hpp"

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kglab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

kgl::SweepConfig small_rate_config() {
  kgl::SweepConfig c;
  c.study = kgl::Study::rate_kg_vs_sw;
  c.epsilons = {0.25, 0.125, 0.0625};
  c.extent = 40.0;
  c.points = 256;
  c.horizon = 0.5;
  c.samples_per_unit = 16;
  c.policy.base_step = 0.05;
  c.data.velocity_amplitude = 0.5;
  c.data.velocity_center = {1.0};
  return c;
}

TEST(FitRate, ExactPowerLaws) {
  const auto f = kgl::fit_rate({{0.5, 0.25}, {0.25, 0.0625}, {0.125, 1.0 / 64}});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 0.0, 1e-14);
  EXPECT_LE(f.residual, 1e-14);
  EXPECT_EQ(f.points, 3);
  const auto g = kgl::fit_rate({{0.3, 0.3}, {0.2, 0.2}, {0.1, 0.1}, {0.05, 0.05}});
  EXPECT_NEAR(g.slope, 1.0, 1e-14);
}

TEST(FitRate, NoisySlopeTwo) {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::vector<std::pair<double, double>> pts;
  for (double e = 0.5; e > 0.01; e /= 2) pts.emplace_back(e, 3.0 * e * e * (1.0 + noise(rng)));
  const auto f = kgl::fit_rate(pts);
  EXPECT_NEAR(f.slope, 2.0, 0.1);
  EXPECT_GT(f.residual, 0.0);
}

TEST(FitRate, Preconditions) {
  EXPECT_THROW(kgl::fit_rate({{0.5, 0.1}, {0.25, 0.05}}), std::invalid_argument);
  EXPECT_THROW(kgl::fit_rate({{0.5, 0.1}, {0.25, 0.0}, {0.1, 0.01}}), std::invalid_argument);
  EXPECT_THROW(kgl::fit_rate({{0.5, 0.1}, {-0.25, 0.05}, {0.1, 0.01}}), std::invalid_argument);
}

TEST(Injection, SweepSlopeExact) {
  kgl::SweepConfig c = small_rate_config();
  c.epsilons = {0.25, 0.125, 0.0625, 0.03125};
  c.injection = {true, 0.7, 2.0};
  const auto r = kgl::run_study(c);
  ASSERT_TRUE(r.fit);
  EXPECT_NEAR(r.fit->slope, 2.0, 1e-12);
  EXPECT_LT(r.fit->residual, 1e-12);
}

TEST(Injection, GrowthSlopeHalf) {
  kgl::SweepConfig c;
  c.study = kgl::Study::growth_in_time;
  c.epsilons = {0.0625};
  c.injection = {true, 1.0, 0.5};
  const auto r = kgl::run_study(c);
  ASSERT_TRUE(r.fit);
  EXPECT_NEAR(r.fit->slope, 0.5, 1e-12);
  EXPECT_EQ(r.rows.size(), static_cast<std::size_t>(c.t_count));
  EXPECT_NEAR(r.rows.front().t, c.t_min, 1e-12);
  EXPECT_NEAR(r.rows.back().t, c.window_delta / (0.0625 * 0.0625), 1e-9);
}

TEST(Injection, EmptyGrowthWindowRejected) {
  kgl::SweepConfig c;
  c.study = kgl::Study::growth_in_time;
  c.epsilons = {0.9};
  c.window_delta = 0.5;
  c.injection.enabled = true;
  EXPECT_THROW(kgl::run_study(c), std::invalid_argument);
}

TEST(Config, ValidateRejects) {
  kgl::SweepConfig c = small_rate_config();
  c.epsilons = {0.1, 0.2, 0.05};
  EXPECT_THROW(c.validate(), kgl::ConfigError);
  c = small_rate_config();
  c.epsilons = {0.25, 0.125};
  EXPECT_THROW(c.validate(), kgl::ConfigError);
  c.injection.enabled = true;
  EXPECT_NO_THROW(c.validate());
  c = small_rate_config();
  c.points = 100;
  EXPECT_THROW(c.validate(), kgl::ConfigError);
}

TEST(Sweep, SmallRealSweepDecreasesAndIsDeterministic) {
  kgl::SweepConfig c = small_rate_config();
  const auto a = kgl::run_study(c);
  ASSERT_EQ(a.legs.size(), 3u);
  for (const auto& leg : a.legs) EXPECT_TRUE(std::isfinite(leg.value));
  int inversions = 0;
  for (std::size_t i = 1; i < a.legs.size(); ++i) inversions += a.legs[i].value >= a.legs[i - 1].value;
  EXPECT_LE(inversions, 1);
  EXPECT_GT(a.legs[0].value, a.legs[2].value);

  c.jobs = 3;
  const auto b = kgl::run_study(c);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i], b.rows[i]);
}

TEST(Sweep, HalvingStepBarelyMovesError) {
  kgl::SweepConfig c = small_rate_config();
  c.epsilons = {0.25, 0.125, 0.0625};
  const auto coarse = kgl::run_study(c);
  c.policy.base_step *= 0.5;
  const auto fine = kgl::run_study(c);
  for (std::size_t i = 0; i < coarse.legs.size(); ++i) {
    EXPECT_LT(std::abs(coarse.legs[i].value - fine.legs[i].value), 0.05 * fine.legs[i].value)
        << "eps=" << coarse.legs[i].epsilon;
  }
}

TEST(Sweep, ChirpedRequiresAnnulusData) {
  kgl::SweepConfig c = small_rate_config();
  c.study = kgl::Study::sharpness_chirped;
  c.horizon = 2.0;
  EXPECT_THROW(kgl::run_study(c), kgl::ConfigError);
}

TEST(PreparedData, ProfileRelations) {
  kgl::SweepConfig c = small_rate_config();
  c.data.family = kgl::DataFamily::rough_sobolev;
  c.data.delta0 = 0.5;
  const kgl::TorusGrid g = kgl::make_grid(1, 40.0, 256);
  const kgl::PreparedData d = kgl::prepare_data(c, g);
  EXPECT_NEAR(kgl::l2_norm(d.v0), 0.5, 1e-12);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_DOUBLE_EQ(d.u0.values()[i].real(), 2 * d.v0.values()[i].real());
    EXPECT_DOUBLE_EQ(d.u1.values()[i].real(), -2 * d.v0.values()[i].imag());
  }
}

TEST(Emit, EmptyResultIsHeaderOnly) {
  const fs::path dir = scratch_dir("empty");
  kgl::SweepResult r;
  const auto files = kgl::emit_results(r, kgl::RunManifest{}, dir, "empty");
  EXPECT_EQ(slurp(files.csv), kgl::csv_header() + "\n");
  EXPECT_TRUE(fs::exists(files.manifest));
  EXPECT_FALSE(files.plot);
  fs::remove_all(dir);
}

TEST(Emit, CsvRoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  kgl::SweepResult r;
  for (int i = 0; i < 50; ++i) {
    kgl::ResultRow row;
    row.study = "rate-kg-vs-sw";
    row.d = 1 + i % 2;
    row.epsilon = std::exp(u(rng));
    row.t = std::abs(u(rng));
    row.err_l2 = std::exp(u(rng));
    row.err_sobolev_gamma = std::exp(u(rng));
    row.w1_l2 = 1.0 / 3.0;
    row.w2_l2 = std::nextafter(1.0, 2.0);
    row.energy_drift = 1e-300 * (i + 1);
    row.mass_drift = 0.1 + 0.2;
    row.scheme = "strang-trig";
    row.h0 = 0.05;
    row.grid_points = 512;
    row.box_extent = 40.0;
    r.rows.push_back(row);
  }
  const fs::path dir = scratch_dir("roundtrip");
  const auto files = kgl::emit_results(r, kgl::RunManifest{}, dir, "rt", true);
  const auto back = kgl::read_csv(files.csv);
  ASSERT_EQ(back.size(), r.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], r.rows[i]) << "row " << i;
  ASSERT_TRUE(files.plot);
  EXPECT_TRUE(fs::exists(*files.plot));
  fs::remove_all(dir);
}

TEST(Emit, BadHeaderRejected) {
  EXPECT_THROW(kgl::parse_csv("a,b,c\n1,2,3\n"), std::invalid_argument);
  EXPECT_THROW(kgl::parse_csv(kgl::csv_header() + "\nrate,1,2\n"), std::invalid_argument);
}

TEST(Emit, UnwritableDirectoryIsIoError) {
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir.parent_path());
  std::ofstream(dir) << "a file, not a directory";
  EXPECT_THROW(kgl::emit_results(kgl::SweepResult{}, kgl::RunManifest{}, dir / "sub", "x"), kgl::IoError);
  fs::remove_all(dir);
}

TEST(Manifest, RecordsDriftsGuardAndConfig) {
  kgl::SweepConfig c = small_rate_config();
  c.injection.enabled = true;
  const auto r = kgl::run_study(c);
  const auto m = kgl::make_manifest(c, r, 1.5);
  auto has = [&](const std::string& key) {
    for (const auto& [k, v] : m.entries) {
      if (k == key) return true;
    }
    return false;
  };
  EXPECT_TRUE(has("code.version"));
  EXPECT_TRUE(has("config.run.epsilons"));
  EXPECT_TRUE(has("config.data.mollify"));
  EXPECT_TRUE(has("leg.0.energy_drift"));
  EXPECT_TRUE(has("mass_guard.passed"));
  EXPECT_TRUE(has("fit.slope"));
  EXPECT_TRUE(has("wall_seconds"));
}

TEST(MassGuard, HalfBoxFraction) {
  const kgl::TorusGrid g = kgl::make_grid(1, 40.0, 256);
  EXPECT_LT(kgl::mass_outside_half_box(kgl::gaussian(g, 1.0, 1.0)), 1e-10);
  EXPECT_GT(kgl::mass_outside_half_box(kgl::gaussian(g, 1.0, 1.0, {15.0})), 0.9);
}

}  // namespace
