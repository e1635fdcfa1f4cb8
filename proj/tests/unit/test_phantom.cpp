#include <gtest/gtest.h>

#include <cmath>

#include "pun/forward_model.hpp"
#include "pun/phantom.hpp"
#include "test_support.hpp"

using namespace pun;

TEST(GeneratePhantom, DeterministicPerSeed) {
  EXPECT_EQ(generate_phantom(32, 5), generate_phantom(32, 5));
  EXPECT_EQ(generate_phantom(32, 5, PhantomFamily::shifted()),
            generate_phantom(32, 5, PhantomFamily::shifted()));
}

TEST(GeneratePhantom, DifferentSeedsDiffer) {
  const ComplexImage a = generate_phantom(32, 1);
  const ComplexImage b = generate_phantom(32, 2);
  EXPECT_GT(pun::testing::max_abs_diff(a.data(), b.data()), 0.0);
}

TEST(GeneratePhantom, MagnitudeInUnitIntervalAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const auto& fam : {PhantomFamily::base(), PhantomFamily::shifted()}) {
      const ComplexImage x = generate_phantom(32, seed, fam);
      ASSERT_TRUE(x.all_finite());
      double hi = 0.0;
      for (const auto& v : x.data()) {
        const double m = std::abs(v);
        ASSERT_GE(m, 0.0);
        ASSERT_LE(m, 1.0 + 1e-12);
        hi = std::max(hi, m);
        if (m > 0) ASSERT_LE(std::abs(std::arg(v)), M_PI / 4 + 1e-12);
      }
      ASSERT_GT(hi, 0.0) << seed;
    }
  }
}

TEST(PhantomFamily, LookupByName) {
  EXPECT_EQ(PhantomFamily::by_name("base").name, "base");
  EXPECT_EQ(PhantomFamily::by_name("shifted").max_ellipses, PhantomFamily::shifted().max_ellipses);
  EXPECT_THROW(PhantomFamily::by_name("knee"), std::invalid_argument);
}

TEST(GenerateMaps, SumOfSquaresIsOne) {
  for (std::size_t coils : {1, 2, 4, 8}) {
    const SensitivityMaps s = generate_maps(32, coils, 3);
    const CoilArray& m = s;
    for (std::size_t r = 0; r < 32; ++r)
      for (std::size_t c = 0; c < 32; ++c) {
        double sos = 0.0;
        for (std::size_t k = 0; k < coils; ++k) sos += std::norm(m(k, r, c));
        ASSERT_NEAR(sos, 1.0, 1e-10);
      }
  }
}

TEST(GenerateMaps, SingleCoilHasUnitMagnitude) {
  const SensitivityMaps s = generate_maps(16, 1, 9);
  for (const auto& v : s.data()) EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
}

TEST(GenerateMaps, DeterministicPerSeed) {
  EXPECT_EQ(generate_maps(16, 4, 2), generate_maps(16, 4, 2));
}

TEST(BuildDataset, DistinctSeedsPerRecord) {
  DatasetConfig cfg;
  cfg.num_samples = 4;
  cfg.image_size = 16;
  const auto data = build_dataset(cfg);
  ASSERT_EQ(data.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(data[i].seed, cfg.base_seed + i);
  EXPECT_NE(data[0].ground_truth, data[1].ground_truth);
}

TEST(BuildDataset, NoiselessRecordRoundTrips) {
  DatasetConfig cfg;
  cfg.num_samples = 3;
  cfg.image_size = 16;
  for (const auto& s : build_dataset(cfg)) {
    auto [expected, scale] = normalize_kspace(apply_forward(s.op(), s.ground_truth));
    EXPECT_DOUBLE_EQ(scale, s.scale);
    EXPECT_LE(pun::testing::max_abs_diff(expected.data(), s.kspace.data()), 1e-10);
  }
}

TEST(BuildDataset, TargetIsScaledGroundTruth) {
  DatasetConfig cfg;
  cfg.num_samples = 1;
  cfg.image_size = 16;
  const auto s = build_dataset(cfg).front();
  const ComplexImage t = s.target();
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_NEAR(std::abs(t.data()[i] - s.ground_truth.data()[i] / s.scale), 0.0, 1e-15);
}

TEST(BuildDataset, DeterministicPerConfig) {
  DatasetConfig cfg;
  cfg.num_samples = 3;
  cfg.image_size = 16;
  cfg.noise_sigma = 0.05;
  const auto a = build_dataset(cfg);
  const auto b = build_dataset(cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].kspace, b[i].kspace);
    EXPECT_EQ(a[i].mask, b[i].mask);
    EXPECT_EQ(a[i].scale, b[i].scale);
  }
}

TEST(DatasetConfig, RejectsBadShapes) {
  DatasetConfig cfg;
  cfg.image_size = 24;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.image_size = 32;
  cfg.num_samples = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.num_samples = 1;
  cfg.family = "knee";
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Reacquire, NewMaskAtRequestedAcceleration) {
  DatasetConfig cfg;
  cfg.num_samples = 2;
  cfg.image_size = 32;
  const auto data = build_dataset(cfg);
  const SampleRecord r = reacquire(data[0], 8.0, 4, 0.05, 0);
  EXPECT_EQ(r.mask.num_sampled(), 4u);
  EXPECT_EQ(r.ground_truth, data[0].ground_truth);
  EXPECT_EQ(r.maps, data[0].maps);
  EXPECT_EQ(r.kspace, reacquire(data[0], 8.0, 4, 0.05, 0).kspace);
  EXPECT_NE(r.kspace, reacquire(data[0], 8.0, 4, 0.05, 1).kspace);
  EXPECT_NE(reacquire(data[0], 4.0, 4, 0.0, 0).mask.lines, data[0].mask.lines);
}

TEST(DatasetConfig, RejectsAcsAboveLineBudget) {
  DatasetConfig cfg;
  cfg.image_size = 8;
  cfg.acceleration = 4.0;
  cfg.acs_width = 4;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.acs_width = 2;
  EXPECT_NO_THROW(cfg.validate());
}
