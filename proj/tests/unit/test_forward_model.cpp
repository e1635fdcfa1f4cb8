#include <gtest/gtest.h>

#include <cmath>

#include "pun/fft.hpp"
#include "pun/forward_model.hpp"
#include "test_support.hpp"

using namespace pun;
using pun::testing::random_image;
using pun::testing::random_kspace;
using pun::testing::random_operator;

namespace {

double adjoint_error(const ForwardOperator& op, std::uint64_t seed) {
  const ComplexImage x = random_image(op.height(), op.width(), seed);
  const KSpaceData y = random_kspace(op.num_coils(), op.height(), op.width(), seed + 100);
  const KSpaceData ax = apply_forward(op, x);
  const ComplexImage ahy = apply_adjoint(op, y);
  const cplx lhs = inner(ax.data(), y.data());
  const cplx rhs = inner(x.data(), ahy.data());
  return std::abs(lhs - rhs) / (norm(ax.data()) * norm(y.data()));
}

}  // namespace

TEST(CenteredFft, InverseUndoesForwardOnOddAndEvenSizes) {
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{8, 8}, {5, 7}, {6, 9}}) {
    const ComplexImage x = random_image(h, w, 11);
    std::vector<cplx> k(h * w), back(h * w);
    centered_fft2(x.data(), k, h, w, FftDirection::Forward);
    centered_fft2(k, back, h, w, FftDirection::Inverse);
    EXPECT_LT(pun::testing::max_abs_diff(back, x.data()), 1e-12);
    EXPECT_NEAR(norm(k), norm(x.data()), 1e-10);
  }
}

TEST(CenteredFft, ConstantImageConcentratesAtCentre) {
  ComplexImage x(8, 8, std::vector<cplx>(64, cplx{1.0, 0.0}));
  std::vector<cplx> k(64);
  centered_fft2(x.data(), k, 8, 8, FftDirection::Forward);
  EXPECT_NEAR(std::abs(k[4 * 8 + 4]), 8.0, 1e-12);
  EXPECT_NEAR(squared_norm(k), 64.0, 1e-10);
}

TEST(ApplyForward, ZeroImageGivesZeroKspace) {
  const auto op = random_operator(2, 8, 2.0, 1);
  const KSpaceData y = apply_forward(op, ComplexImage(8, 8));
  for (const auto& v : y.data()) EXPECT_EQ(v, cplx{});
}

TEST(ApplyForward, CentredImpulseHasFlatSpectrum) {
  const std::size_t h = 8, w = 16;
  ForwardOperator op(SamplingMask::full(w), SensitivityMaps::unit(h, w));
  ComplexImage x(h, w);
  x(h / 2, w / 2) = 1.0;
  const KSpaceData y = apply_forward(op, x);
  const double expected = 1.0 / std::sqrt(static_cast<double>(h * w));
  for (const auto& v : y.data()) EXPECT_NEAR(std::abs(v), expected, 1e-14);
}

TEST(ApplyForward, UnsampledColumnsAreExactlyZero) {
  const auto op = random_operator(3, 16, 4.0, 2);
  const KSpaceData y = apply_forward(op, random_image(16, 16, 3));
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t r = 0; r < 16; ++r)
      for (std::size_t k = 0; k < 16; ++k)
        if (!op.mask().sampled(k)) EXPECT_EQ(y(c, r, k), cplx{});
}

TEST(ApplyForward, RejectsDimensionMismatch) {
  const auto op = random_operator(2, 8, 2.0, 1);
  EXPECT_THROW(apply_forward(op, ComplexImage(8, 16)), std::invalid_argument);
  EXPECT_THROW(apply_adjoint(op, KSpaceData(3, 8, 8)), std::invalid_argument);
  EXPECT_THROW(apply_adjoint(op, KSpaceData(2, 8, 4)), std::invalid_argument);
}

TEST(ApplyAdjoint, ZeroKspaceGivesZeroImage) {
  const auto op = random_operator(2, 8, 2.0, 1);
  const ComplexImage x = apply_adjoint(op, KSpaceData(2, 8, 8));
  for (const auto& v : x.data()) EXPECT_EQ(v, cplx{});
}

TEST(ApplyAdjoint, InvertsFullySampledSingleCoil) {
  ForwardOperator op(SamplingMask::full(16), SensitivityMaps::unit(16, 16));
  const ComplexImage x = random_image(16, 16, 5);
  const ComplexImage back = apply_adjoint(op, apply_forward(op, x));
  EXPECT_LT(pun::testing::max_abs_diff(back.data(), x.data()), 1e-10);
}

TEST(AdjointIdentity, Seed7TwoCoils8x8) {
  const auto op = random_operator(2, 8, 2.0, 7);
  EXPECT_LE(adjoint_error(op, 7), 1e-12);
}

TEST(AdjointIdentity, HoldsAcrossSizesAndCoils) {
  std::uint64_t seed = 100;
  for (std::size_t size : {8, 16, 32}) {
    for (std::size_t coils : {1, 2, 4}) {
      const auto op = random_operator(coils, size, 4.0, seed++);
      EXPECT_LE(adjoint_error(op, seed++), 1e-10) << size << "x" << size << ", " << coils << " coils";
    }
  }
}

TEST(ForwardOperatorProperties, IsLinear) {
  const auto op = random_operator(4, 16, 4.0, 21);
  const ComplexImage x1 = random_image(16, 16, 22);
  const ComplexImage x2 = random_image(16, 16, 23);
  const cplx a{0.7, -1.3}, b{-0.2, 0.4};
  ComplexImage mix(16, 16);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.data()[i] = a * x1.data()[i] + b * x2.data()[i];
  const KSpaceData lhs = apply_forward(op, mix);
  const KSpaceData y1 = apply_forward(op, x1);
  const KSpaceData y2 = apply_forward(op, x2);
  double err = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    err = std::max(err, std::abs(lhs.data()[i] - (a * y1.data()[i] + b * y2.data()[i])));
  EXPECT_LE(err, 1e-12 * (1.0 + norm(lhs.data())));
}

TEST(ForwardOperatorProperties, NormalOperatorIsIdentityWithFullSampling) {
  ForwardOperator op(SamplingMask::full(16), pun::testing::random_maps(4, 16, 16, 9));
  const ComplexImage x = random_image(16, 16, 10);
  EXPECT_LT(pun::testing::max_abs_diff(apply_normal(op, x).data(), x.data()), 1e-10);
  EXPECT_LT(pun::testing::max_abs_diff(apply_adjoint(op, apply_forward(op, x)).data(), x.data()), 1e-10);
}

TEST(GenerateMask, Width32Accel4Acs4) {
  const SamplingMask m = generate_mask(32, 4.0, 4, 0);
  EXPECT_EQ(m.num_sampled(), 8u);
  for (std::size_t k = 14; k < 18; ++k) EXPECT_TRUE(m.sampled(k)) << k;
}

TEST(GenerateMask, AccelerationOneSamplesEverything) {
  const SamplingMask m = generate_mask(24, 1.0, 4, 3);
  EXPECT_EQ(m.num_sampled(), 24u);
}

TEST(GenerateMask, DeterministicPerSeed) {
  EXPECT_EQ(generate_mask(64, 4.0, 4, 42), generate_mask(64, 4.0, 4, 42));
  EXPECT_NE(generate_mask(64, 4.0, 4, 42).lines, generate_mask(64, 4.0, 4, 43).lines);
}

TEST(GenerateMask, LineCountMatchesBudgetEverywhere) {
  for (std::size_t width : {8, 16, 31, 32, 64, 100, 320}) {
    for (double accel : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
      const std::size_t budget = static_cast<std::size_t>(std::llround(width / accel));
      const std::size_t acs = std::min<std::size_t>(4, budget);
      for (std::uint64_t seed : {0u, 1u, 2u}) {
        const SamplingMask m = generate_mask(width, accel, acs, seed);
        ASSERT_EQ(m.num_sampled(), budget) << width << " @ " << accel;
        const std::size_t start = width / 2 - acs / 2;
        for (std::size_t i = 0; i < acs; ++i) ASSERT_TRUE(m.sampled(start + i));
      }
    }
  }
}

TEST(GenerateMask, DenserNearCentre) {
  // Averaged over seeds, the central half holds more lines than the outer half.
  double centre = 0, outer = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SamplingMask m = generate_mask(128, 4.0, 0, seed);
    for (std::size_t k = 0; k < 128; ++k) (k >= 32 && k < 96 ? centre : outer) += m.lines[k];
  }
  EXPECT_GT(centre, outer);
}

TEST(GenerateMask, RejectsBudgetBelowAcs) {
  EXPECT_THROW(generate_mask(32, 8.0, 6, 0), std::invalid_argument);
  EXPECT_THROW(generate_mask(32, 0.5, 0, 0), std::invalid_argument);
}

TEST(NormalizeKspace, ScalesByLargestComponent) {
  KSpaceData y(1, 1, 4, {cplx{-4, 1}, cplx{2, -1}, cplx{0, 3}, cplx{1, 0}});
  auto [out, scale] = normalize_kspace(y);
  EXPECT_EQ(scale, 4.0);
  for (const auto& v : out.data()) {
    EXPECT_LE(std::abs(v.real()), 1.0);
    EXPECT_LE(std::abs(v.imag()), 1.0);
  }
  EXPECT_EQ(out.data()[0], (cplx{-1.0, 0.25}));
}

TEST(NormalizeKspace, AlreadyNormalisedIsIdentity) {
  KSpaceData y(1, 1, 3, {cplx{1, 0.5}, cplx{-0.3, 0.2}, cplx{0, -1}});
  auto [out, scale] = normalize_kspace(y);
  EXPECT_EQ(scale, 1.0);
  EXPECT_EQ(out, y);
}

TEST(NormalizeKspace, RandomDataPeaksAtExactlyOne) {
  const KSpaceData y = random_kspace(2, 8, 8, 3);
  auto [out, scale] = normalize_kspace(y);
  double peak = 0.0;
  for (const auto& v : out.data()) peak = std::max({peak, std::abs(v.real()), std::abs(v.imag())});
  EXPECT_EQ(peak, 1.0);
  EXPECT_GT(scale, 0.0);
}

TEST(NormalizeKspace, RejectsAllZero) {
  EXPECT_THROW(normalize_kspace(KSpaceData(1, 4, 4)), std::invalid_argument);
}

TEST(AddNoise, ZeroSigmaIsIdentity) {
  const KSpaceData y = random_kspace(2, 8, 8, 4);
  EXPECT_EQ(add_noise(y, SamplingMask::full(8), 0.0, 1), y);
}

TEST(AddNoise, UnsampledColumnsStayZero) {
  const auto op = random_operator(2, 16, 4.0, 5);
  const KSpaceData y = apply_forward(op, random_image(16, 16, 6));
  const KSpaceData noisy = add_noise(y, op.mask(), 0.5, 7);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t r = 0; r < 16; ++r)
      for (std::size_t k = 0; k < 16; ++k) {
        if (!op.mask().sampled(k)) {
          EXPECT_EQ(noisy(c, r, k), cplx{});
        } else {
          EXPECT_NE(noisy(c, r, k), y(c, r, k));
        }
      }
}

TEST(AddNoise, EmpiricalStdMatchesSigma) {
  const KSpaceData y(1, 100, 100);
  const KSpaceData noisy = add_noise(y, SamplingMask::full(100), 0.05, 11);
  double sum = 0, sum2 = 0;
  for (const auto& v : noisy.data()) {
    sum += v.real();
    sum2 += v.real() * v.real();
  }
  const double n = 1e4;
  const double sd = std::sqrt((sum2 - sum * sum / n) / (n - 1));
  EXPECT_NEAR(sd, 0.05, 0.005);
}

TEST(AddNoise, DeterministicAndRejectsNegativeSigma) {
  const KSpaceData y = random_kspace(1, 8, 8, 1);
  EXPECT_EQ(add_noise(y, SamplingMask::full(8), 0.1, 3), add_noise(y, SamplingMask::full(8), 0.1, 3));
  EXPECT_THROW(add_noise(y, SamplingMask::full(8), -0.1, 3), std::invalid_argument);
}

TEST(SensitivityMaps, RejectsZeroEnergyPixels) {
  EXPECT_THROW(SensitivityMaps::normalized(CoilArray(2, 4, 4)), std::invalid_argument);
  CoilArray bad(1, 2, 2, std::vector<cplx>(4, cplx{2.0, 0.0}));
  EXPECT_THROW(SensitivityMaps::from_normalized(bad), std::invalid_argument);
}
