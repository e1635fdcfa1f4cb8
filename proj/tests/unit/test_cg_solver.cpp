#include <gtest/gtest.h>

#include <cmath>

#include "pun/cg_solver.hpp"
#include "pun/forward_model.hpp"
#include "test_support.hpp"

using namespace pun;
using pun::testing::max_abs_diff;
using pun::testing::random_image;
using pun::testing::random_kspace;
using pun::testing::random_operator;

namespace {

ComplexImage dc_objective_gradient(const ForwardOperator& op, const KSpaceData& y,
                                   const ComplexImage& z, const ComplexImage& x, double lambda) {
  KSpaceData r = apply_forward(op, x);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= y.data()[i];
  ComplexImage g = apply_adjoint(op, r);
  for (std::size_t i = 0; i < g.size(); ++i)
    g.data()[i] = 2.0 * g.data()[i] + 2.0 * lambda * (x.data()[i] - z.data()[i]);
  return g;
}

KSpaceData measured(const ForwardOperator& op, std::uint64_t seed) {
  return apply_forward(op, random_image(op.height(), op.width(), seed));
}

}  // namespace

TEST(SolveDc, EmptyMaskReturnsZ) {
  ForwardOperator op(SamplingMask::empty(8), pun::testing::random_maps(2, 8, 8, 1));
  const ComplexImage z = random_image(8, 8, 2);
  const DcResult r = solve_dc(op, KSpaceData(2, 8, 8), z, DcConfig{});
  EXPECT_EQ(r.x, z);
}

TEST(SolveDc, FullSamplingHalvesTheSum) {
  ForwardOperator op(SamplingMask::full(8), SensitivityMaps::unit(8, 8));
  const ComplexImage z = random_image(8, 8, 3);
  const KSpaceData y = random_kspace(1, 8, 8, 4);
  const ComplexImage ahy = apply_adjoint(op, y);
  const DcResult r = solve_dc(op, y, z, DcConfig{});
  ComplexImage expected(8, 8);
  for (std::size_t i = 0; i < expected.size(); ++i)
    expected.data()[i] = (ahy.data()[i] + z.data()[i]) / 2.0;
  EXPECT_LE(max_abs_diff(r.x.data(), expected.data()), 1e-8);
  EXPECT_TRUE(r.converged);
}

TEST(SolveDc, ObjectiveGradientVanishesAtSolution) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto op = random_operator(4, 16, 4.0, 10 + seed);
    const KSpaceData y = measured(op, 20 + seed);
    const ComplexImage z = random_image(16, 16, 30 + seed);
    DcConfig cfg;
    const DcResult r = solve_dc(op, y, z, cfg);
    ASSERT_TRUE(r.converged);
    const ComplexImage g = dc_objective_gradient(op, y, z, r.x, cfg.lambda);
    EXPECT_LE(norm(g.data()), 1e-5 * (1.0 + norm(r.x.data()))) << seed;
  }
}

TEST(SolveDc, ResidualHistoryEndsBelowTolerance) {
  const auto op = random_operator(2, 16, 4.0, 3);
  const DcResult r = solve_dc(op, measured(op, 4), random_image(16, 16, 5), DcConfig{});
  ASSERT_EQ(r.residual_history.size(), static_cast<std::size_t>(r.iterations) + 1);
  EXPECT_LE(r.residual_history.back(), 1e-6);
  EXPECT_EQ(r.relative_residual, r.residual_history.back());
}

TEST(SolveDc, ReportsNonConvergenceWithoutThrowing) {
  const auto op = random_operator(4, 32, 4.0, 6);
  DcConfig cfg;
  cfg.lambda = 1e-4;
  cfg.tol = 1e-14;
  cfg.max_iter = 2;
  const DcResult r = solve_dc(op, measured(op, 7), random_image(32, 32, 8), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_TRUE(r.x.all_finite());
}

TEST(SolveDc, WarmStartGivesSameSolution) {
  const auto op = random_operator(2, 16, 4.0, 9);
  const KSpaceData y = measured(op, 10);
  const ComplexImage z = random_image(16, 16, 11);
  DcConfig cfg;
  cfg.tol = 1e-12;
  cfg.max_iter = 200;
  const ComplexImage start = random_image(16, 16, 12);
  const DcResult a = solve_dc(op, y, z, cfg);
  const DcResult b = solve_dc(op, y, z, cfg, &start);
  EXPECT_LE(max_abs_diff(a.x.data(), b.x.data()), 1e-9);
}

TEST(DcConfig, RejectsNonPositiveValues) {
  DcConfig cfg;
  cfg.lambda = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.lambda = 1.0;
  cfg.tol = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(DcGradient, EmptyMaskIsIdentity) {
  ForwardOperator op(SamplingMask::empty(8), SensitivityMaps::unit(8, 8));
  const ComplexImage g = random_image(8, 8, 1);
  EXPECT_LE(max_abs_diff(dc_gradient(op, g, DcConfig{}).x.data(), g.data()), 1e-15);
}

TEST(DcGradient, FullSamplingHalves) {
  ForwardOperator op(SamplingMask::full(8), pun::testing::random_maps(3, 8, 8, 2));
  const ComplexImage g = random_image(8, 8, 3);
  const DcResult r = dc_gradient(op, g, DcConfig{});
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(std::abs(r.x.data()[i] - g.data()[i] / 2.0), 0.0, 1e-10);
}

TEST(DcGradient, MatchesCentralDifferencesOfSolve) {
  const auto op = random_operator(2, 8, 2.0, 13);
  const KSpaceData y = measured(op, 14);
  const ComplexImage z = random_image(8, 8, 15);
  const ComplexImage dir = random_image(8, 8, 16);
  DcConfig cfg;
  cfg.tol = 1e-14;
  cfg.max_iter = 500;
  const double h = 1e-6;
  ComplexImage zp = z, zm = z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    zp.data()[i] += h * dir.data()[i];
    zm.data()[i] -= h * dir.data()[i];
  }
  const ComplexImage xp = solve_dc(op, y, zp, cfg).x;
  const ComplexImage xm = solve_dc(op, y, zm, cfg).x;
  ComplexImage fd(8, 8);
  for (std::size_t i = 0; i < fd.size(); ++i) fd.data()[i] = (xp.data()[i] - xm.data()[i]) / (2 * h);
  const ComplexImage jv = dc_gradient(op, dir, cfg).x;
  EXPECT_LE(max_abs_diff(fd.data(), jv.data()) / norm(jv.data()), 1e-6);
}

TEST(DcGradient, IsSelfAdjoint) {
  const auto op = random_operator(4, 16, 4.0, 17);
  DcConfig cfg;
  cfg.tol = 1e-14;
  cfg.max_iter = 500;
  const ComplexImage u = random_image(16, 16, 18);
  const ComplexImage v = random_image(16, 16, 19);
  const cplx a = inner(dc_gradient(op, u, cfg).x.data(), v.data());
  const cplx b = inner(u.data(), dc_gradient(op, v, cfg).x.data());
  EXPECT_LE(std::abs(a - b) / std::abs(a), 1e-10);
}
