#include <gtest/gtest.h>

#include <cmath>

#include "pun/phantom.hpp"
#include "pun/training.hpp"
#include "pun/workflows.hpp"

using namespace pun;

namespace {

std::vector<SampleRecord> tiny_dataset(std::size_t n, std::uint64_t base_seed = 0) {
  DatasetConfig cfg;
  cfg.num_samples = n;
  cfg.image_size = 8;
  cfg.num_coils = 2;
  cfg.acceleration = 2.0;
  cfg.acs_width = 2;
  cfg.base_seed = base_seed;
  return build_dataset(cfg);
}

UnrollConfig short_unroll() {
  UnrollConfig cfg;
  cfg.num_unrolls = 2;
  return cfg;
}

OptimizerConfig short_opt(int epochs) {
  OptimizerConfig opt;
  opt.epochs = epochs;
  return opt;
}

WorkflowConfig small_workflow() {
  WorkflowConfig cfg;
  cfg.unroll = short_unroll();
  cfg.opt = short_opt(3);
  cfg.mask_epochs = 2;
  cfg.at_rounds = 2;
  cfg.at_retrain_epochs = 1;
  return cfg;
}

}  // namespace

TEST(AdamStep, ZeroGradientLeavesParamsUnchanged) {
  std::vector<double> p{1.0, -2.0, 3.0}, g(3, 0.0), m1(3, 0.0), m2(3, 0.0);
  const auto before = p;
  adam_step(p, g, m1, m2, 1, OptimizerConfig{});
  EXPECT_EQ(p, before);
}

TEST(AdamStep, FirstStepIsBoundedByLearningRate) {
  std::vector<double> p{0.0, 0.0, 0.0}, g{5.0, -1e-3, 1e-12}, m1(3, 0.0), m2(3, 0.0);
  OptimizerConfig cfg;
  adam_step(p, g, m1, m2, 1, cfg);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(std::abs(p[j]), cfg.learning_rate * (1 + 1e-12));
    EXPECT_NEAR(p[j], -cfg.learning_rate * g[j] / (std::abs(g[j]) + cfg.epsilon), 1e-12);
  }
}

TEST(AdamStep, InactiveCoordinatesUntouched) {
  std::vector<double> p{1.0, 1.0}, g{0.5, 0.5}, m1(2, 0.0), m2(2, 0.0);
  const std::vector<std::uint8_t> active{1, 0};
  adam_step(p, g, m1, m2, 1, OptimizerConfig{}, active);
  EXPECT_NE(p[0], 1.0);
  EXPECT_EQ(p[1], 1.0);
  EXPECT_EQ(m1[1], 0.0);
  EXPECT_EQ(m2[1], 0.0);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  cfg.beta1 = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Train, ZeroEpochsReturnsInitialisation) {
  const auto data = tiny_dataset(4);
  const DenoiserParams init = init_params(DenoiserArch{}, 1);
  const TrainReport r = train(data, {}, init, std::nullopt, short_unroll(), short_opt(0));
  EXPECT_EQ(r.params, init);
  EXPECT_TRUE(r.epochs.empty());
}

TEST(Train, OneRecordPerEpochAndLossDecreases) {
  const auto data = tiny_dataset(6);
  const auto val = tiny_dataset(2, 1000);
  std::vector<int> seen;
  const TrainReport r = train(data, val, init_params(DenoiserArch{}, 2), std::nullopt,
                              short_unroll(), short_opt(5),
                              {}, [&](const EpochRecord& e) { seen.push_back(e.epoch); });
  ASSERT_EQ(r.epochs.size(), 5u);
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_LT(r.epochs.back().train_loss, r.epochs.front().train_loss);
  for (const auto& e : r.epochs) {
    EXPECT_TRUE(std::isfinite(e.val_psnr_db));
    EXPECT_EQ(e.active_params, r.params.size());
  }
}

TEST(Train, NoValidationSetGivesNan) {
  const TrainReport r = train(tiny_dataset(2), {}, init_params(DenoiserArch{}, 2), std::nullopt,
                              short_unroll(), short_opt(1));
  EXPECT_TRUE(std::isnan(r.epochs.front().val_psnr_db));
}

TEST(Train, MaskedTrainingOnlyMovesActiveWeights) {
  const auto data = tiny_dataset(4);
  const DenoiserParams init = init_params(DenoiserArch{}, 3);
  const std::size_t s = static_cast<std::size_t>(std::lround(0.03 * init.size()));
  std::vector<double> scores(init.size());
  for (std::size_t j = 0; j < scores.size(); ++j) scores[j] = std::abs(init.flat[j]);
  const BinaryMask mask = top_s_mask(scores, s);
  const TrainReport r = train(data, {}, init, mask, short_unroll(), short_opt(2));
  std::size_t changed = 0;
  for (std::size_t j = 0; j < init.size(); ++j) {
    if (r.params.flat[j] != init.flat[j]) {
      ++changed;
      EXPECT_TRUE(mask.bits[j]) << j;
    }
  }
  EXPECT_LE(changed, s);
  EXPECT_EQ(r.epochs.back().active_params, s);
}

TEST(Train, IdenticalSamplesMakeShuffleOrderIrrelevant) {
  auto one = tiny_dataset(1);
  std::vector<SampleRecord> copies(4, one.front());
  OptimizerConfig a = short_opt(2), b = short_opt(2);
  b.seed = 77;
  const DenoiserParams init = init_params(DenoiserArch{}, 4);
  EXPECT_EQ(train(copies, {}, init, std::nullopt, short_unroll(), a).params,
            train(copies, {}, init, std::nullopt, short_unroll(), b).params);
}

TEST(Train, DeterministicAcrossRuns) {
  const auto data = tiny_dataset(5);
  const DenoiserParams init = init_params(DenoiserArch{}, 5);
  const TrainReport a = train(data, {}, init, std::nullopt, short_unroll(), short_opt(2));
  const TrainReport b = train(data, {}, init, std::nullopt, short_unroll(), short_opt(2));
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.epochs.back().train_loss, b.epochs.back().train_loss);
}

TEST(Train, ScheduleEndsAtTargetCount) {
  const auto data = tiny_dataset(4);
  const DenoiserParams init = init_params(DenoiserArch{}, 6);
  const auto schedule = pun_wt_schedule(6, 0.05);
  const TrainReport r = train(data, {}, init, std::nullopt, short_unroll(), short_opt(6), schedule);
  ASSERT_TRUE(r.mask.has_value());
  const std::size_t target = static_cast<std::size_t>(std::lround(0.05 * init.size()));
  EXPECT_EQ(r.mask->count(), target);
  EXPECT_EQ(count_nonzero_effective(r.params, &*r.mask), target);
}

TEST(EvaluatePsnr, FiniteAndZeroFilledMatchesDefinition) {
  const auto data = tiny_dataset(3);
  const auto net = evaluate_psnr(data, init_params(DenoiserArch{}, 0), nullptr, short_unroll());
  const auto zf = zero_filled_psnr(data);
  ASSERT_EQ(net.size(), 3u);
  for (double v : net) EXPECT_TRUE(std::isfinite(v));
  UnrollConfig none;
  none.num_unrolls = 0;
  EXPECT_EQ(evaluate_psnr(data, init_params(DenoiserArch{}, 0), nullptr, none), zf);
}

TEST(CountNonzeroEffective, CountsMaskedProduct) {
  DenoiserParams p = zero_params(DenoiserArch{});
  p.flat[0] = 1.0;
  p.flat[1] = 2.0;
  p.flat[2] = -1.0;
  BinaryMask m = BinaryMask::all_ones(p.size());
  EXPECT_EQ(count_nonzero_effective(p, &m), 3u);
  m.bits[1] = 0;
  EXPECT_EQ(count_nonzero_effective(p, &m), 2u);
  EXPECT_EQ(count_nonzero_effective(p, nullptr), 3u);
}

TEST(Method, NamesRoundTrip) {
  for (auto m : {Method::Dense, Method::PunIt, Method::PunWt, Method::PunAt})
    EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_EQ(to_string(Method::PunIt), "pun-it");
  EXPECT_THROW(method_from_string("snip"), std::invalid_argument);
}

TEST(Workflows, SparsityCountsMatchTargets) {
  const auto data = tiny_dataset(4);
  const WorkflowConfig cfg = small_workflow();
  const std::size_t d = parameter_count(cfg.arch);
  const auto count = [&](double level) { return static_cast<std::size_t>(std::lround(level * d)); };

  const WorkflowResult it = run_pun_it(data, {}, cfg);
  ASSERT_TRUE(it.mask && it.prune_state);
  EXPECT_EQ(it.mask->count(), count(cfg.it_sparsity));
  EXPECT_EQ(binarize_top_s(*it.prune_state), *it.mask);
  EXPECT_EQ(it.mask_objective.size(), static_cast<std::size_t>(cfg.mask_epochs));

  const WorkflowResult wt = run_pun_wt(data, {}, cfg);
  ASSERT_TRUE(wt.mask);
  EXPECT_EQ(count_nonzero_effective(wt.params, &*wt.mask), count(cfg.wt_sparsity));

  const WorkflowResult dense = run_dense(data, {}, cfg);
  EXPECT_FALSE(dense.mask.has_value());
  const WorkflowResult at = run_pun_at(data, {}, dense.params, cfg);
  ASSERT_TRUE(at.mask);
  EXPECT_EQ(count_nonzero_effective(at.params, &*at.mask), count(cfg.at_sparsity));
  EXPECT_EQ(at.reports.size(), static_cast<std::size_t>(cfg.at_rounds));
}

TEST(Workflows, PunItWithoutMaskSearchKeepsLowestIndices) {
  const auto data = tiny_dataset(2);
  WorkflowConfig cfg = small_workflow();
  cfg.mask_epochs = 0;
  cfg.opt.epochs = 0;
  const WorkflowResult it = run_pun_it(data, {}, cfg);
  const std::size_t s = it.mask->count();
  for (std::size_t j = 0; j < it.mask->size(); ++j) EXPECT_EQ(it.mask->bits[j], j < s ? 1 : 0);
}

TEST(PunAt, SingleRoundPrunesOnceAndRetrains) {
  const auto data = tiny_dataset(3);
  const DenoiserParams dense = init_params(DenoiserArch{}, 7);
  const PunAtResult r = pun_at(data, {}, dense, 0.05, 1, 1, short_unroll(), short_opt(1));
  ASSERT_EQ(r.rounds.size(), 1u);
  EXPECT_EQ(r.mask.count(), static_cast<std::size_t>(std::lround(0.05 * dense.size())));
  EXPECT_EQ(r.mask, magnitude_prune_to_count(dense, BinaryMask::all_ones(dense.size()), r.mask.count()));
}
