#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pun/denoiser.hpp"
#include "pun/optimizer.hpp"
#include "pun/pruning.hpp"
#include "pun/training.hpp"
#include "pun/unrolled_net.hpp"

namespace pun {

struct PunAtResult {
  BinaryMask mask;
  DenoiserParams params;
  std::vector<TrainReport> rounds;
};

/// Iterative magnitude pruning of a trained network: each round prunes to the
/// next geometric milestone and retrains the survivors for `retrain_epochs`.
PunAtResult pun_at(std::span<const SampleRecord> train_set, std::span<const SampleRecord> val_set,
                   const DenoiserParams& trained_params, double target_sparsity, int rounds,
                   int retrain_epochs, const UnrollConfig& cfg, const OptimizerConfig& opt);

enum class Method { Dense, PunIt, PunWt, PunAt };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// Everything needed to run any of the four training workflows.
struct WorkflowConfig {
  DenoiserArch arch;
  UnrollConfig unroll;
  OptimizerConfig opt;
  std::uint64_t init_seed = 0;

  // pruning at initialisation
  double it_sparsity = 0.03;
  double temperature = 0.2;
  double kl_weight = 1.0;
  int mask_epochs = 20;
  double mask_learning_rate = 0.05;

  // pruning while / after training
  double wt_sparsity = 0.05;
  double at_sparsity = 0.05;
  int at_rounds = 4;
  int at_retrain_epochs = 10;

  /// Adam settings for the mask-logit search: `opt` with the mask learning rate.
  OptimizerConfig mask_optimizer() const;
};

struct WorkflowResult {
  Method method = Method::Dense;
  DenoiserParams params;
  std::optional<BinaryMask> mask;
  std::optional<PruneState> prune_state;
  std::vector<double> mask_objective;
  std::vector<TrainReport> reports;
  double wall_seconds = 0.0;
};

WorkflowResult run_dense(std::span<const SampleRecord> train_set,
                         std::span<const SampleRecord> val_set, const WorkflowConfig& cfg,
                         const EpochCallback& on_epoch = {});

/// Mask search on the untrained initialisation, top-s binarisation, then
/// training of the surviving weights only.
WorkflowResult run_pun_it(std::span<const SampleRecord> train_set,
                          std::span<const SampleRecord> val_set, const WorkflowConfig& cfg,
                          const EpochCallback& on_epoch = {});

WorkflowResult run_pun_wt(std::span<const SampleRecord> train_set,
                          std::span<const SampleRecord> val_set, const WorkflowConfig& cfg,
                          const EpochCallback& on_epoch = {});

/// Iterative magnitude pruning of `dense` (a completed dense run).
WorkflowResult run_pun_at(std::span<const SampleRecord> train_set,
                          std::span<const SampleRecord> val_set, const DenoiserParams& dense,
                          const WorkflowConfig& cfg);

}  // namespace pun
